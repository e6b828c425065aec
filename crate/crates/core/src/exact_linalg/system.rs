//! Homogeneous systems of matrix equations `Σ_t L_t X_t R_t = 0` in matrix
//! unknowns. Every Hom-space computation in the crate is one of these.

use num_traits::Zero;

use super::matrix::RationalMatrix;
use super::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Unknown(usize);

#[derive(Clone, Debug, Default)]
pub struct MatrixSystem {
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    width: usize,
    rows: Vec<Vec<Rational>>,
}

impl MatrixSystem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unknown(&mut self, rows: usize, cols: usize) -> Unknown {
        self.shapes.push((rows, cols));
        self.offsets.push(self.width);
        self.width += rows * cols;
        Unknown(self.shapes.len() - 1)
    }

    pub fn shape(&self, u: Unknown) -> (usize, usize) {
        self.shapes[u.0]
    }

    pub fn num_unknowns(&self) -> usize {
        self.width
    }

    pub fn num_equations(&self) -> usize {
        self.rows.len()
    }

    /// Adds the entrywise equations of `Σ left_t · X_t · right_t = 0`.
    pub fn equation(&mut self, terms: &[(&RationalMatrix, Unknown, &RationalMatrix)]) {
        let Some((l0, _, r0)) = terms.first() else { return };
        let (out_r, out_c) = (l0.rows(), r0.cols());
        for (l, u, r) in terms {
            let (ur, uc) = self.shapes[u.0];
            assert_eq!((l.rows(), r.cols()), (out_r, out_c), "equation terms disagree in shape");
            assert_eq!((l.cols(), r.rows()), (ur, uc), "term does not fit its unknown");
        }
        for k in 0..out_r {
            for m in 0..out_c {
                let mut row = vec![Rational::zero(); self.width];
                let mut nonzero = false;
                for (l, u, r) in terms {
                    let (ur, uc) = self.shapes[u.0];
                    let off = self.offsets[u.0];
                    for i in 0..ur {
                        let a = l.get(k, i);
                        if a.is_zero() {
                            continue;
                        }
                        for j in 0..uc {
                            let b = r.get(j, m);
                            if !b.is_zero() {
                                row[off + i * uc + j] += a * b;
                                nonzero = true;
                            }
                        }
                    }
                }
                if nonzero && row.iter().any(|x| !x.is_zero()) {
                    self.rows.push(row);
                }
            }
        }
    }

    /// `left · X · right = 0` for a single unknown.
    pub fn annihilate(&mut self, left: &RationalMatrix, u: Unknown, right: &RationalMatrix) {
        self.equation(&[(left, u, right)]);
    }

    /// Forces `X = 0`.
    pub fn vanish(&mut self, u: Unknown) {
        let (r, c) = self.shapes[u.0];
        self.annihilate(&RationalMatrix::identity(r), u, &RationalMatrix::identity(c));
    }

    pub fn coefficient_matrix(&self) -> RationalMatrix {
        if self.rows.is_empty() {
            return RationalMatrix::zeros(0, self.width);
        }
        RationalMatrix::from_rows(self.rows.clone()).expect("rows share the system width")
    }

    /// Unpacks a flat solution vector into one matrix per unknown.
    pub fn unpack(&self, v: &[Rational]) -> Vec<RationalMatrix> {
        self.shapes
            .iter()
            .zip(&self.offsets)
            .map(|(&(r, c), &off)| RationalMatrix::new(r, c, v[off..off + r * c].to_vec()).expect("block size"))
            .collect()
    }

    pub fn pack(&self, blocks: &[RationalMatrix]) -> Vec<Rational> {
        assert_eq!(blocks.len(), self.shapes.len());
        blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    /// Basis of the solution space, each element unpacked per unknown.
    pub fn solution_basis(&self) -> Vec<Vec<RationalMatrix>> {
        let k = self.coefficient_matrix().kernel_columns();
        (0..k.cols()).map(|j| self.unpack(&k.column(j))).collect()
    }

    pub fn solution_dim(&self) -> usize {
        self.width - self.coefficient_matrix().rank()
    }

    pub fn is_solution(&self, blocks: &[RationalMatrix]) -> bool {
        let v = self.pack(blocks);
        self.coefficient_matrix().apply(&v).iter().all(Zero::is_zero)
    }
}

/// Matrix of `X ↦ left · X · right` acting on row-major vectorizations.
pub fn sandwich_matrix(left: &RationalMatrix, right: &RationalMatrix) -> RationalMatrix {
    let (lr, lc) = left.shape();
    let (rr, rc) = right.shape();
    let mut out = RationalMatrix::zeros(lr * rc, lc * rr);
    for k in 0..lr {
        for i in 0..lc {
            let a = left.get(k, i);
            if a.is_zero() {
                continue;
            }
            for j in 0..rr {
                for m in 0..rc {
                    let b = right.get(j, m);
                    if !b.is_zero() {
                        out.set(k * rc + m, i * rr + j, a * b);
                    }
                }
            }
        }
    }
    out
}
