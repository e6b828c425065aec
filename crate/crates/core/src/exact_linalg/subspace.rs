//! Subspaces of `Q^n` in canonical form.
//!
//! A subspace is stored as the reduced row-echelon basis of any spanning set, so
//! two subspaces are equal exactly when their representatives are equal. The
//! pivot structure also gives canonical coordinates (the entries of a member
//! vector at the pivot columns) and a canonical quotient map.

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::matrix::RationalMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: RationalMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: RationalMatrix::zeros(0, ambient_dim), pivots: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace { ambient_dim, basis: RationalMatrix::identity(ambient_dim), pivots: (0..ambient_dim).collect() }
    }

    /// Span of the rows of `rows`.
    pub fn from_rows(ambient_dim: usize, rows: &RationalMatrix) -> Result<Self> {
        if rows.cols() != ambient_dim && !(rows.rows() == 0) {
            return Err(Error::OutsideAmbient(ambient_dim));
        }
        if rows.rows() == 0 {
            return Ok(Self::zero(ambient_dim));
        }
        let (r, pivots) = rows.rref_with_pivots();
        let basis = r.submatrix(0..pivots.len(), 0..ambient_dim);
        Ok(Subspace { ambient_dim, basis, pivots })
    }

    /// Span of the columns of `cols`.
    pub fn span_columns(cols: &RationalMatrix) -> Self {
        Self::from_rows(cols.rows(), &cols.transpose()).expect("columns live in the ambient space")
    }

    pub fn span_vectors(ambient_dim: usize, vectors: &[Vec<Rational>]) -> Result<Self> {
        if vectors.iter().any(|v| v.len() != ambient_dim) {
            return Err(Error::OutsideAmbient(ambient_dim));
        }
        let m = RationalMatrix::from_rows(vectors.to_vec())?;
        Self::from_rows(ambient_dim, &m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// RREF basis, one vector per row.
    pub fn basis(&self) -> &RationalMatrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// The inclusion `Q^dim -> Q^ambient` in canonical coordinates (basis as columns).
    pub fn inclusion(&self) -> RationalMatrix {
        self.basis.transpose()
    }

    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let mut residual = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = residual[p].clone();
            if c.is_zero() {
                continue;
            }
            for (j, x) in self.basis.row(r).iter().enumerate() {
                if !x.is_zero() {
                    residual[j] -= &c * x;
                }
            }
        }
        residual.iter().all(Zero::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimensions");
        (0..other.dim()).all(|i| self.contains_vector(other.basis.row(i)))
    }

    /// Whether every column of `m` lies in the subspace.
    pub fn contains_columns(&self, m: &RationalMatrix) -> bool {
        (0..m.cols()).all(|j| self.contains_vector(&m.column(j)))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimensions");
        Self::from_rows(self.ambient_dim, &self.basis.vstack(&other.basis)).expect("same ambient")
    }

    /// Rows spanning the annihilator `{y : y . x = 0 for all x in self}`.
    pub fn annihilator_rows(&self) -> RationalMatrix {
        if self.dim() == 0 {
            return RationalMatrix::identity(self.ambient_dim);
        }
        self.basis.kernel_columns().transpose()
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient_dim, other.ambient_dim, "ambient dimensions");
        let eqs = self.annihilator_rows().vstack(&other.annihilator_rows());
        if eqs.rows() == 0 {
            return Self::full(self.ambient_dim);
        }
        Self::span_columns(&eqs.kernel_columns()).with_ambient(self.ambient_dim)
    }

    fn with_ambient(mut self, n: usize) -> Self {
        if self.basis.cols() != n {
            self.basis = RationalMatrix::zeros(0, n);
        }
        self.ambient_dim = n;
        self
    }

    /// Image under a linear map given by a `m x ambient` matrix.
    pub fn image_under(&self, map: &RationalMatrix) -> Subspace {
        assert_eq!(map.cols(), self.ambient_dim, "map domain");
        let cols = map.mul(&self.inclusion());
        Self::span_columns(&cols).with_ambient(map.rows())
    }

    /// Preimage of `self` under a `ambient x n` matrix.
    pub fn preimage_under(&self, map: &RationalMatrix) -> Subspace {
        assert_eq!(map.rows(), self.ambient_dim, "map codomain");
        let eqs = self.annihilator_rows();
        if eqs.rows() == 0 {
            return Self::full(map.cols());
        }
        Self::span_columns(&eqs.mul(map).kernel_columns()).with_ambient(map.cols())
    }

    pub fn is_stable_under(&self, map: &RationalMatrix) -> bool {
        self.contains_columns(&map.mul(&self.inclusion()))
    }

    /// Canonical coordinates of column vectors lying in the subspace.
    pub fn coordinates(&self, cols: &RationalMatrix) -> Result<RationalMatrix> {
        if !self.contains_columns(cols) {
            return Err(Error::Precondition("vectors do not lie in the subspace".into()));
        }
        Ok(cols.select_rows(&self.pivots))
    }

    /// A sub-subspace expressed in the canonical coordinates of `self`.
    pub fn relative(&self, sub: &Subspace) -> Result<Subspace> {
        let coords = self.coordinates(&sub.inclusion())?;
        Ok(Self::span_columns(&coords).with_ambient(self.dim()))
    }

    /// Columns not carrying a pivot; their unit vectors span a canonical complement.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ambient_dim).filter(|c| !self.pivots.contains(c)).collect()
    }

    /// Canonical projection `Q^ambient -> Q^ambient / self`, a `codim x ambient` matrix.
    pub fn quotient_matrix(&self) -> RationalMatrix {
        let free = self.free_columns();
        let mut q = RationalMatrix::zeros(free.len(), self.ambient_dim);
        for (k, &f) in free.iter().enumerate() {
            q.set(k, f, Rational::one());
            for (r, &p) in self.pivots.iter().enumerate() {
                let b = self.basis.get(r, f);
                if !b.is_zero() {
                    q.set(k, p, -b);
                }
            }
        }
        q
    }

    /// Right inverse of [`Self::quotient_matrix`] sending class coordinates to the
    /// canonical complement.
    pub fn quotient_section(&self) -> RationalMatrix {
        let free = self.free_columns();
        let mut s = RationalMatrix::zeros(self.ambient_dim, free.len());
        for (k, &f) in free.iter().enumerate() {
            s.set(f, k, Rational::one());
        }
        s
    }

    /// Transports the subspace along an invertible change of coordinates.
    pub fn transport(&self, change: &RationalMatrix) -> Subspace {
        self.image_under(change)
    }
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.basis.serialize(s)
    }
}

/// Deserialized spanning rows; the ambient dimension is supplied by the owner.
#[derive(Clone, Debug)]
pub struct SpanningRows(pub RationalMatrix);

impl<'de> Deserialize<'de> for SpanningRows {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        RationalMatrix::deserialize(d).map(SpanningRows)
    }
}

impl SpanningRows {
    pub fn into_subspace(self, ambient_dim: usize) -> Result<Subspace> {
        let m = self.0.conform_rows(ambient_dim)?;
        Subspace::from_rows(ambient_dim, &m)
    }
}

impl RationalMatrix {
    fn conform_rows(self, cols: usize) -> Result<RationalMatrix> {
        let rows = self.rows();
        if self.cols() == cols {
            Ok(self)
        } else {
            self.conform(rows, cols)
        }
    }
}
