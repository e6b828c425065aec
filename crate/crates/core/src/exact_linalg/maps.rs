//! Linear maps and the two universal constructions on spans/cospans of them.

use serde::Serialize;

use super::matrix::RationalMatrix;
use super::subspace::Subspace;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct LinearMap {
    domain_dim: usize,
    codomain_dim: usize,
    matrix: RationalMatrix,
}

impl LinearMap {
    pub fn new(domain_dim: usize, codomain_dim: usize, matrix: RationalMatrix) -> Result<Self> {
        let matrix = matrix.conform(codomain_dim, domain_dim)?;
        Ok(LinearMap { domain_dim, codomain_dim, matrix })
    }

    pub fn from_matrix(matrix: RationalMatrix) -> Self {
        LinearMap { domain_dim: matrix.cols(), codomain_dim: matrix.rows(), matrix }
    }

    pub fn zero(domain_dim: usize, codomain_dim: usize) -> Self {
        Self::from_matrix(RationalMatrix::zeros(codomain_dim, domain_dim))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_matrix(RationalMatrix::identity(n))
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn kernel(&self) -> Subspace {
        if self.codomain_dim == 0 {
            return Subspace::full(self.domain_dim);
        }
        Subspace::span_columns(&self.matrix.kernel_columns())
    }

    pub fn image(&self) -> Subspace {
        Subspace::full(self.domain_dim).image_under(&self.matrix)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &LinearMap) -> Result<LinearMap> {
        if first.codomain_dim != self.domain_dim {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose {}->{} after {}->{}",
                self.domain_dim, self.codomain_dim, first.domain_dim, first.codomain_dim
            )));
        }
        Ok(Self::from_matrix(self.matrix.mul(&first.matrix)))
    }
}

/// Fibre product `{(a, b) : f(a) = g(b)}` inside `dom f ⊕ dom g`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub space: Subspace,
    /// `dim P -> dom f`, in the canonical coordinates of `space`.
    pub to_f: RationalMatrix,
    /// `dim P -> dom g`.
    pub to_g: RationalMatrix,
}

impl Pullback {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The unique map `dom(p) -> P` induced by a commuting pair `f p = g q`.
    pub fn factor(&self, p: &RationalMatrix, q: &RationalMatrix) -> Result<RationalMatrix> {
        self.space.coordinates(&p.vstack(q))
    }
}

pub fn pullback(f: &LinearMap, g: &LinearMap) -> Result<Pullback> {
    if f.codomain_dim != g.codomain_dim {
        return Err(Error::CodomainMismatch(f.codomain_dim, g.codomain_dim));
    }
    let m = f.domain_dim;
    let n = g.domain_dim;
    let stacked = f.matrix.hstack(&-&g.matrix);
    let space =
        if f.codomain_dim == 0 { Subspace::full(m + n) } else { Subspace::span_columns(&stacked.kernel_columns()) };
    let inc = space.inclusion();
    Ok(Pullback { to_f: inc.submatrix(0..m, 0..space.dim()), to_g: inc.submatrix(m..m + n, 0..space.dim()), space })
}

/// Amalgamated sum `(cod f ⊕ cod g) / {(f x, -g x)}`.
#[derive(Clone, Debug)]
pub struct Pushout {
    pub relations: Subspace,
    /// `cod f -> Q`.
    pub from_f: RationalMatrix,
    /// `cod g -> Q`.
    pub from_g: RationalMatrix,
}

impl Pushout {
    pub fn dim(&self) -> usize {
        self.relations.codim()
    }

    /// The unique map `Q -> Z` induced by a pair `p: cod f -> Z`, `q: cod g -> Z`
    /// with `p f = q g`.
    pub fn factor(&self, p: &RationalMatrix, q: &RationalMatrix) -> Result<RationalMatrix> {
        let joint = p.hstack(q);
        if !joint.mul(&self.relations.inclusion()).is_zero() {
            return Err(Error::Precondition("pair does not coequalize the span".into()));
        }
        Ok(joint.mul(&self.relations.quotient_section()))
    }
}

pub fn pushout(f: &LinearMap, g: &LinearMap) -> Result<Pushout> {
    if f.domain_dim != g.domain_dim {
        return Err(Error::DomainMismatch(f.domain_dim, g.domain_dim));
    }
    let a = f.codomain_dim;
    let b = g.codomain_dim;
    let stacked = f.matrix.vstack(&-&g.matrix);
    let relations = Subspace::full(f.domain_dim).image_under(&stacked);
    let q = relations.quotient_matrix();
    Ok(Pushout { from_f: q.submatrix(0..q.rows(), 0..a), from_g: q.submatrix(0..q.rows(), a..a + b), relations })
}
