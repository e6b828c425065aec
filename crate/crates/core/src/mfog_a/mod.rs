//! Level-≤1 Ogus objects extended by a vector-group datum: maps
//! `α: A₀ -> A₁`, `β: B₀ -> B₁`, `δ: B₁ ≅ T/Fil⁰`, `γ: A₀ -> T` and
//! `ε: A₀ -> B₀` with a cartesian square `π γ = δ β ε`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{int, pullback, pushout, LinearMap, MatrixSystem, RationalMatrix, Subspace, Unknown};
use crate::laumon::LinearizedLaumonMotive;
use crate::ogus::{
    self, add_ogus_constraints, is_level_le_1, validate_with, Failure, OgusMorphism, OgusObject, ValidationReport,
    ValidationStatus,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFOgAObject {
    base: OgusObject,
    a0: usize,
    a1: usize,
    b0: usize,
    b1: usize,
    alpha: RationalMatrix,
    beta: RationalMatrix,
    delta: RationalMatrix,
    gamma: RationalMatrix,
    epsilon: RationalMatrix,
}

impl MFOgAObject {
    /// Checks matrix shapes only; the remaining invariants are reported by
    /// [`validate_a`].
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        base: OgusObject,
        a0: usize,
        a1: usize,
        b0: usize,
        b1: usize,
        alpha: RationalMatrix,
        beta: RationalMatrix,
        delta: RationalMatrix,
        gamma: RationalMatrix,
        epsilon: RationalMatrix,
    ) -> Result<Self> {
        let t = base.t_dr();
        let lie_g = base.fil0().codim();
        Ok(MFOgAObject {
            alpha: alpha.conform(a1, a0)?,
            beta: beta.conform(b1, b0)?,
            delta: delta.conform(lie_g, b1)?,
            gamma: gamma.conform(t, a0)?,
            epsilon: epsilon.conform(b0, a0)?,
            base,
            a0,
            a1,
            b0,
            b1,
        })
    }

    pub fn zero() -> Self {
        embed_level1(&OgusObject::zero()).expect("zero object")
    }

    pub fn base(&self) -> &OgusObject {
        &self.base
    }

    pub fn t_dr(&self) -> usize {
        self.base.t_dr()
    }

    pub fn dims(&self) -> (usize, usize, usize, usize) {
        (self.a0, self.a1, self.b0, self.b1)
    }

    pub fn alpha(&self) -> &RationalMatrix {
        &self.alpha
    }

    pub fn beta(&self) -> &RationalMatrix {
        &self.beta
    }

    pub fn delta(&self) -> &RationalMatrix {
        &self.delta
    }

    pub fn gamma(&self) -> &RationalMatrix {
        &self.gamma
    }

    pub fn epsilon(&self) -> &RationalMatrix {
        &self.epsilon
    }

    /// Returns a copy with `ε` replaced, keeping every other datum.
    pub fn with_epsilon(&self, epsilon: RationalMatrix) -> Result<Self> {
        MFOgAObject { epsilon: epsilon.conform(self.b0, self.a0)?, ..self.clone() }.checked_shapes()
    }

    fn checked_shapes(self) -> Result<Self> {
        let MFOgAObject { base, a0, a1, b0, b1, alpha, beta, delta, gamma, epsilon } = self;
        MFOgAObject::new(base, a0, a1, b0, b1, alpha, beta, delta, gamma, epsilon)
    }

    fn pi(&self) -> RationalMatrix {
        self.base.fil0().quotient_matrix()
    }

    fn lie_g(&self) -> usize {
        self.base.fil0().codim()
    }
}

#[derive(Serialize, Deserialize)]
struct ObjectDoc {
    #[serde(flatten)]
    base: OgusObject,
    a0: usize,
    a1: usize,
    b0: usize,
    b1: usize,
    alpha: RationalMatrix,
    beta: RationalMatrix,
    delta: RationalMatrix,
    gamma: RationalMatrix,
    epsilon: RationalMatrix,
}

impl Serialize for MFOgAObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let o = self.clone();
        ObjectDoc {
            base: o.base,
            a0: o.a0,
            a1: o.a1,
            b0: o.b0,
            b1: o.b1,
            alpha: o.alpha,
            beta: o.beta,
            delta: o.delta,
            gamma: o.gamma,
            epsilon: o.epsilon,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MFOgAObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let o = ObjectDoc::deserialize(d)?;
        MFOgAObject::new(o.base, o.a0, o.a1, o.b0, o.b1, o.alpha, o.beta, o.delta, o.gamma, o.epsilon)
            .map_err(D::Error::custom)
    }
}

fn failure(clause: &str, detail: String) -> Failure {
    Failure { clause: clause.into(), place: None, index: None, detail }
}

/// The invariants beyond the base object: level, `δ` invertible, the square,
/// cartesianness and `ker ε ≅ Fil⁰` via `γ`.
pub fn structural_failures(o: &MFOgAObject) -> Vec<Failure> {
    let mut out = Vec::new();
    if !is_level_le_1(&o.base) {
        out.push(failure("level", "base object is not of level <= 1".into()));
    }
    if !o.delta.is_invertible() {
        out.push(failure("delta_invertible", format!("delta is {}x{} of rank {}", o.lie_g(), o.b1, o.delta.rank())));
    }
    let pi = o.pi();
    let bottom = o.delta.mul(&o.beta);
    if pi.mul(&o.gamma) != bottom.mul(&o.epsilon) {
        out.push(failure("square", "π ∘ gamma differs from delta ∘ beta ∘ epsilon".into()));
    }
    let pb = pullback(&LinearMap::from_matrix(pi), &LinearMap::from_matrix(bottom)).expect("common codomain");
    let joint = o.gamma.vstack(&o.epsilon);
    let rank = joint.rank();
    let cartesian = rank == o.a0 && pb.dim() == o.a0 && pb.space.contains_columns(&joint);
    if !cartesian {
        out.push(failure(
            "cartesian",
            format!(
                "(gamma, epsilon) has rank {rank} on A_0 of dimension {}; the pullback has dimension {}",
                o.a0,
                pb.dim()
            ),
        ));
    }
    let k = Subspace::span_columns(&o.epsilon.kernel_columns());
    let image = k.image_under(&o.gamma);
    if image.dim() != k.dim() || image != o.base.fil0() {
        out.push(failure("fil0_kernel", "gamma does not map ker(epsilon) isomorphically onto Fil^0".into()));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AReport {
    pub failures: Vec<Failure>,
    pub base: ValidationReport,
}

impl AReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty() && self.base.is_valid()
    }

    pub fn status(&self) -> ValidationStatus {
        if !self.failures.is_empty() {
            ValidationStatus::Invalid
        } else {
            self.base.status()
        }
    }

    pub fn fails_clause(&self, clause: &str) -> bool {
        self.failures.iter().any(|f| f.clause == clause) || self.base.fails_clause(clause)
    }

    pub fn clauses(&self) -> Vec<String> {
        self.failures.iter().chain(&self.base.failures).map(|f| f.clause.clone()).collect()
    }
}

pub fn validate_a(o: &MFOgAObject) -> AReport {
    validate_a_with(o, None)
}

pub fn validate_a_with(o: &MFOgAObject, seed: Option<u64>) -> AReport {
    AReport { failures: structural_failures(o), base: validate_with(&o.base, seed) }
}

/// `(T, Fil) ↦ (T, Fil, 0, 0)`: `A₀ = Fil⁰`, `A₁ = 0`, `B₀ = 0`, `B₁ = T/Fil⁰`.
pub fn embed_level1(o: &OgusObject) -> Result<MFOgAObject> {
    if !is_level_le_1(o) {
        return Err(Error::LevelViolation("embedding needs Fil^1 = 0, Fil^-1 = T and weights in [-2, 0]".into()));
    }
    let fil0 = o.fil0();
    let (u, g) = (fil0.dim(), fil0.codim());
    MFOgAObject::new(
        o.clone(),
        u,
        0,
        0,
        g,
        RationalMatrix::zeros(0, u),
        RationalMatrix::zeros(g, 0),
        RationalMatrix::identity(g),
        fil0.inclusion(),
        RationalMatrix::zeros(0, u),
    )
}

/// `A₀ = U(M)`, `A₁ = V`, `B₀ = Lie F`, `B₁ = Lie G_×` with `δ = 1`, `β = du_×`,
/// `ε = q`.
pub fn t_a(m: &LinearizedLaumonMotive) -> Result<MFOgAObject> {
    let o = MFOgAObject::new(
        m.etale().clone(),
        m.u_m(),
        m.v(),
        m.lie_f(),
        m.lie_g(),
        m.alpha().clone(),
        m.du_times().clone(),
        RationalMatrix::identity(m.lie_g()),
        m.gamma().clone(),
        m.q().clone(),
    )?;
    let failures = structural_failures(&o);
    if let Some(f) = failures.first() {
        return Err(Error::Invariant(format!("t_a output fails {}: {}", f.clause, f.detail)));
    }
    Ok(o)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MFOgAMorphism {
    source: MFOgAObject,
    target: MFOgAObject,
    pub eta: RationalMatrix,
    pub on_a0: RationalMatrix,
    pub on_a1: RationalMatrix,
    pub on_b0: RationalMatrix,
    pub on_b1: RationalMatrix,
}

#[derive(Serialize)]
struct MorphismDoc<'a> {
    eta: &'a RationalMatrix,
    on_a0: &'a RationalMatrix,
    on_a1: &'a RationalMatrix,
    on_b0: &'a RationalMatrix,
    on_b1: &'a RationalMatrix,
}

impl Serialize for MFOgAMorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MorphismDoc { eta: &self.eta, on_a0: &self.on_a0, on_a1: &self.on_a1, on_b0: &self.on_b0, on_b1: &self.on_b1 }
            .serialize(s)
    }
}

#[derive(Deserialize)]
struct MorphismIn {
    source: MFOgAObject,
    target: MFOgAObject,
    eta: RationalMatrix,
    on_a0: RationalMatrix,
    on_a1: RationalMatrix,
    on_b0: RationalMatrix,
    on_b1: RationalMatrix,
}

impl<'de> Deserialize<'de> for MFOgAMorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = MorphismIn::deserialize(d)?;
        MFOgAMorphism::new(m.source, m.target, m.eta, m.on_a0, m.on_a1, m.on_b0, m.on_b1).map_err(D::Error::custom)
    }
}

struct AUnknowns {
    eta: Unknown,
    a0: Unknown,
    a1: Unknown,
    b0: Unknown,
    b1: Unknown,
}

fn a_system(o: &MFOgAObject, p: &MFOgAObject) -> (MatrixSystem, AUnknowns) {
    let mut sys = MatrixSystem::new();
    let x = AUnknowns {
        eta: sys.unknown(p.t_dr(), o.t_dr()),
        a0: sys.unknown(p.a0, o.a0),
        a1: sys.unknown(p.a1, o.a1),
        b0: sys.unknown(p.b0, o.b0),
        b1: sys.unknown(p.b1, o.b1),
    };
    let id = RationalMatrix::identity;
    add_ogus_constraints(&mut sys, x.eta, &o.base, &p.base);
    sys.equation(&[(&id(p.a1), x.a1, &o.alpha), (&-&p.alpha, x.a0, &id(o.a0))]);
    sys.equation(&[(&id(p.b1), x.b1, &o.beta), (&-&p.beta, x.b0, &id(o.b0))]);
    let induced = o.base.fil0().quotient_section().mul(&o.delta);
    sys.equation(&[(&p.delta, x.b1, &id(o.b1)), (&-&p.pi(), x.eta, &induced)]);
    sys.equation(&[(&p.gamma, x.a0, &id(o.a0)), (&-&id(p.t_dr()), x.eta, &o.gamma)]);
    sys.equation(&[(&p.epsilon, x.a0, &id(o.a0)), (&-&id(p.b0), x.b0, &o.epsilon)]);
    (sys, x)
}

impl MFOgAMorphism {
    pub fn new(
        source: MFOgAObject,
        target: MFOgAObject,
        eta: RationalMatrix,
        on_a0: RationalMatrix,
        on_a1: RationalMatrix,
        on_b0: RationalMatrix,
        on_b1: RationalMatrix,
    ) -> Result<Self> {
        let blocks = [
            eta.conform(target.t_dr(), source.t_dr())?,
            on_a0.conform(target.a0, source.a0)?,
            on_a1.conform(target.a1, source.a1)?,
            on_b0.conform(target.b0, source.b0)?,
            on_b1.conform(target.b1, source.b1)?,
        ];
        let (sys, _) = a_system(&source, &target);
        if !sys.is_solution(&blocks) {
            return Err(Error::Invariant("components do not intertwine the structure maps".into()));
        }
        let [eta, on_a0, on_a1, on_b0, on_b1] = blocks;
        Ok(MFOgAMorphism { source, target, eta, on_a0, on_a1, on_b0, on_b1 })
    }

    pub fn identity(o: &MFOgAObject) -> Self {
        let id = RationalMatrix::identity;
        MFOgAMorphism::new(o.clone(), o.clone(), id(o.t_dr()), id(o.a0), id(o.a1), id(o.b0), id(o.b1))
            .expect("identity")
    }

    pub fn source(&self) -> &MFOgAObject {
        &self.source
    }

    pub fn target(&self) -> &MFOgAObject {
        &self.target
    }

    pub fn base_morphism(&self) -> OgusMorphism {
        OgusMorphism::new(self.source.base.clone(), self.target.base.clone(), self.eta.clone()).expect("checked")
    }

    /// Every component invertible with an inverse that is again a morphism.
    pub fn is_iso(&self) -> bool {
        let inv = |m: &RationalMatrix| m.inverse();
        match (inv(&self.eta), inv(&self.on_a0), inv(&self.on_a1), inv(&self.on_b0), inv(&self.on_b1)) {
            (Some(e), Some(a0), Some(a1), Some(b0), Some(b1)) => {
                MFOgAMorphism::new(self.target.clone(), self.source.clone(), e, a0, a1, b0, b1).is_ok()
            }
            _ => false,
        }
    }
}

/// A basis of morphisms `o -> p`.
pub fn hom_a(o: &MFOgAObject, p: &MFOgAObject) -> Vec<MFOgAMorphism> {
    let (sys, _) = a_system(o, p);
    sys.solution_basis()
        .into_iter()
        .map(|b| MFOgAMorphism {
            source: o.clone(),
            target: p.clone(),
            eta: b[0].clone(),
            on_a0: b[1].clone(),
            on_a1: b[2].clone(),
            on_b0: b[3].clone(),
            on_b1: b[4].clone(),
        })
        .collect()
}

pub fn hom_a_dim(o: &MFOgAObject, p: &MFOgAObject) -> usize {
    a_system(o, p).0.solution_dim()
}

/// Searches random integer combinations of a Hom basis for an isomorphism.
pub fn find_isomorphism(o: &MFOgAObject, p: &MFOgAObject, seed: u64) -> Option<MFOgAMorphism> {
    if (o.t_dr(), o.dims()) != (p.t_dr(), p.dims()) {
        return None;
    }
    let basis = hom_a(o, p);
    let (sys, _) = a_system(o, p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let mut v = vec![int(0); sys.num_unknowns()];
        for f in &basis {
            let c = int(rng.gen_range(-4..=4));
            let packed = sys.pack(&[f.eta.clone(), f.on_a0.clone(), f.on_a1.clone(), f.on_b0.clone(), f.on_b1.clone()]);
            for (x, y) in v.iter_mut().zip(packed) {
                *x += &c * y;
            }
        }
        let b = sys.unpack(&v);
        let m = MFOgAMorphism {
            source: o.clone(),
            target: p.clone(),
            eta: b[0].clone(),
            on_a0: b[1].clone(),
            on_a1: b[2].clone(),
            on_b0: b[3].clone(),
            on_b1: b[4].clone(),
        };
        if m.is_iso() {
            return Some(m);
        }
    }
    None
}

/// `S(o) = (T ⊔_{Fil⁰} A₀) ⊕ A₁` with its three canonical legs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharpReport {
    pub dim: usize,
    pub dim_t: usize,
    pub dim_a0: usize,
    pub dim_fil0: usize,
    pub dim_a1: usize,
    pub leg_t: RationalMatrix,
    pub leg_a0: RationalMatrix,
    pub leg_a1: RationalMatrix,
}

pub fn sharp_s(o: &MFOgAObject) -> Result<SharpReport> {
    if let Some(f) = structural_failures(o).first() {
        return Err(Error::Invariant(format!("object fails {}: {}", f.clause, f.detail)));
    }
    let fil0 = o.base.fil0();
    let joint = o.gamma.vstack(&o.epsilon);
    let span = Subspace::span_columns(&joint);
    let to_a0 = span.coordinates(&joint)?.inverse().expect("cartesian");
    let target = fil0.inclusion().vstack(&RationalMatrix::zeros(o.b0, fil0.dim()));
    let fil0_in_a0 = to_a0.mul(&span.coordinates(&target)?);
    let po = pushout(&LinearMap::from_matrix(fil0.inclusion()), &LinearMap::from_matrix(fil0_in_a0))?;
    let (p, a1) = (po.dim(), o.a1);
    let dim = p + a1;
    Ok(SharpReport {
        dim,
        dim_t: o.t_dr(),
        dim_a0: o.a0,
        dim_fil0: fil0.dim(),
        dim_a1: a1,
        leg_t: po.from_f.vstack(&RationalMatrix::zeros(a1, o.t_dr())),
        leg_a0: po.from_g.vstack(&RationalMatrix::zeros(a1, o.a0)),
        leg_a1: RationalMatrix::zeros(p, a1).vstack(&RationalMatrix::identity(a1)),
    })
}

/// Outcome of a componentwise kernel or cokernel.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Partial {
    Built { object: Box<MFOgAObject>, morphism: Box<MFOgAMorphism>, report: AReport },
    Failed { clauses: Vec<String>, detail: String },
}

impl Partial {
    pub fn object(&self) -> Option<&MFOgAObject> {
        match self {
            Partial::Built { object, .. } => Some(object),
            Partial::Failed { .. } => None,
        }
    }

    pub fn failed_clauses(&self) -> &[String] {
        match self {
            Partial::Built { .. } => &[],
            Partial::Failed { clauses, .. } => clauses,
        }
    }
}

fn kernel_of(m: &RationalMatrix) -> Subspace {
    Subspace::span_columns(&m.kernel_columns())
}

fn image_of(m: &RationalMatrix) -> Subspace {
    Subspace::full(m.cols()).image_under(m)
}

fn finish(object: MFOgAObject, morphism: impl FnOnce(&MFOgAObject) -> Result<MFOgAMorphism>) -> Result<Partial> {
    let report = validate_a(&object);
    if report.status() == ValidationStatus::Invalid {
        return Ok(Partial::Failed { clauses: report.clauses(), detail: "componentwise object is not valid".into() });
    }
    let morphism = morphism(&object)?;
    Ok(Partial::Built { object: Box::new(object), morphism: Box::new(morphism), report })
}

fn failed(clause: &str, detail: &str) -> Result<Partial> {
    Ok(Partial::Failed { clauses: vec![clause.into()], detail: detail.into() })
}

/// Componentwise kernel; fails with the violated invariant when the result is
/// not an object.
pub fn kernel_a(m: &MFOgAMorphism) -> Result<Partial> {
    let (o, eta) = (&m.source, m.base_morphism());
    let base = match ogus::kernel(&eta) {
        Ok(k) => k,
        Err(Error::NotStable(p)) => return failed("frobenius_stable", &format!("kernel is not stable at {p}")),
        Err(e) => return Err(e),
    };
    let incl_t = base.morphism.matrix().clone();
    let ks = [kernel_of(&m.on_a0), kernel_of(&m.on_a1), kernel_of(&m.on_b0), kernel_of(&m.on_b1)];
    let [k0, k1, kb0, kb1] = &ks;
    let kt = Subspace::span_columns(&incl_t);
    let alpha = k1.coordinates(&o.alpha.mul(&k0.inclusion()))?;
    let beta = kb1.coordinates(&o.beta.mul(&kb0.inclusion()))?;
    let gamma = kt.coordinates(&o.gamma.mul(&k0.inclusion()))?;
    let epsilon = kb0.coordinates(&o.epsilon.mul(&k0.inclusion()))?;
    let lie_k = o.pi().mul(&incl_t).mul(&base.object.fil0().quotient_section());
    let lie_span = Subspace::span_columns(&lie_k);
    let d = o.delta.mul(&kb1.inclusion());
    if !lie_span.contains_columns(&d) || lie_span.dim() != kb1.dim() {
        return failed("delta_invertible", "delta does not restrict to an isomorphism of the kernels");
    }
    let delta = lie_span.coordinates(&lie_k)?.inverse().expect("injective").mul(&lie_span.coordinates(&d)?);
    let object =
        MFOgAObject::new(base.object, k0.dim(), k1.dim(), kb0.dim(), kb1.dim(), alpha, beta, delta, gamma, epsilon)?;
    finish(object, |k| {
        MFOgAMorphism::new(
            k.clone(),
            o.clone(),
            incl_t,
            k0.inclusion(),
            k1.inclusion(),
            kb0.inclusion(),
            kb1.inclusion(),
        )
    })
}

/// Componentwise cokernel; fails with the violated invariant when the result
/// is not an object.
pub fn cokernel_a(m: &MFOgAMorphism) -> Result<Partial> {
    let (p, eta) = (&m.target, m.base_morphism());
    let base = match ogus::cokernel(&eta) {
        Ok(c) => c,
        Err(Error::NotStable(pl)) => return failed("frobenius_stable", &format!("image is not stable at {pl}")),
        Err(e) => return Err(e),
    };
    let proj_t = base.morphism.matrix().clone();
    let [i0, i1, ib0, ib1] = [image_of(&m.on_a0), image_of(&m.on_a1), image_of(&m.on_b0), image_of(&m.on_b1)];
    let alpha = i1.quotient_matrix().mul(&p.alpha).mul(&i0.quotient_section());
    let beta = ib1.quotient_matrix().mul(&p.beta).mul(&ib0.quotient_section());
    let gamma = proj_t.mul(&p.gamma).mul(&i0.quotient_section());
    let epsilon = ib0.quotient_matrix().mul(&p.epsilon).mul(&i0.quotient_section());
    let lie_c = base.object.fil0().quotient_matrix().mul(&proj_t).mul(&p.base.fil0().quotient_section());
    let delta = lie_c.mul(&p.delta).mul(&ib1.quotient_section());
    if delta.rows() != delta.cols() {
        return failed("delta_invertible", "delta does not descend to an isomorphism of the cokernels");
    }
    let object = MFOgAObject::new(
        base.object,
        i0.codim(),
        i1.codim(),
        ib0.codim(),
        ib1.codim(),
        alpha,
        beta,
        delta,
        gamma,
        epsilon,
    )?;
    finish(object, |c| {
        MFOgAMorphism::new(
            p.clone(),
            c.clone(),
            proj_t,
            i0.quotient_matrix(),
            i1.quotient_matrix(),
            ib0.quotient_matrix(),
            ib1.quotient_matrix(),
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtered_phi::{Filtration, Place, WeightFiltration};
    use crate::laumon::{assemble, build_gamma, AlphaRowData, TimesMotiveData};

    fn places() -> Vec<Place> {
        vec![Place::new("v2", 2).unwrap()]
    }

    fn line(fil0_full: bool) -> OgusObject {
        let hodge = if fil0_full {
            Filtration::new(1, vec![(-1, Subspace::full(1)), (0, Subspace::full(1)), (1, Subspace::zero(1))]).unwrap()
        } else {
            Filtration::new(1, vec![(-1, Subspace::full(1)), (0, Subspace::zero(1))]).unwrap()
        };
        OgusObject::new(1, WeightFiltration::trivial(1), hodge, vec![]).unwrap()
    }

    /// Étale part a Tate line, `Lie F = ℚ`, `du_× = 0`, `U(M) = ℚ`, `q = 1`.
    fn vector_motive() -> LinearizedLaumonMotive {
        let times = TimesMotiveData::new(line(false), 1, RationalMatrix::zeros(1, 1)).unwrap();
        let row = AlphaRowData {
            v: 0,
            u_m: 1,
            j: RationalMatrix::zeros(1, 0),
            q: RationalMatrix::identity(1),
            alpha: RationalMatrix::zeros(0, 1),
            gamma: RationalMatrix::zeros(1, 1),
        };
        assemble(times, row).unwrap()
    }

    #[test]
    fn embedded_objects_are_valid() {
        assert!(validate_a(&MFOgAObject::zero()).is_valid());
        let tate = OgusObject::tate(&places());
        let e = embed_level1(&tate).unwrap();
        assert_eq!(e.dims(), (0, 0, 0, 1));
        assert!(validate_a(&e).is_valid());
        let unit = embed_level1(&OgusObject::unit(&places())).unwrap();
        assert_eq!(unit.dims(), (1, 0, 0, 0));
        assert!(validate_a(&unit).is_valid());
    }

    #[test]
    fn level_violation() {
        let hodge = Filtration::new(1, vec![(1, Subspace::full(1)), (2, Subspace::zero(1))]).unwrap();
        let o = OgusObject::new(1, WeightFiltration::trivial(1), hodge, vec![]).unwrap();
        assert!(matches!(embed_level1(&o), Err(Error::LevelViolation(_))));
    }

    #[test]
    fn perturbed_epsilon_breaks_cartesianness() {
        let o = t_a(&vector_motive()).unwrap();
        assert!(validate_a(&o).is_valid());
        let broken = o.with_epsilon(RationalMatrix::zeros(1, 1)).unwrap();
        let r = validate_a(&broken);
        assert!(r.fails_clause("cartesian"));
        assert!(!r.fails_clause("square"));
    }

    #[test]
    fn sharp_dimensions() {
        let s = sharp_s(&MFOgAObject::zero()).unwrap();
        assert_eq!(s.dim, 0);
        let unit = embed_level1(&OgusObject::unit(&places())).unwrap();
        let s = sharp_s(&unit).unwrap();
        assert_eq!(s.dim, 1);
        assert!(s.leg_t.is_invertible());
        let s = sharp_s(&t_a(&vector_motive()).unwrap()).unwrap();
        assert_eq!(s.dim, 2);
    }

    #[test]
    fn deligne_type_embeds_on_the_nose() {
        let sum = OgusObject::tate(&places()).direct_sum(&OgusObject::unit(&places())).unwrap();
        let m = LinearizedLaumonMotive::deligne(sum.clone()).unwrap();
        assert_eq!(t_a(&m).unwrap(), embed_level1(&sum).unwrap());
    }

    #[test]
    fn hom_matches_ogus_on_embedded() {
        let sum = OgusObject::tate(&places()).direct_sum(&OgusObject::unit(&places())).unwrap();
        let e = embed_level1(&sum).unwrap();
        assert_eq!(hom_a_dim(&e, &e), ogus::hom_dim(&sum, &sum));
        assert!(hom_a(&e, &e).len() == 2);
        assert!(MFOgAMorphism::identity(&e).is_iso());
    }

    #[test]
    fn kernels_and_cokernels() {
        let e = embed_level1(&OgusObject::tate(&places())).unwrap();
        let k = kernel_a(&MFOgAMorphism::identity(&e)).unwrap();
        let k = k.object().unwrap();
        assert_eq!((k.t_dr(), k.dims()), (0, (0, 0, 0, 0)));

        // Frobenius-free lines: Fil⁰ = 0 on the source, Fil⁰ = T on the target
        let x = embed_level1(&line(false)).unwrap();
        let y = embed_level1(&line(true)).unwrap();
        let id = RationalMatrix::identity(1);
        let m = MFOgAMorphism::new(
            x,
            y,
            id,
            RationalMatrix::zeros(1, 0),
            RationalMatrix::zeros(0, 0),
            RationalMatrix::zeros(0, 0),
            RationalMatrix::zeros(0, 1),
        )
        .unwrap();
        assert_eq!(kernel_a(&m).unwrap().failed_clauses(), ["delta_invertible"]);
        assert!(cokernel_a(&m).unwrap().failed_clauses().contains(&"cartesian".to_string()));
    }

    #[test]
    fn projection_kernel_is_embedded() {
        let ps = places();
        let (tate, unit) = (OgusObject::tate(&ps), OgusObject::unit(&ps));
        let sum = tate.direct_sum(&unit).unwrap();
        let (es, et) = (embed_level1(&sum).unwrap(), embed_level1(&tate).unwrap());
        let m = MFOgAMorphism::new(
            es,
            et,
            RationalMatrix::from_ints(&[&[1, 0]]),
            RationalMatrix::zeros(0, 1),
            RationalMatrix::zeros(0, 0),
            RationalMatrix::zeros(0, 0),
            RationalMatrix::identity(1),
        )
        .unwrap();
        assert_eq!(kernel_a(&m).unwrap().object().unwrap(), &embed_level1(&unit).unwrap());
        assert_eq!(cokernel_a(&m).unwrap().object().unwrap().t_dr(), 0);
    }

    #[test]
    fn gamma_lift_change_gives_isomorphic_objects() {
        // T = ℚ² with Fil⁰ = ⟨e₀⟩, Lie F = ℚ, du = 1, α = 0 on U(M_ét)
        let fil0 = Subspace::from_rows(2, &RationalMatrix::from_ints(&[&[1, 0]])).unwrap();
        let hodge = Filtration::new(2, vec![(-1, Subspace::full(2)), (0, fil0), (1, Subspace::zero(2))]).unwrap();
        let weight = WeightFiltration::new(2, vec![(-1, Subspace::full(2))]).unwrap();
        let base = OgusObject::new(2, weight, hodge, vec![]).unwrap();
        let times = TimesMotiveData::new(base, 1, RationalMatrix::from_ints(&[&[1]])).unwrap();
        let j = RationalMatrix::from_ints(&[&[1], &[0]]);
        let q = RationalMatrix::from_ints(&[&[0, 1]]);
        let sigma = RationalMatrix::from_ints(&[&[0], &[1]]);
        let alpha = RationalMatrix::from_ints(&[&[0, 1]]);
        let build = |s: &[&[i64]]| {
            let gamma = build_gamma(&times, &j, &q, &sigma, &RationalMatrix::from_ints(s)).unwrap();
            let row = AlphaRowData { v: 1, u_m: 2, j: j.clone(), q: q.clone(), alpha: alpha.clone(), gamma };
            t_a(&assemble(times.clone(), row).unwrap()).unwrap()
        };
        let (a, b) = (build(&[&[0], &[1]]), build(&[&[5], &[1]]));
        assert_ne!(a, b);
        assert!(find_isomorphism(&a, &b, 7).is_some());
    }

    #[test]
    fn json_round_trip() {
        let o = t_a(&vector_motive()).unwrap();
        let s = serde_json::to_string(&o).unwrap();
        let back: MFOgAObject = serde_json::from_str(&s).unwrap();
        assert_eq!(back, o);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert!(v.get("t_dr").is_some() && v.get("epsilon").is_some());
    }
}
