//! Ogus structures: a de Rham space with an increasing weight filtration, a
//! decreasing Hodge filtration and Frobenius matrices at finitely many places.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{rat, MatrixSystem, RationalMatrix, Subspace};
use crate::filtered_phi::{
    check_admissible_with, normalize_frobenii, quotient_map, restrict_map, AdmissibilityOptions, AdmissibilityStatus,
    AdmissibilityVerdict, FilteredPhiModule, Filtration, FrobeniusAt, FrobeniusDoc, Place, RawSteps, WeightFiltration,
    DEFAULT_SAMPLES,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OgusObject {
    t_dr: usize,
    weight: WeightFiltration,
    hodge: Filtration,
    frobenii: Vec<FrobeniusAt>,
}

impl OgusObject {
    /// Checks dimensions and place labels. Frobenius stability of the weight
    /// filtration and admissibility are checked by [`validate`].
    pub fn new(t_dr: usize, weight: WeightFiltration, hodge: Filtration, frobenii: Vec<FrobeniusAt>) -> Result<Self> {
        if weight.ambient_dim() != t_dr || hodge.ambient_dim() != t_dr {
            return Err(Error::OutsideAmbient(t_dr));
        }
        let frobenii = normalize_frobenii(t_dr, frobenii)?;
        Ok(OgusObject { t_dr, weight, hodge, frobenii })
    }

    pub fn zero() -> Self {
        OgusObject::new(0, WeightFiltration::trivial(0), Filtration::trivial(0), Vec::new()).expect("zero object")
    }

    /// The Tate object: a line of weight −2 with `Fil⁻¹ = T`, `Fil⁰ = 0` and
    /// `φ = 1/p` at every place.
    pub fn tate(places: &[Place]) -> Self {
        let weight = WeightFiltration::new(1, vec![(-2, Subspace::full(1))]).expect("weight");
        let hodge = Filtration::new(1, vec![(-1, Subspace::full(1)), (0, Subspace::zero(1))]).expect("hodge");
        let frobenii = places
            .iter()
            .map(|p| FrobeniusAt::new(p.clone(), RationalMatrix::diagonal(&[rat(1, p.prime as i64)]), false))
            .collect::<Result<_>>()
            .expect("invertible");
        OgusObject::new(1, weight, hodge, frobenii).expect("Tate object")
    }

    /// The unit object: a line of weight 0 with `Fil⁰ = T`, `Fil¹ = 0` and `φ = 1`.
    pub fn unit(places: &[Place]) -> Self {
        let frobenii = places
            .iter()
            .map(|p| FrobeniusAt::new(p.clone(), RationalMatrix::identity(1), false))
            .collect::<Result<_>>()
            .expect("invertible");
        OgusObject::new(1, WeightFiltration::trivial(1), Filtration::trivial(1), frobenii).expect("unit object")
    }

    pub fn t_dr(&self) -> usize {
        self.t_dr
    }

    pub fn weight(&self) -> &WeightFiltration {
        &self.weight
    }

    pub fn hodge(&self) -> &Filtration {
        &self.hodge
    }

    pub fn frobenii(&self) -> &[FrobeniusAt] {
        &self.frobenii
    }

    pub fn frobenius(&self, label: &str) -> Option<&FrobeniusAt> {
        self.frobenii.iter().find(|f| f.label() == label)
    }

    pub fn place_labels(&self) -> BTreeSet<String> {
        self.frobenii.iter().map(|f| f.label().to_string()).collect()
    }

    /// The underlying filtered φ-module (forgetting the weight filtration).
    pub fn phi_module(&self) -> FilteredPhiModule {
        FilteredPhiModule::new(self.t_dr, self.hodge.clone(), self.frobenii.clone()).expect("same invariants")
    }

    /// `Fil⁰`.
    pub fn fil0(&self) -> Subspace {
        self.hodge.step(0)
    }

    /// Requires both summands to carry the same places.
    pub fn direct_sum(&self, other: &OgusObject) -> Result<OgusObject> {
        if self.place_labels() != other.place_labels() {
            return Err(Error::Precondition("direct sum needs equal place sets".into()));
        }
        let frobenii = self
            .frobenii
            .iter()
            .map(|f| {
                let g = other.frobenius(f.label()).expect("same labels");
                if g.prime() != f.prime() {
                    return Err(Error::Precondition(format!("place {} has two primes", f.label())));
                }
                FrobeniusAt::new(f.place.clone(), f.phi.block_diag(&g.phi), f.exempt && g.exempt)
            })
            .collect::<Result<_>>()?;
        OgusObject::new(
            self.t_dr + other.t_dr,
            self.weight.direct_sum(&other.weight)?,
            self.hodge.direct_sum(&other.hodge)?,
            frobenii,
        )
    }

    /// Restriction to a subspace stable under every Frobenius.
    pub fn restrict(&self, sub: &Subspace) -> Result<OgusObject> {
        let frobenii = self
            .frobenii
            .iter()
            .map(|f| Ok(FrobeniusAt { phi: restrict_map(&f.phi, sub, f.label())?, ..f.clone() }))
            .collect::<Result<_>>()?;
        OgusObject::new(sub.dim(), self.weight.restrict(sub)?, self.hodge.restrict(sub)?, frobenii)
    }

    /// Quotient by a subspace stable under every Frobenius.
    pub fn quotient(&self, sub: &Subspace) -> Result<OgusObject> {
        let frobenii = self
            .frobenii
            .iter()
            .map(|f| Ok(FrobeniusAt { phi: quotient_map(&f.phi, sub, f.label())?, ..f.clone() }))
            .collect::<Result<_>>()?;
        OgusObject::new(sub.codim(), self.weight.quotient(sub)?, self.hodge.quotient(sub)?, frobenii)
    }

    /// Conjugates every Frobenius by `change` and transports both filtrations.
    pub fn change_basis(&self, change: &RationalMatrix) -> Result<OgusObject> {
        let inv = change.inverse().ok_or_else(|| Error::NotInvertible("change of basis".into()))?;
        let frobenii =
            self.frobenii.iter().map(|f| FrobeniusAt { phi: change.mul(&f.phi).mul(&inv), ..f.clone() }).collect();
        OgusObject::new(self.t_dr, self.weight.transport(change)?, self.hodge.transport(change)?, frobenii)
    }
}

#[derive(Serialize, Deserialize)]
struct ObjectDoc {
    t_dr: usize,
    #[serde(default)]
    weight: serde_json::Value,
    #[serde(default)]
    hodge: serde_json::Value,
    #[serde(default)]
    frobenii: Vec<FrobeniusDoc>,
}

fn raw_steps(v: serde_json::Value) -> std::result::Result<RawSteps, serde_json::Error> {
    if v.is_null() {
        Ok(RawSteps::default())
    } else {
        serde_json::from_value(v)
    }
}

impl Serialize for OgusObject {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        ObjectDoc {
            t_dr: self.t_dr,
            weight: serde_json::to_value(&self.weight).map_err(S::Error::custom)?,
            hodge: serde_json::to_value(&self.hodge).map_err(S::Error::custom)?,
            frobenii: self.frobenii.iter().map(FrobeniusDoc::of).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for OgusObject {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ObjectDoc::deserialize(d)?;
        let n = doc.t_dr;
        let weight = raw_steps(doc.weight).map_err(D::Error::custom)?.into_weight(n).map_err(D::Error::custom)?;
        let hodge = raw_steps(doc.hodge).map_err(D::Error::custom)?.into_filtration(n).map_err(D::Error::custom)?;
        let frobenii = doc
            .frobenii
            .into_iter()
            .map(|f| f.into_frobenius(n))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        OgusObject::new(n, weight, hodge, frobenii).map_err(D::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub clause: String,
    pub place: Option<String>,
    pub index: Option<i64>,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationStatus {
    Valid,
    Invalid,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaceVerdict {
    pub place: String,
    pub verdict: AdmissibilityVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
    /// Non-exempt places whose admissibility could not be decided.
    pub undetermined: Vec<String>,
    pub warnings: Vec<String>,
    pub admissibility: Vec<PlaceVerdict>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn status(&self) -> ValidationStatus {
        if !self.failures.is_empty() {
            ValidationStatus::Invalid
        } else if !self.undetermined.is_empty() {
            ValidationStatus::Undetermined
        } else {
            ValidationStatus::Valid
        }
    }

    pub fn fails_clause(&self, clause: &str) -> bool {
        self.failures.iter().any(|f| f.clause == clause)
    }
}

/// Checks every invariant with seeds derived from the object.
pub fn validate(o: &OgusObject) -> ValidationReport {
    validate_with(o, None)
}

/// Checks every invariant. With `seed = None` each place uses the seed derived
/// from the serialized filtered φ-module.
pub fn validate_with(o: &OgusObject, seed: Option<u64>) -> ValidationReport {
    let mut failures = Vec::new();
    let mut undetermined = Vec::new();
    let mut admissibility = Vec::new();
    for f in &o.frobenii {
        for (j, w) in o.weight.jumps() {
            if !w.is_stable_under(&f.phi) {
                failures.push(Failure {
                    clause: "weight_frobenius_stable".into(),
                    place: Some(f.label().to_string()),
                    index: Some(*j),
                    detail: format!("W_{j} is not stable under the Frobenius at {}", f.label()),
                });
            }
        }
    }
    let module = o.phi_module();
    let seed = seed.unwrap_or_else(|| module.default_seed());
    for f in o.frobenii.iter().filter(|f| !f.exempt) {
        let opts = AdmissibilityOptions { seed, samples: DEFAULT_SAMPLES };
        let verdict = check_admissible_with(&module, f.label(), opts).expect("listed, non-exempt place");
        match verdict.status {
            AdmissibilityStatus::Admissible => {}
            AdmissibilityStatus::NotAdmissible => failures.push(Failure {
                clause: "admissible".into(),
                place: Some(f.label().to_string()),
                index: None,
                detail: format!("t_H = {}, t_N = {}", verdict.t_h_total, verdict.t_n_total),
            }),
            AdmissibilityStatus::Undetermined => undetermined.push(f.label().to_string()),
        }
        admissibility.push(PlaceVerdict { place: f.label().to_string(), verdict });
    }
    ValidationReport { failures, undetermined, warnings: Vec::new(), admissibility }
}

/// Fil¹ = 0, Fil⁻¹ = T and weights in [−2, 0].
pub fn is_level_le_1(o: &OgusObject) -> bool {
    o.hodge.step(1).is_zero() && o.hodge.step(-1).is_full() && o.weight.step(-3).is_zero() && o.weight.step(0).is_full()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OgusMorphism {
    source: OgusObject,
    target: OgusObject,
    matrix: RationalMatrix,
}

impl OgusMorphism {
    pub fn new(source: OgusObject, target: OgusObject, matrix: RationalMatrix) -> Result<Self> {
        let matrix = matrix.conform(target.t_dr, source.t_dr)?;
        if let Some(j) = source.weight.first_difference(&matrix, &target.weight, false) {
            return Err(Error::Invariant(format!("W_{j} is not preserved")));
        }
        if let Some(i) = source.hodge.first_difference(&matrix, &target.hodge, false) {
            return Err(Error::Invariant(format!("Fil^{i} is not preserved")));
        }
        for f in &source.frobenii {
            if let Some(g) = target.frobenius(f.label()) {
                if g.phi.mul(&matrix) != matrix.mul(&f.phi) {
                    return Err(Error::Invariant(format!("does not commute with the Frobenius at {}", f.label())));
                }
            }
        }
        Ok(OgusMorphism { source, target, matrix })
    }

    pub fn identity(o: &OgusObject) -> Self {
        OgusMorphism::new(o.clone(), o.clone(), RationalMatrix::identity(o.t_dr)).expect("identity")
    }

    pub fn zero(a: &OgusObject, b: &OgusObject) -> Self {
        OgusMorphism::new(a.clone(), b.clone(), RationalMatrix::zeros(b.t_dr, a.t_dr)).expect("zero")
    }

    pub fn source(&self) -> &OgusObject {
        &self.source
    }

    pub fn target(&self) -> &OgusObject {
        &self.target
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    /// Set when source and target carry different place labels; compatibility
    /// is then only required on the shared places.
    pub fn place_warning(&self) -> Option<String> {
        let (a, b) = (self.source.place_labels(), self.target.place_labels());
        (a != b).then(|| {
            let only: Vec<String> = a.symmetric_difference(&b).cloned().collect();
            format!("places {} are not shared; compatibility is checked on the intersection", only.join(", "))
        })
    }

    pub fn compose(&self, first: &OgusMorphism) -> Result<OgusMorphism> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch("composable morphisms must share an object".into()));
        }
        OgusMorphism::new(first.source.clone(), self.target.clone(), self.matrix.mul(&first.matrix))
    }

    /// Bijective with both filtrations mapped onto each other.
    pub fn is_iso(&self) -> bool {
        match self.matrix.inverse() {
            Some(inv) => OgusMorphism::new(self.target.clone(), self.source.clone(), inv).is_ok(),
            None => false,
        }
    }
}

#[derive(Serialize)]
struct MorphismDoc<'a> {
    source: &'a OgusObject,
    target: &'a OgusObject,
    matrix: &'a RationalMatrix,
}

#[derive(Deserialize)]
struct MorphismIn {
    source: OgusObject,
    target: OgusObject,
    matrix: RationalMatrix,
}

impl<'de> Deserialize<'de> for OgusMorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = MorphismIn::deserialize(d)?;
        OgusMorphism::new(m.source, m.target, m.matrix).map_err(D::Error::custom)
    }
}

impl OgusMorphism {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(MorphismDoc { source: &self.source, target: &self.target, matrix: &self.matrix })
            .expect("serializable")
    }
}

/// Adds "X preserves every step of the filtration pair" to a system.
pub(crate) fn add_filtration_constraints<F, G>(
    sys: &mut MatrixSystem,
    x: crate::exact_linalg::Unknown,
    indices: BTreeSet<i64>,
    src: F,
    tgt: G,
) where
    F: Fn(i64) -> Subspace,
    G: Fn(i64) -> Subspace,
{
    for i in indices {
        let (s, t) = (src(i), tgt(i));
        if s.is_zero() || t.is_full() {
            continue;
        }
        sys.annihilate(&t.quotient_matrix(), x, &s.inclusion());
    }
}

/// Adds the constraints on `η: a -> b` to be a morphism of Ogus objects.
pub(crate) fn add_ogus_constraints(
    sys: &mut MatrixSystem,
    x: crate::exact_linalg::Unknown,
    a: &OgusObject,
    b: &OgusObject,
) {
    add_filtration_constraints(sys, x, a.weight.probe_indices(&b.weight), |j| a.weight.step(j), |j| b.weight.step(j));
    add_filtration_constraints(sys, x, a.hodge.probe_indices(&b.hodge), |i| a.hodge.step(i), |i| b.hodge.step(i));
    for f in &a.frobenii {
        if let Some(g) = b.frobenius(f.label()) {
            let neg = -&f.phi;
            sys.equation(&[
                (&g.phi, x, &RationalMatrix::identity(a.t_dr)),
                (&RationalMatrix::identity(b.t_dr), x, &neg),
            ]);
        }
    }
}

/// A basis of `Hom(a, b)`.
pub fn hom(a: &OgusObject, b: &OgusObject) -> Result<Vec<OgusMorphism>> {
    let mut sys = MatrixSystem::new();
    let x = sys.unknown(b.t_dr, a.t_dr);
    add_ogus_constraints(&mut sys, x, a, b);
    sys.solution_basis().into_iter().map(|blocks| OgusMorphism::new(a.clone(), b.clone(), blocks[0].clone())).collect()
}

pub fn hom_dim(a: &OgusObject, b: &OgusObject) -> usize {
    let mut sys = MatrixSystem::new();
    let x = sys.unknown(b.t_dr, a.t_dr);
    add_ogus_constraints(&mut sys, x, a, b);
    sys.solution_dim()
}

/// A kernel or cokernel with its structural morphism and the validation of the
/// new object.
#[derive(Clone, Debug, Serialize)]
pub struct Structural {
    pub object: OgusObject,
    pub morphism: OgusMorphism,
    pub report: ValidationReport,
}

pub fn kernel(m: &OgusMorphism) -> Result<Structural> {
    let k = Subspace::span_columns(&m.matrix.kernel_columns());
    let object = m.source.restrict(&k)?;
    let morphism = OgusMorphism::new(object.clone(), m.source.clone(), k.inclusion())?;
    let report = validate(&object);
    Ok(Structural { object, morphism, report })
}

pub fn cokernel(m: &OgusMorphism) -> Result<Structural> {
    let image = Subspace::full(m.source.t_dr).image_under(&m.matrix);
    let object = m.target.quotient(&image)?;
    let morphism = OgusMorphism::new(m.target.clone(), object.clone(), image.quotient_matrix())?;
    let report = validate(&object);
    Ok(Structural { object, morphism, report })
}

/// The image as a sub-object of the target, with the induced filtrations.
pub fn image(m: &OgusMorphism) -> Result<OgusObject> {
    m.target.restrict(&Subspace::full(m.source.t_dr).image_under(&m.matrix))
}

/// The coimage as a quotient of the source, with the image filtrations.
pub fn coimage(m: &OgusMorphism) -> Result<OgusObject> {
    let k = Subspace::span_columns(&m.matrix.kernel_columns());
    m.source.quotient(&k)
}

/// The canonical map `coim(m) -> im(m)`; it is an isomorphism exactly when `m`
/// is strict for both filtrations.
pub fn canonical_map(m: &OgusMorphism) -> Result<OgusMorphism> {
    let k = Subspace::span_columns(&m.matrix.kernel_columns());
    let im = Subspace::full(m.source.t_dr).image_under(&m.matrix);
    let matrix = im.coordinates(&m.matrix.mul(&k.quotient_section()))?;
    OgusMorphism::new(coimage(m)?, image(m)?, matrix)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StrictnessReport {
    pub weight_strict: bool,
    pub hodge_strict: bool,
    /// First index where weight strictness fails.
    pub weight_index: Option<i64>,
    /// First index where Hodge strictness fails.
    pub hodge_index: Option<i64>,
}

pub fn strictness_audit(m: &OgusMorphism) -> StrictnessReport {
    let weight_index = m.source.weight.first_difference(&m.matrix, &m.target.weight, true);
    let hodge_index = m.source.hodge.first_difference(&m.matrix, &m.target.hodge, true);
    StrictnessReport {
        weight_strict: weight_index.is_none(),
        hodge_strict: hodge_index.is_none(),
        weight_index,
        hodge_index,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_linalg::int;

    fn places() -> Vec<Place> {
        vec![Place::new("v2", 2).unwrap(), Place::new("v3", 3).unwrap()]
    }

    #[test]
    fn validation_examples() {
        assert!(validate(&OgusObject::zero()).is_valid());
        let tate = OgusObject::tate(&places());
        let r = validate(&tate);
        assert_eq!(r.status(), ValidationStatus::Valid);
        // φ = p instead of 1/p
        let flipped: Vec<FrobeniusAt> = places()
            .into_iter()
            .map(|p| FrobeniusAt::new(p.clone(), RationalMatrix::diagonal(&[int(p.prime as i64)]), false).unwrap())
            .collect();
        let bad = OgusObject::new(1, tate.weight().clone(), tate.hodge().clone(), flipped).unwrap();
        let r = validate(&bad);
        assert!(r.fails_clause("admissible"));
        assert_eq!(r.failures.len(), 2);
    }

    #[test]
    fn weight_must_be_frobenius_stable() {
        let w = WeightFiltration::new(
            2,
            vec![(-2, Subspace::from_rows(2, &RationalMatrix::from_ints(&[&[1, 1]])).unwrap())],
        )
        .unwrap();
        let f =
            FrobeniusAt::new(Place::new("v2", 2).unwrap(), RationalMatrix::diagonal(&[int(1), int(2)]), true).unwrap();
        let o = OgusObject::new(2, w, Filtration::trivial(2), vec![f]).unwrap();
        let r = validate(&o);
        assert!(r.fails_clause("weight_frobenius_stable"));
        assert_eq!(r.failures[0].index, Some(-2));
    }

    #[test]
    fn level_predicate() {
        assert!(is_level_le_1(&OgusObject::zero()));
        assert!(is_level_le_1(&OgusObject::tate(&places())));
        assert!(is_level_le_1(&OgusObject::unit(&places())));
        let hodge = Filtration::new(1, vec![(2, Subspace::full(1)), (3, Subspace::zero(1))]).unwrap();
        let o = OgusObject::new(1, WeightFiltration::trivial(1), hodge, vec![]).unwrap();
        assert!(!is_level_le_1(&o));
    }

    #[test]
    fn kernels_and_cokernels() {
        let ps = places();
        let tate = OgusObject::tate(&ps);
        let unit = OgusObject::unit(&ps);
        assert_eq!(kernel(&OgusMorphism::identity(&tate)).unwrap().object.t_dr(), 0);
        let c = cokernel(&OgusMorphism::zero(&tate, &unit)).unwrap();
        assert_eq!(c.object, unit);
        assert!(c.morphism.is_iso());

        let sum = tate.direct_sum(&unit).unwrap();
        let proj = OgusMorphism::new(sum.clone(), tate.clone(), RationalMatrix::from_ints(&[&[1, 0]])).unwrap();
        let k = kernel(&proj).unwrap();
        assert_eq!(k.object, unit);
        assert!(k.report.is_valid());
        let audit = strictness_audit(&proj);
        assert!(audit.weight_strict && audit.hodge_strict);
    }

    #[test]
    fn hom_examples() {
        let ps = places();
        let tate = OgusObject::tate(&ps);
        let unit = OgusObject::unit(&ps);
        assert_eq!(hom_dim(&tate, &tate), 1);
        assert_eq!(hom_dim(&tate, &unit), 0);
        assert_eq!(hom_dim(&unit, &tate), 0);
        let sum = tate.direct_sum(&unit).unwrap();
        assert_eq!(hom(&sum, &sum).unwrap().len(), 2);
    }

    #[test]
    fn non_strict_map_without_frobenius() {
        let line0 = Filtration::new(1, vec![(0, Subspace::zero(1))]).unwrap();
        let a = OgusObject::new(1, WeightFiltration::trivial(1), line0, vec![]).unwrap();
        let b = OgusObject::new(1, WeightFiltration::trivial(1), Filtration::trivial(1), vec![]).unwrap();
        let m = OgusMorphism::new(a, b, RationalMatrix::identity(1)).unwrap();
        let audit = strictness_audit(&m);
        assert!(audit.weight_strict);
        assert!(!audit.hodge_strict);
        assert!(!canonical_map(&m).unwrap().is_iso());
    }

    #[test]
    fn json_round_trip() {
        let sum = OgusObject::tate(&places()).direct_sum(&OgusObject::unit(&places())).unwrap();
        let s = serde_json::to_string(&sum).unwrap();
        let back: OgusObject = serde_json::from_str(&s).unwrap();
        assert_eq!(back, sum);
        let m = OgusMorphism::identity(&sum);
        let back: OgusMorphism = serde_json::from_value(m.to_json_value()).unwrap();
        assert_eq!(back, m);
    }
}
