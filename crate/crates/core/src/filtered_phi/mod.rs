//! Filtered φ-modules at finitely many p-adic places: Hodge and Newton numbers,
//! weak admissibility and strictness of morphisms.

mod admissibility;
mod filtration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exact_linalg::{is_prime, padic_valuation, RationalMatrix, Subspace, Valuation};

pub use admissibility::{
    check_admissible, check_admissible_with, AdmissibilityOptions, AdmissibilityStatus, AdmissibilityVerdict,
    DecisionMethod, DEFAULT_SAMPLES,
};
pub use filtration::{Filtration, RawSteps, WeightFiltration};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Place {
    pub label: String,
    pub prime: u64,
}

impl Place {
    pub fn new(label: &str, prime: u64) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::NotPrime(prime));
        }
        Ok(Place { label: label.to_string(), prime })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusAt {
    pub place: Place,
    pub phi: RationalMatrix,
    pub exempt: bool,
}

impl FrobeniusAt {
    pub fn new(place: Place, phi: RationalMatrix, exempt: bool) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::NotSquare { rows: phi.rows(), cols: phi.cols() });
        }
        if !phi.is_invertible() {
            return Err(Error::NotInvertible(format!("Frobenius at {}", place.label)));
        }
        Ok(FrobeniusAt { place, phi, exempt })
    }

    pub fn label(&self) -> &str {
        &self.place.label
    }

    pub fn prime(&self) -> u64 {
        self.place.prime
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct FrobeniusDoc {
    pub place: String,
    pub prime: u64,
    pub phi: RationalMatrix,
    #[serde(default)]
    pub exempt: bool,
}

impl FrobeniusDoc {
    pub fn into_frobenius(self, dim: usize) -> Result<FrobeniusAt> {
        let phi = self.phi.conform(dim, dim)?;
        FrobeniusAt::new(Place::new(&self.place, self.prime)?, phi, self.exempt)
    }

    pub fn of(f: &FrobeniusAt) -> Self {
        FrobeniusDoc { place: f.place.label.clone(), prime: f.place.prime, phi: f.phi.clone(), exempt: f.exempt }
    }
}

/// Checks ambient dimensions and label uniqueness and sorts by label.
pub(crate) fn normalize_frobenii(dim: usize, mut frobenii: Vec<FrobeniusAt>) -> Result<Vec<FrobeniusAt>> {
    for f in &frobenii {
        if f.phi.rows() != dim {
            return Err(Error::ShapeMismatch(format!("Frobenius at {} is not {dim}x{dim}", f.label())));
        }
    }
    frobenii.sort_by(|a, b| a.place.label.cmp(&b.place.label));
    for w in frobenii.windows(2) {
        if w[0].place.label == w[1].place.label {
            return Err(Error::InvalidFiltration(format!("place {} listed twice", w[0].place.label)));
        }
    }
    Ok(frobenii)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredPhiModule {
    dim: usize,
    filtration: Filtration,
    frobenii: Vec<FrobeniusAt>,
}

impl FilteredPhiModule {
    pub fn new(dim: usize, filtration: Filtration, frobenii: Vec<FrobeniusAt>) -> Result<Self> {
        if filtration.ambient_dim() != dim {
            return Err(Error::OutsideAmbient(dim));
        }
        let frobenii = normalize_frobenii(dim, frobenii)?;
        Ok(FilteredPhiModule { dim, filtration, frobenii })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn filtration(&self) -> &Filtration {
        &self.filtration
    }

    pub fn frobenii(&self) -> &[FrobeniusAt] {
        &self.frobenii
    }

    pub fn frobenius(&self, label: &str) -> Result<&FrobeniusAt> {
        self.frobenii.iter().find(|f| f.place.label == label).ok_or_else(|| Error::UnknownPlace(label.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// A seed derived from the canonical serialization.
    pub fn default_seed(&self) -> u64 {
        let digest = Sha256::digest(self.to_json().expect("serializable").as_bytes());
        u64::from_be_bytes(digest[..8].try_into().expect("8 bytes"))
    }

    /// The sub-object on a subspace stable under every Frobenius.
    pub fn restrict(&self, sub: &Subspace) -> Result<FilteredPhiModule> {
        let frobenii = self
            .frobenii
            .iter()
            .map(|f| Ok(FrobeniusAt { phi: restrict_map(&f.phi, sub, f.label())?, ..f.clone() }))
            .collect::<Result<_>>()?;
        FilteredPhiModule::new(sub.dim(), self.filtration.restrict(sub)?, frobenii)
    }

    /// The quotient object by a subspace stable under every Frobenius.
    pub fn quotient(&self, sub: &Subspace) -> Result<FilteredPhiModule> {
        let frobenii = self
            .frobenii
            .iter()
            .map(|f| Ok(FrobeniusAt { phi: quotient_map(&f.phi, sub, f.label())?, ..f.clone() }))
            .collect::<Result<_>>()?;
        FilteredPhiModule::new(sub.codim(), self.filtration.quotient(sub)?, frobenii)
    }

    /// Conjugates every Frobenius by `change` and transports the filtration.
    pub fn change_basis(&self, change: &RationalMatrix) -> Result<FilteredPhiModule> {
        let inv = change.inverse().ok_or_else(|| Error::NotInvertible("change of basis".into()))?;
        let frobenii =
            self.frobenii.iter().map(|f| FrobeniusAt { phi: change.mul(&f.phi).mul(&inv), ..f.clone() }).collect();
        FilteredPhiModule::new(self.dim, self.filtration.transport(change)?, frobenii)
    }
}

/// The restriction of `phi` to a stable subspace, in its canonical coordinates.
pub(crate) fn restrict_map(phi: &RationalMatrix, sub: &Subspace, label: &str) -> Result<RationalMatrix> {
    if sub.ambient_dim() != phi.cols() {
        return Err(Error::OutsideAmbient(phi.cols()));
    }
    sub.coordinates(&phi.mul(&sub.inclusion())).map_err(|_| Error::NotStable(label.to_string()))
}

/// The map induced by `phi` on the quotient by a stable subspace.
pub(crate) fn quotient_map(phi: &RationalMatrix, sub: &Subspace, label: &str) -> Result<RationalMatrix> {
    if !sub.is_stable_under(phi) {
        return Err(Error::NotStable(label.to_string()));
    }
    Ok(sub.quotient_matrix().mul(phi).mul(&sub.quotient_section()))
}

#[derive(Serialize, Deserialize)]
struct ModuleDoc {
    dim: usize,
    #[serde(default)]
    filtration: serde_json::Value,
    #[serde(default)]
    frobenii: Vec<FrobeniusDoc>,
}

impl Serialize for FilteredPhiModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::Error as _;
        ModuleDoc {
            dim: self.dim,
            filtration: serde_json::to_value(&self.filtration).map_err(S::Error::custom)?,
            frobenii: self.frobenii.iter().map(FrobeniusDoc::of).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FilteredPhiModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = ModuleDoc::deserialize(d)?;
        let raw: RawSteps = if doc.filtration.is_null() {
            RawSteps::default()
        } else {
            serde_json::from_value(doc.filtration).map_err(D::Error::custom)?
        };
        let filtration = raw.into_filtration(doc.dim).map_err(D::Error::custom)?;
        let frobenii = doc
            .frobenii
            .into_iter()
            .map(|f| f.into_frobenius(doc.dim))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        FilteredPhiModule::new(doc.dim, filtration, frobenii).map_err(D::Error::custom)
    }
}

/// `t_H` of the whole module or of the induced filtration on a subspace.
pub fn hodge_number(d: &FilteredPhiModule, restricted_to: Option<&Subspace>) -> Result<i64> {
    match restricted_to {
        None => Ok(d.filtration.hodge_number()),
        Some(w) => Ok(d.filtration.restrict(w)?.hodge_number()),
    }
}

/// `t_N = v_p(det φ)` on the whole module or on a φ-stable subspace.
pub fn newton_number(d: &FilteredPhiModule, place: &str, restricted_to: Option<&Subspace>) -> Result<i64> {
    let f = d.frobenius(place)?;
    let phi = match restricted_to {
        None => f.phi.clone(),
        Some(w) => restrict_map(&f.phi, w, place)?,
    };
    newton_of(&phi, f.prime())
}

pub(crate) fn newton_of(phi: &RationalMatrix, p: u64) -> Result<i64> {
    match padic_valuation(&phi.determinant()?, p)? {
        Valuation::Finite(v) => Ok(v),
        Valuation::Infinite => Err(Error::NotInvertible("Frobenius restriction".into())),
    }
}

/// A linear map between filtered φ-modules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilteredMorphism {
    source: FilteredPhiModule,
    target: FilteredPhiModule,
    matrix: RationalMatrix,
}

impl FilteredMorphism {
    pub fn new(source: FilteredPhiModule, target: FilteredPhiModule, matrix: RationalMatrix) -> Result<Self> {
        let matrix = matrix.conform(target.dim, source.dim)?;
        Ok(FilteredMorphism { source, target, matrix })
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &FilteredPhiModule {
        &self.source
    }

    pub fn target(&self) -> &FilteredPhiModule {
        &self.target
    }

    pub fn respects_filtration(&self) -> bool {
        self.source.filtration.is_preserved_by(&self.matrix, &self.target.filtration)
    }

    /// Labels of shared places where `m φ ≠ φ′ m`.
    pub fn noncommuting_places(&self) -> Vec<String> {
        self.source
            .frobenii
            .iter()
            .filter_map(|f| {
                let g = self.target.frobenius(f.label()).ok()?;
                (g.phi.mul(&self.matrix) != self.matrix.mul(&f.phi)).then(|| f.label().to_string())
            })
            .collect()
    }

    /// `m(Fil^i) = im(m) ∩ Fil′^i` for every `i`.
    pub fn is_strict(&self) -> Result<bool> {
        if !self.respects_filtration() {
            return Err(Error::Precondition("morphism does not respect the filtrations".into()));
        }
        let bad = self.noncommuting_places();
        if !bad.is_empty() {
            return Err(Error::Precondition(format!("morphism does not commute with Frobenius at {}", bad.join(", "))));
        }
        Ok(self.source.filtration.is_strict_for(&self.matrix, &self.target.filtration))
    }
}
