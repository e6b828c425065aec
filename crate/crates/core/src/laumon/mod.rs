//! The linear shadow of Laumon 1-motives: the étale Ogus object, the map
//! `du_×: Lie F -> Lie G_×`, the exact row `0 -> U(M_ét) -> U(M) -> Lie F -> 0`,
//! the classifying map `α: U(M) -> V` and the splitting `γ: U(M) -> T`.
//!
//! `Lie G_×` is identified with `T / Fil⁰` in the quotient coordinates of
//! [`Subspace::quotient_matrix`].

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{
    fibre_product_category, map_object, DiagramObject, DiagramShape, FibreProduct, FibreProductObject, Selection,
};
use crate::error::{Error, Result};
use crate::exact_linalg::{MatrixSystem, RationalMatrix, Subspace, Unknown};
use crate::ogus::{add_ogus_constraints, is_level_le_1, OgusObject};

/// `M_×` reduced to `(M_ét, du_×)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TimesDoc")]
pub struct TimesMotiveData {
    pub etale: OgusObject,
    pub lie_f: usize,
    pub du_times: RationalMatrix,
}

#[derive(Deserialize)]
struct TimesDoc {
    etale: OgusObject,
    lie_f: usize,
    du_times: RationalMatrix,
}

impl TryFrom<TimesDoc> for TimesMotiveData {
    type Error = Error;

    fn try_from(d: TimesDoc) -> Result<Self> {
        TimesMotiveData::new(d.etale, d.lie_f, d.du_times)
    }
}

impl TimesMotiveData {
    pub fn new(etale: OgusObject, lie_f: usize, du_times: RationalMatrix) -> Result<Self> {
        if !is_level_le_1(&etale) {
            return Err(Error::LevelViolation("étale part".into()));
        }
        let du_times = du_times.conform(etale.fil0().codim(), lie_f)?;
        Ok(TimesMotiveData { etale, lie_f, du_times })
    }

    /// `U(M_ét) = Fil⁰`.
    pub fn u_slot(&self) -> Subspace {
        self.etale.fil0()
    }

    pub fn lie_g(&self) -> usize {
        self.u_slot().codim()
    }

    /// `π: T -> T/Fil⁰`.
    pub fn pi(&self) -> RationalMatrix {
        self.u_slot().quotient_matrix()
    }
}

/// The row `(U(M), j, q)` with `α` and `γ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaRowData {
    pub v: usize,
    pub u_m: usize,
    pub j: RationalMatrix,
    pub q: RationalMatrix,
    pub alpha: RationalMatrix,
    pub gamma: RationalMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizedLaumonMotive {
    times: TimesMotiveData,
    row: AlphaRowData,
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Invariant(what.to_string()))
    }
}

/// Checks every invariant of the combined data.
pub fn assemble(times: TimesMotiveData, row: AlphaRowData) -> Result<LinearizedLaumonMotive> {
    let t = times.etale.t_dr();
    let fil0 = times.u_slot();
    let (u, f) = (fil0.dim(), times.lie_f);
    require(row.u_m == u + f, "dim U(M) = dim Fil⁰ + dim Lie F")?;
    let row = AlphaRowData {
        j: row.j.conform(row.u_m, u)?,
        q: row.q.conform(f, row.u_m)?,
        alpha: row.alpha.conform(row.v, row.u_m)?,
        gamma: row.gamma.conform(t, row.u_m)?,
        ..row
    };
    require(row.j.rank() == u, "j is injective")?;
    require(row.q.rank() == f, "q is surjective")?;
    require(row.q.mul(&row.j).is_zero(), "q ∘ j = 0")?;
    require(times.pi().mul(&row.gamma) == times.du_times.mul(&row.q), "π ∘ γ = du_× ∘ q")?;
    require(row.gamma.mul(&row.j) == fil0.inclusion(), "γ ∘ j is the inclusion of Fil⁰")?;
    Ok(LinearizedLaumonMotive { times, row })
}

pub fn disassemble(m: &LinearizedLaumonMotive) -> (TimesMotiveData, AlphaRowData) {
    (m.times.clone(), m.row.clone())
}

impl LinearizedLaumonMotive {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        etale: OgusObject,
        lie_f: usize,
        du_times: RationalMatrix,
        v: usize,
        u_m: usize,
        j: RationalMatrix,
        q: RationalMatrix,
        alpha: RationalMatrix,
        gamma: RationalMatrix,
    ) -> Result<Self> {
        assemble(TimesMotiveData::new(etale, lie_f, du_times)?, AlphaRowData { v, u_m, j, q, alpha, gamma })
    }

    /// The Deligne-type motive `lie_f = 0`, `V = 0` with `U(M) = Fil⁰` and `j = 1`.
    pub fn deligne(etale: OgusObject) -> Result<Self> {
        let times = TimesMotiveData::new(etale, 0, RationalMatrix::zeros(0, 0))?;
        let fil0 = times.u_slot();
        let u = fil0.dim();
        let row = AlphaRowData {
            v: 0,
            u_m: u,
            j: RationalMatrix::identity(u),
            q: RationalMatrix::zeros(0, u),
            alpha: RationalMatrix::zeros(0, u),
            gamma: fil0.inclusion(),
        };
        assemble(times, row)
    }

    pub fn zero() -> Self {
        LinearizedLaumonMotive::deligne(OgusObject::zero()).expect("zero motive")
    }

    pub fn etale(&self) -> &OgusObject {
        &self.times.etale
    }

    pub fn times(&self) -> &TimesMotiveData {
        &self.times
    }

    pub fn row(&self) -> &AlphaRowData {
        &self.row
    }

    pub fn t_dr(&self) -> usize {
        self.times.etale.t_dr()
    }

    pub fn lie_f(&self) -> usize {
        self.times.lie_f
    }

    pub fn lie_g(&self) -> usize {
        self.times.lie_g()
    }

    pub fn du_times(&self) -> &RationalMatrix {
        &self.times.du_times
    }

    pub fn v(&self) -> usize {
        self.row.v
    }

    pub fn u_m(&self) -> usize {
        self.row.u_m
    }

    pub fn j(&self) -> &RationalMatrix {
        &self.row.j
    }

    pub fn q(&self) -> &RationalMatrix {
        &self.row.q
    }

    pub fn alpha(&self) -> &RationalMatrix {
        &self.row.alpha
    }

    pub fn gamma(&self) -> &RationalMatrix {
        &self.row.gamma
    }

    pub fn pi(&self) -> RationalMatrix {
        self.times.pi()
    }
}

#[derive(Serialize, Deserialize)]
struct MotiveDoc {
    etale: OgusObject,
    lie_f: usize,
    du_times: RationalMatrix,
    v: usize,
    u_m: usize,
    j: RationalMatrix,
    q: RationalMatrix,
    alpha: RationalMatrix,
    gamma: RationalMatrix,
}

impl Serialize for LinearizedLaumonMotive {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MotiveDoc {
            etale: self.times.etale.clone(),
            lie_f: self.times.lie_f,
            du_times: self.times.du_times.clone(),
            v: self.row.v,
            u_m: self.row.u_m,
            j: self.row.j.clone(),
            q: self.row.q.clone(),
            alpha: self.row.alpha.clone(),
            gamma: self.row.gamma.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LinearizedLaumonMotive {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let m = MotiveDoc::deserialize(d)?;
        LinearizedLaumonMotive::new(m.etale, m.lie_f, m.du_times, m.v, m.u_m, m.j, m.q, m.alpha, m.gamma)
            .map_err(D::Error::custom)
    }
}

/// `γ = incl ∘ j⁻¹ ∘ (1 − σ q) + s ∘ q` for a section `σ` of `q` and a lift `s`
/// of `du_×` through `π`.
pub fn build_gamma(
    times: &TimesMotiveData,
    j: &RationalMatrix,
    q: &RationalMatrix,
    sigma: &RationalMatrix,
    s: &RationalMatrix,
) -> Result<RationalMatrix> {
    let fil0 = times.u_slot();
    let (t, f) = (times.etale.t_dr(), times.lie_f);
    let u_m = fil0.dim() + f;
    let j = j.clone().conform(u_m, fil0.dim())?;
    let q = q.clone().conform(f, u_m)?;
    let sigma = sigma.clone().conform(u_m, f)?;
    let s = s.clone().conform(t, f)?;
    if !q.mul(&sigma).is_identity() {
        return Err(Error::Precondition("sigma is not a section of q".into()));
    }
    if times.pi().mul(&s) != times.du_times {
        return Err(Error::Precondition("s is not a lift of du_times through π".into()));
    }
    let span = Subspace::span_columns(&j);
    if span.dim() != fil0.dim() || !q.mul(&j).is_zero() {
        return Err(Error::Invariant("row is not exact".into()));
    }
    let to_basis = span.coordinates(&j)?.inverse().expect("j is injective");
    let complement = &RationalMatrix::identity(u_m) - &sigma.mul(&q);
    let j_inv = to_basis.mul(&span.coordinates(&complement)?);
    Ok(&fil0.inclusion().mul(&j_inv) + &s.mul(&q))
}

/// A morphism `(η; a, v; b, c)`: `η` on `T`, `a` on `U(M)`, `v` on `V`, `b` on
/// `Lie F`, `c` on `Lie G_×`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MotiveMorphism {
    pub eta: RationalMatrix,
    pub a: RationalMatrix,
    pub v: RationalMatrix,
    pub b: RationalMatrix,
    pub c: RationalMatrix,
}

pub(crate) struct MotiveUnknowns {
    pub eta: Unknown,
    pub a: Unknown,
    pub v: Unknown,
    pub b: Unknown,
    pub c: Unknown,
}

fn motive_system(m: &LinearizedLaumonMotive, n: &LinearizedLaumonMotive) -> (MatrixSystem, MotiveUnknowns) {
    let mut sys = MatrixSystem::new();
    let x = MotiveUnknowns {
        eta: sys.unknown(n.t_dr(), m.t_dr()),
        a: sys.unknown(n.u_m(), m.u_m()),
        v: sys.unknown(n.v(), m.v()),
        b: sys.unknown(n.lie_f(), m.lie_f()),
        c: sys.unknown(n.lie_g(), m.lie_g()),
    };
    let id = RationalMatrix::identity;
    add_ogus_constraints(&mut sys, x.eta, m.etale(), n.etale());
    let (pi_m, pi_n) = (m.pi(), n.pi());
    sys.equation(&[(&id(n.lie_g()), x.c, &pi_m), (&-&pi_n, x.eta, &id(m.t_dr()))]);
    sys.equation(&[(&id(n.lie_g()), x.c, m.du_times()), (&-n.du_times(), x.b, &id(m.lie_f()))]);
    sys.equation(&[(&id(n.v()), x.v, m.alpha()), (&-n.alpha(), x.a, &id(m.u_m()))]);
    sys.equation(&[(&id(n.lie_f()), x.b, m.q()), (&-n.q(), x.a, &id(m.u_m()))]);
    let fil_n = n.etale().fil0();
    let coords_n = RationalMatrix::identity(n.t_dr()).select_rows(fil_n.pivots());
    let j_side = -&n.j().mul(&coords_n);
    sys.equation(&[(&id(n.u_m()), x.a, m.j()), (&j_side, x.eta, &m.etale().fil0().inclusion())]);
    sys.equation(&[(n.gamma(), x.a, &id(m.u_m())), (&-&id(n.t_dr()), x.eta, m.gamma())]);
    (sys, x)
}

/// A basis of morphisms `m -> n`.
pub fn hom_motives(m: &LinearizedLaumonMotive, n: &LinearizedLaumonMotive) -> Vec<MotiveMorphism> {
    let (sys, _) = motive_system(m, n);
    sys.solution_basis()
        .into_iter()
        .map(|b| MotiveMorphism {
            eta: b[0].clone(),
            a: b[1].clone(),
            v: b[2].clone(),
            b: b[3].clone(),
            c: b[4].clone(),
        })
        .collect()
}

pub fn hom_motives_dim(m: &LinearizedLaumonMotive, n: &LinearizedLaumonMotive) -> usize {
    motive_system(m, n).0.solution_dim()
}

/// Checks the commuting system for a candidate morphism.
pub fn is_motive_morphism(m: &LinearizedLaumonMotive, n: &LinearizedLaumonMotive, f: &MotiveMorphism) -> bool {
    let (sys, _) = motive_system(m, n);
    let blocks = [f.eta.clone(), f.a.clone(), f.v.clone(), f.b.clone(), f.c.clone()];
    blocks
        .iter()
        .zip([(n.t_dr(), m.t_dr()), (n.u_m(), m.u_m()), (n.v(), m.v()), (n.lie_f(), m.lie_f()), (n.lie_g(), m.lie_g())])
        .all(|(b, (r, c))| b.shape() == (r, c))
        && sys.is_solution(&blocks)
}

/// The diagram shape of an étale part: vertices `T` and `lie_g`, the
/// projection `pi`, one Frobenius loop `phi.<place>` per place, and slots for
/// `Fil⁰`, `W₋₂` and `W₋₁`.
pub fn etale_shape(places: &[&str]) -> DiagramShape {
    let mut s = DiagramShape::new();
    s.add_vertex("T").expect("fresh");
    s.add_vertex("lie_g").expect("fresh");
    s.add_edge("pi", "T", "lie_g", false).expect("fresh");
    for p in places {
        s.add_edge(&format!("phi.{p}"), "T", "T", true).expect("distinct places");
    }
    s.add_slot("hodge.0", "T").expect("fresh");
    s.add_slot("weight.-2", "T").expect("fresh");
    s.add_slot("weight.-1", "T").expect("fresh");
    s
}

pub fn etale_object(o: &OgusObject) -> Result<DiagramObject> {
    if !is_level_le_1(o) {
        return Err(Error::LevelViolation("étale part".into()));
    }
    let labels: Vec<&str> = o.frobenii().iter().map(|f| f.label()).collect();
    let fil0 = o.fil0();
    let spaces = BTreeMap::from([("T".to_string(), o.t_dr()), ("lie_g".to_string(), fil0.codim())]);
    let mut maps = BTreeMap::from([("pi".to_string(), fil0.quotient_matrix())]);
    for f in o.frobenii() {
        maps.insert(format!("phi.{}", f.label()), f.phi.clone());
    }
    let slots = BTreeMap::from([
        ("hodge.0".to_string(), fil0),
        ("weight.-2".to_string(), o.weight().step(-2)),
        ("weight.-1".to_string(), o.weight().step(-1)),
    ]);
    DiagramObject::new(etale_shape(&labels), spaces, maps, slots)
}

/// `((étale data) ×_{Mod} Map_K) ×_{Mod} Map_K`: the inner product glues
/// `Lie G_×` to the target of `du_×`, then a vertex `U` with edges `gamma` and
/// `q` is added, and the outer product glues `U` to the source of `α`.
#[derive(Clone, Debug, Serialize)]
pub struct FibrePresentation {
    #[serde(skip)]
    pub inner: FibreProduct,
    #[serde(skip)]
    pub outer: FibreProduct,
    pub inner_triple: FibreProductObject,
    pub outer_triple: FibreProductObject,
    pub object: DiagramObject,
}

pub fn fibre_presentation(m: &LinearizedLaumonMotive) -> Result<FibrePresentation> {
    let etale = etale_object(m.etale())?;
    let inner = fibre_product_category(
        etale.shape(),
        &DiagramShape::map_k(),
        &Selection::Vertex("lie_g".into()),
        &Selection::Vertex("1".into()),
    )?;
    let inner_triple =
        FibreProductObject { x: etale, y: map_object(m.du_times()), theta: RationalMatrix::identity(m.lie_g()) };
    let p1 = inner.object(&inner_triple)?;

    let mut shape = inner.shape().clone();
    shape.add_vertex("U")?;
    shape.add_edge("gamma", "U", "x.T", false)?;
    shape.add_edge("q", "U", "y.0", false)?;
    let mut spaces = p1.spaces().clone();
    spaces.insert("U".into(), m.u_m());
    let mut maps = p1.maps().clone();
    maps.insert("gamma".into(), m.gamma().clone());
    maps.insert("q".into(), m.q().clone());
    let extended = DiagramObject::new(shape, spaces, maps, p1.slot_spaces().clone())?;

    let outer = fibre_product_category(
        extended.shape(),
        &DiagramShape::map_k(),
        &Selection::Vertex("U".into()),
        &Selection::Vertex("0".into()),
    )?;
    let outer_triple =
        FibreProductObject { x: extended, y: map_object(m.alpha()), theta: RationalMatrix::identity(m.u_m()) };
    let object = outer.object(&outer_triple)?;
    Ok(FibrePresentation { inner, outer, inner_triple, outer_triple, object })
}

/// `dim Hom` between the fibre-product presentations.
pub fn presentation_hom_dim(m: &LinearizedLaumonMotive, n: &LinearizedLaumonMotive) -> Result<usize> {
    crate::diagram::hom_dim(&fibre_presentation(m)?.object, &fibre_presentation(n)?.object)
}
