//! Random generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ogus::diagram::{
    fibre_product_category, hom_basis, DiagramMorphism, DiagramObject, DiagramShape, FibreProduct, FibreProductObject,
    Selection,
};
use ogus::exact_linalg::{int, rat, Rational, RationalMatrix, Subspace};
use ogus::filtered_phi::{
    AdmissibilityStatus, AdmissibilityVerdict, FilteredPhiModule, Filtration, FrobeniusAt, Place, WeightFiltration,
};
use ogus::laumon::{assemble, build_gamma, AlphaRowData, LinearizedLaumonMotive, TimesMotiveData};
use ogus::ogus::{hom, validate, OgusMorphism, OgusObject};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, bound: i64) -> RationalMatrix {
    let data = (0..rows * cols).map(|_| int(rng.gen_range(-bound..=bound))).collect();
    RationalMatrix::new(rows, cols, data).unwrap()
}

pub fn random_invertible(rng: &mut ChaCha8Rng, n: usize) -> RationalMatrix {
    loop {
        let m = random_matrix(rng, n, n, 2);
        if m.is_invertible() {
            return m;
        }
    }
}

/// An `n × k` matrix of rank `k`.
pub fn random_full_rank(rng: &mut ChaCha8Rng, n: usize, k: usize) -> RationalMatrix {
    assert!(k <= n);
    loop {
        let m = random_matrix(rng, n, k, 2);
        if m.rank() == k {
            return m;
        }
    }
}

pub fn random_subspace(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Subspace {
    if k == 0 {
        return Subspace::zero(n);
    }
    Subspace::span_columns(&random_full_rank(rng, n, k))
}

pub fn places() -> Vec<Place> {
    vec![Place::new("v2", 2).unwrap(), Place::new("v3", 3).unwrap()]
}

/// Frobenius eigenvalue at `v2`, at `v3`, weight, and whether the slope is 0
/// (otherwise −1) at both places.
pub struct EigenType {
    pub v2: Rational,
    pub v3: Rational,
    pub weight: i64,
    pub slope_zero: bool,
}

pub fn pool() -> Vec<EigenType> {
    let t = |a: (i64, i64), b: (i64, i64), weight: i64, slope_zero: bool| EigenType {
        v2: rat(a.0, a.1),
        v3: rat(b.0, b.1),
        weight,
        slope_zero,
    };
    vec![
        t((1, 2), (1, 3), -2, false),
        t((-1, 2), (2, 3), -2, false),
        t((3, 2), (4, 3), -1, false),
        t((3, 1), (4, 1), -1, true),
        t((1, 1), (1, 1), 0, true),
        t((-1, 1), (-1, 1), 0, true),
        t((5, 1), (5, 1), -1, true),
    ]
}

/// A level ≤ 1 object with one eigenline per listed pool type, in a random
/// basis, with a random `Fil⁰` of the dimension forced by the totals.
pub fn pool_object(rng: &mut ChaCha8Rng, types: &[usize]) -> OgusObject {
    let pool = pool();
    let n = types.len();
    if n == 0 {
        return OgusObject::new(0, WeightFiltration::trivial(0), Filtration::trivial(0), frobenii_of(0, &[], &[]))
            .unwrap();
    }
    let p = random_invertible(rng, n);
    let pinv = p.inverse().unwrap();
    let conj = |vals: Vec<Rational>| p.mul(&RationalMatrix::diagonal(&vals)).mul(&pinv);
    let phi2 = conj(types.iter().map(|&t| pool[t].v2.clone()).collect());
    let phi3 = conj(types.iter().map(|&t| pool[t].v3.clone()).collect());
    let weight_step = |j: i64| {
        let cols: Vec<usize> = (0..n).filter(|&i| pool[types[i]].weight <= j).collect();
        Subspace::span_columns(&p.select_columns(&cols))
    };
    let weight =
        WeightFiltration::new(n, vec![(-2, weight_step(-2)), (-1, weight_step(-1)), (0, Subspace::full(n))]).unwrap();
    let k0 = types.iter().filter(|&&t| pool[t].slope_zero).count();
    let hodge = Filtration::new(n, vec![(0, random_subspace(rng, n, k0))]).unwrap();
    OgusObject::new(n, weight, hodge, frobenii_of(n, &[phi2], &[phi3])).unwrap()
}

fn frobenii_of(n: usize, phi2: &[RationalMatrix], phi3: &[RationalMatrix]) -> Vec<FrobeniusAt> {
    let places = places();
    let get = |m: &[RationalMatrix]| m.first().cloned().unwrap_or_else(|| RationalMatrix::identity(n));
    vec![
        FrobeniusAt::new(places[0].clone(), get(phi2), false).unwrap(),
        FrobeniusAt::new(places[1].clone(), get(phi3), false).unwrap(),
    ]
}

pub fn random_types(rng: &mut ChaCha8Rng, max: usize) -> Vec<usize> {
    let k = rng.gen_range(0..=max);
    let mut all: Vec<usize> = (0..pool().len()).collect();
    all.shuffle(rng);
    all.truncate(k);
    all
}

/// A valid level ≤ 1 object of dimension at most `max`.
pub fn random_level1(rng: &mut ChaCha8Rng, max: usize) -> OgusObject {
    loop {
        let types = random_types(rng, max);
        let o = pool_object(rng, &types);
        if validate(&o).is_valid() {
            return o;
        }
    }
}

/// Valid objects over overlapping type sets, so that homs are often nonzero.
pub fn random_related_pair(rng: &mut ChaCha8Rng, max: usize) -> (OgusObject, OgusObject) {
    loop {
        let a_types = random_types(rng, max);
        let mut b_types: Vec<usize> = a_types.iter().copied().filter(|_| rng.gen_bool(0.7)).collect();
        if b_types.len() < max && rng.gen_bool(0.5) {
            let extra = rng.gen_range(0..pool().len());
            if !b_types.contains(&extra) {
                b_types.push(extra);
            }
        }
        let a = pool_object(rng, &a_types);
        let b = pool_object(rng, &b_types);
        if validate(&a).is_valid() && validate(&b).is_valid() {
            return (a, b);
        }
    }
}

/// A random integer combination of a hom basis.
pub fn random_ogus_morphism(rng: &mut ChaCha8Rng, a: &OgusObject, b: &OgusObject) -> OgusMorphism {
    let mut m = RationalMatrix::zeros(b.t_dr(), a.t_dr());
    for f in hom(a, b).unwrap() {
        let c = int(rng.gen_range(-3..=3));
        m = add(&m, &f.matrix().scale(&c));
    }
    OgusMorphism::new(a.clone(), b.clone(), m).unwrap()
}

pub fn add(a: &RationalMatrix, b: &RationalMatrix) -> RationalMatrix {
    let data = a.entries().iter().zip(b.entries()).map(|(x, y)| x + y).collect();
    RationalMatrix::new(a.rows(), a.cols(), data).unwrap()
}

/// An object without Frobenius, with a random two-step Hodge filtration.
pub fn frobenius_free(rng: &mut ChaCha8Rng, max: usize) -> OgusObject {
    let n = rng.gen_range(1..=max);
    let k = rng.gen_range(0..=n);
    let hodge = Filtration::new(n, vec![(0, random_subspace(rng, n, k))]).unwrap();
    OgusObject::new(n, WeightFiltration::trivial(n), hodge, Vec::new()).unwrap()
}

/// A motive over a random valid étale part, every dimension at most `max`,
/// with `γ` built from a random section and a random lift.
pub fn random_motive(rng: &mut ChaCha8Rng, max: usize) -> LinearizedLaumonMotive {
    let etale = random_level1(rng, max);
    let fil0 = etale.fil0();
    let u = fil0.dim();
    let g = fil0.codim();
    let f = rng.gen_range(0..=max.saturating_sub(u).min(2));
    let du = random_matrix(rng, g, f, 2);
    let times = TimesMotiveData::new(etale, f, du.clone()).unwrap();
    let u_m = u + f;
    let basis = random_invertible(rng, u_m);
    let inv = basis.inverse().unwrap();
    let j = basis.submatrix(0..u_m, 0..u);
    let sigma = basis.submatrix(0..u_m, u..u_m);
    let q = inv.submatrix(u..u_m, 0..u_m);
    let e = random_matrix(rng, u, f, 2);
    let s = add(&fil0.quotient_section().mul(&du), &fil0.inclusion().mul(&e));
    let gamma = build_gamma(&times, &j, &q, &sigma, &s).unwrap();
    let v = rng.gen_range(0..=max.min(2));
    let alpha = random_matrix(rng, v, u_m, 2);
    assemble(times, AlphaRowData { v, u_m, j, q, alpha, gamma }).unwrap()
}

/// A filtered φ-module with its construction data, for the brute-force oracle.
pub struct OracleModule {
    pub module: FilteredPhiModule,
    pub place: String,
    pub eigenvectors: RationalMatrix,
    pub slopes: Vec<i64>,
    /// `Fil⁻¹ = T ⊇ Fil⁰ ⊇ Fil¹ ⊇ Fil² = 0` as column bases.
    pub fil: Vec<(i64, RationalMatrix)>,
}

/// Dimension ≤ 5, distinct eigenvalues `p^s u` with `s ∈ {−1, 0, 1}`, Hodge
/// weights in `{−1, 0, 1}`; the totals are usually matched.
pub fn oracle_module(rng: &mut ChaCha8Rng) -> OracleModule {
    let p = *[2u64, 3, 5].choose(rng).unwrap();
    let n = rng.gen_range(1..=5);
    let units: Vec<i64> = [1, -1, 2, -2, 3, -3, 4, -4, 7].into_iter().filter(|u| u % p as i64 != 0).collect();
    let mut pairs: Vec<(i64, i64)> = Vec::new();
    while pairs.len() < n {
        let pair = (rng.gen_range(-1..=1), *units.choose(rng).unwrap());
        if !pairs.contains(&pair) {
            pairs.push(pair);
        }
    }
    let eigen: Vec<Rational> = pairs
        .iter()
        .map(|&(s, u)| match s {
            1 => int(p as i64 * u),
            0 => int(u),
            _ => rat(u, p as i64),
        })
        .collect();
    let slopes: Vec<i64> = pairs.iter().map(|&(s, _)| s).collect();
    let basis = random_invertible(rng, n);
    let phi = basis.mul(&RationalMatrix::diagonal(&eigen)).mul(&basis.inverse().unwrap());
    let t_n: i64 = slopes.iter().sum();
    let matched: Vec<(usize, usize)> = (0..=n)
        .flat_map(|a| (0..=a).map(move |b| (a, b)))
        .filter(|&(a, b)| a as i64 + b as i64 - n as i64 == t_n)
        .collect();
    let (a, b) = if !matched.is_empty() && rng.gen_bool(0.8) {
        *matched.choose(rng).unwrap()
    } else {
        let a = rng.gen_range(0..=n);
        (a, rng.gen_range(0..=a))
    };
    let fil0 = if a == 0 { RationalMatrix::zeros(n, 0) } else { random_full_rank(rng, n, a) };
    let fil1 = if b == 0 { RationalMatrix::zeros(n, 0) } else { fil0.mul(&random_full_rank(rng, a, b)) };
    let filtration =
        Filtration::new(n, vec![(0, Subspace::span_columns(&fil0)), (1, Subspace::span_columns(&fil1))]).unwrap();
    let label = format!("v{p}");
    let frob = FrobeniusAt::new(Place::new(&label, p).unwrap(), phi, false).unwrap();
    let module = FilteredPhiModule::new(n, filtration, vec![frob]).unwrap();
    let fil = vec![(-1, RationalMatrix::identity(n)), (0, fil0), (1, fil1), (2, RationalMatrix::zeros(n, 0))];
    OracleModule { module, place: label, eigenvectors: basis, slopes, fil }
}

fn intersection_dim(w: &RationalMatrix, f: &RationalMatrix) -> usize {
    w.rank() + f.rank() - w.hstack(f).rank()
}

impl OracleModule {
    pub fn dim(&self) -> usize {
        self.slopes.len()
    }

    fn span_of(&self, subset: &[usize]) -> RationalMatrix {
        self.eigenvectors.select_columns(subset)
    }

    /// `Σ i · dim gr^i (W)` from intersection dimensions.
    pub fn t_h(&self, w: &RationalMatrix) -> i64 {
        let dims: Vec<(i64, usize)> = self.fil.iter().map(|(i, f)| (*i, intersection_dim(w, f))).collect();
        dims.windows(2).map(|p| p[0].0 * (p[0].1 as i64 - p[1].1 as i64)).sum()
    }

    pub fn t_n(&self, subset: &[usize]) -> i64 {
        subset.iter().map(|&i| self.slopes[i]).sum()
    }

    /// Brute force over all `2^n` eigenvector subsets.
    pub fn oracle(&self) -> AdmissibilityStatus {
        let n = self.dim();
        let all: Vec<usize> = (0..n).collect();
        if self.t_h(&self.span_of(&all)) != self.t_n(&all) {
            return AdmissibilityStatus::NotAdmissible;
        }
        for mask in 0u32..(1 << n) {
            let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if self.t_h(&self.span_of(&subset)) > self.t_n(&subset) {
                return AdmissibilityStatus::NotAdmissible;
            }
        }
        AdmissibilityStatus::Admissible
    }

    /// The witness is a span of eigenvectors with `t_H > t_N`.
    pub fn witness_ok(&self, verdict: &AdmissibilityVerdict) -> bool {
        let Some(w) = &verdict.witness else { return true };
        let subset: Vec<usize> = (0..self.dim()).filter(|&i| w.contains_vector(&self.eigenvectors.column(i))).collect();
        subset.len() == w.dim() && self.t_h(&self.span_of(&subset)) > self.t_n(&subset)
    }
}

/// A random relation-free shape on up to three vertices, loops allowed.
pub fn random_shape(rng: &mut ChaCha8Rng, prefix: &str) -> DiagramShape {
    let mut s = DiagramShape::new();
    let nv = rng.gen_range(1..=3);
    let names: Vec<String> = (0..nv).map(|i| format!("{prefix}{i}")).collect();
    for v in &names {
        s.add_vertex(v).unwrap();
    }
    for e in 0..rng.gen_range(0..=3) {
        let a = names.choose(rng).unwrap();
        let b = names.choose(rng).unwrap();
        s.add_edge(&format!("e{e}"), a, b, false).unwrap();
    }
    s
}

/// A random object; `forced` fixes some vertex dimensions.
pub fn random_object(rng: &mut ChaCha8Rng, shape: &DiagramShape, forced: &BTreeMap<String, usize>) -> DiagramObject {
    let spaces: BTreeMap<String, usize> = shape
        .vertices()
        .map(|v| (v.to_string(), forced.get(v).copied().unwrap_or_else(|| rng.gen_range(0..=2))))
        .collect();
    let maps = shape
        .edges()
        .map(|e| {
            let m = if e.invertible {
                random_invertible(rng, spaces[&e.source])
            } else {
                random_matrix(rng, spaces[&e.target], spaces[&e.source], 2)
            };
            (e.label.clone(), m)
        })
        .collect();
    let slots = shape
        .slots()
        .map(|s| {
            let n = spaces[&s.vertex];
            let k = rng.gen_range(0..=n);
            (s.label.clone(), random_subspace(rng, n, k))
        })
        .collect();
    DiagramObject::new(shape.clone(), spaces, maps, slots).unwrap()
}

pub fn random_diagram_morphism(rng: &mut ChaCha8Rng, a: &DiagramObject, b: &DiagramObject) -> DiagramMorphism {
    let basis = hom_basis(a, b).unwrap();
    let coeffs: Vec<Rational> = basis.iter().map(|_| int(rng.gen_range(-3..=3))).collect();
    let terms: Vec<(Rational, &DiagramMorphism)> = coeffs.into_iter().zip(basis.iter()).collect();
    if terms.is_empty() {
        DiagramMorphism::zero(a, b).unwrap()
    } else {
        DiagramMorphism::scaled_sum(&terms).unwrap()
    }
}

/// `X` is a random shape, sometimes with a slot; `Y` is `Map_K` or random.
pub fn random_fibre_instance(rng: &mut ChaCha8Rng) -> (FibreProduct, DiagramObject, DiagramObject) {
    let mut x = random_shape(rng, "x");
    let f = if rng.gen_bool(0.3) {
        x.add_slot("s", "x0").unwrap();
        Selection::Slot("s".into())
    } else {
        Selection::Vertex("x0".into())
    };
    let (y, g) = if rng.gen_bool(0.5) {
        (DiagramShape::map_k(), Selection::Vertex(if rng.gen_bool(0.5) { "0" } else { "1" }.into()))
    } else {
        (random_shape(rng, "y"), Selection::Vertex("y0".into()))
    };
    let fp = fibre_product_category(&x, &y, &f, &g).unwrap();
    let mut object = || {
        let xo = random_object(rng, &x, &BTreeMap::new());
        let d = f.apply(&xo);
        let Selection::Vertex(gv) = &g else { unreachable!() };
        let yo = random_object(rng, &y, &BTreeMap::from([(gv.clone(), d)]));
        let theta = random_invertible(rng, d);
        fp.object(&FibreProductObject { x: xo, y: yo, theta }).unwrap()
    };
    let a = object();
    let b = object();
    (fp, a, b)
}
