//! Weak admissibility at one place.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{hodge_number, newton_of, restrict_map, FilteredPhiModule};
use crate::error::{Error, Result};
use crate::exact_linalg::{int, padic_valuation, rational_spectrum, Rational, RationalMatrix, Subspace, Valuation};

pub const DEFAULT_SAMPLES: usize = 500;

/// Exhaustive eigenvector-subset enumeration is used up to this dimension.
const MAX_ENUMERATION_DIM: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum AdmissibilityStatus {
    Admissible,
    NotAdmissible,
    Undetermined,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionMethod {
    /// All φ-stable subspaces are spans of eigenvector subsets.
    EigenvectorSubsets,
    /// Dimension ≤ 2 with a repeated or non-rational spectrum.
    LineAnalysis,
    /// No rational eigenvalue in dimension ≤ 3: only `0` and the whole space are stable.
    Irreducible,
    /// Sampled stable subspaces; only a failure is conclusive.
    RandomFalsification,
}

/// `witness`, when present, is φ-stable with `t_H(W) > t_N(W)`. A verdict of
/// `NotAdmissible` without a witness means `t_H(T) < t_N(T)` and no stable
/// subspace violates the inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityVerdict {
    pub status: AdmissibilityStatus,
    pub witness: Option<Subspace>,
    pub t_h_total: i64,
    pub t_n_total: i64,
    pub method: DecisionMethod,
    /// Stable subspaces examined.
    pub candidates: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdmissibilityOptions {
    pub seed: u64,
    pub samples: usize,
}

/// Decides admissibility with the default sample count and a seed derived from
/// the module's canonical serialization.
pub fn check_admissible(d: &FilteredPhiModule, place: &str) -> Result<AdmissibilityVerdict> {
    check_admissible_with(d, place, AdmissibilityOptions { seed: d.default_seed(), samples: DEFAULT_SAMPLES })
}

struct Search<'a> {
    d: &'a FilteredPhiModule,
    phi: &'a RationalMatrix,
    p: u64,
    best: Option<(i64, Subspace)>,
    seen: usize,
}

impl Search<'_> {
    fn consider(&mut self, w: Subspace, t_n: Option<i64>) -> Result<()> {
        self.seen += 1;
        let t_n = match t_n {
            Some(v) => v,
            None => newton_of(&restrict_map(self.phi, &w, "")?, self.p)?,
        };
        let excess = hodge_number(self.d, Some(&w))? - t_n;
        if excess > 0 && self.best.as_ref().is_none_or(|(e, _)| excess > *e) {
            self.best = Some((excess, w));
        }
        Ok(())
    }
}

fn finite(v: Valuation) -> i64 {
    v.finite().expect("eigenvalues of an invertible map are nonzero")
}

fn eigenspace(phi: &RationalMatrix, lambda: &Rational, power: u32) -> Subspace {
    let n = phi.rows();
    let shifted = phi - &RationalMatrix::scalar(n, lambda);
    let mut m = RationalMatrix::identity(n);
    for _ in 0..power {
        m = m.mul(&shifted);
    }
    Subspace::span_columns(&m.kernel_columns())
}

pub fn check_admissible_with(
    d: &FilteredPhiModule,
    place: &str,
    opts: AdmissibilityOptions,
) -> Result<AdmissibilityVerdict> {
    let f = d.frobenius(place)?;
    if f.exempt {
        return Err(Error::ExemptPlace(place.to_string()));
    }
    let n = d.dim();
    let t_h_total = hodge_number(d, None)?;
    let t_n_total = newton_of(&f.phi, f.prime())?;
    let mut search = Search { d, phi: &f.phi, p: f.prime(), best: None, seen: 0 };
    let full = Subspace::full(n);
    search.consider(full.clone(), Some(t_n_total))?;

    let spectrum = rational_spectrum(&f.phi)?;
    let (method, exact) = if spectrum.is_complete && spectrum.is_multiplicity_free() && n <= MAX_ENUMERATION_DIM {
        let lines: Vec<(Subspace, i64)> = spectrum
            .eigenvalues
            .iter()
            .map(|(l, _)| Ok((eigenspace(&f.phi, l, 1), finite(padic_valuation(l, f.prime())?))))
            .collect::<Result<_>>()?;
        for mask in 1u32..(1u32 << n) {
            let mut w = Subspace::zero(n);
            let mut t_n = 0;
            for (k, (line, v)) in lines.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    w = w.sum(line);
                    t_n += v;
                }
            }
            search.consider(w, Some(t_n))?;
        }
        (DecisionMethod::EigenvectorSubsets, true)
    } else if n <= 2 {
        if let [(lambda, 2)] = spectrum.eigenvalues.as_slice() {
            let v = finite(padic_valuation(lambda, f.prime())?);
            let e = eigenspace(&f.phi, lambda, 1);
            if e.dim() == 2 {
                // every line is stable; the worst one lies in the deepest nonzero step
                if let Some(i) = d.filtration().deepest_nonzero_index() {
                    let step = d.filtration().step(i);
                    let line = Subspace::span_columns(&step.inclusion().submatrix(0..n, 0..1));
                    search.consider(line, Some(v))?;
                }
            } else {
                search.consider(e, Some(v))?;
            }
        }
        (DecisionMethod::LineAnalysis, true)
    } else if spectrum.eigenvalues.is_empty() && n <= 3 {
        (DecisionMethod::Irreducible, true)
    } else {
        falsify(&mut search, &spectrum.eigenvalues, opts)?;
        (DecisionMethod::RandomFalsification, false)
    };

    let witness = search.best.map(|(_, w)| w);
    let status = if t_h_total != t_n_total || witness.is_some() {
        AdmissibilityStatus::NotAdmissible
    } else if exact {
        AdmissibilityStatus::Admissible
    } else {
        AdmissibilityStatus::Undetermined
    };
    Ok(AdmissibilityVerdict { status, witness, t_h_total, t_n_total, method, candidates: search.seen })
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    int(rng.gen_range(-3..=3))
}

fn random_vector_in(rng: &mut ChaCha8Rng, w: &Subspace) -> Vec<Rational> {
    let coeffs: Vec<Rational> = (0..w.dim()).map(|_| random_rational(rng)).collect();
    w.inclusion().apply(&coeffs)
}

/// Smallest φ-stable subspace containing `v`.
fn cyclic(phi: &RationalMatrix, v: Vec<Rational>) -> Subspace {
    let n = phi.rows();
    let mut vectors = vec![v];
    for _ in 1..n {
        let next = phi.apply(vectors.last().expect("nonempty"));
        vectors.push(next);
    }
    Subspace::span_vectors(n, &vectors).expect("ambient vectors")
}

fn falsify(search: &mut Search<'_>, eigenvalues: &[(Rational, usize)], opts: AdmissibilityOptions) -> Result<()> {
    let phi = search.phi.clone();
    let n = phi.rows();
    let filtration = search.d.filtration().clone();
    let indices: Vec<i64> = filtration.jumps().iter().map(|(i, _)| *i - 1).collect();

    let mut pool: Vec<Subspace> = Vec::new();
    let mut non_rational = RationalMatrix::identity(n);
    for (lambda, mult) in eigenvalues {
        let shifted = &phi - &RationalMatrix::scalar(n, lambda);
        for _ in 0..*mult {
            non_rational = non_rational.mul(&shifted);
        }
        for k in 1..=*mult as u32 {
            pool.push(eigenspace(&phi, lambda, k));
        }
        let e = eigenspace(&phi, lambda, 1);
        for &i in &indices {
            pool.push(e.intersection(&filtration.step(i)));
        }
    }
    pool.push(Subspace::full(n).image_under(&non_rational));
    pool.retain(|w| !w.is_zero());
    pool.sort_by_key(|w| (w.dim(), format!("{w:?}")));
    pool.dedup();
    for w in &pool {
        search.consider(w.clone(), None)?;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let generalized: Vec<Subspace> =
        eigenvalues.iter().map(|(l, m)| eigenspace(&phi, l, *m as u32)).filter(|w| !w.is_zero()).collect();
    let eigen: Vec<Subspace> = eigenvalues.iter().map(|(l, _)| eigenspace(&phi, l, 1)).collect();
    for _ in 0..opts.samples {
        let w = match rng.gen_range(0..3) {
            0 if !pool.is_empty() => {
                let a = &pool[rng.gen_range(0..pool.len())];
                let b = &pool[rng.gen_range(0..pool.len())];
                a.sum(b)
            }
            1 if !generalized.is_empty() => {
                let g = &generalized[rng.gen_range(0..generalized.len())];
                cyclic(&phi, random_vector_in(&mut rng, g))
            }
            _ if !eigen.is_empty() => {
                let e = &eigen[rng.gen_range(0..eigen.len())];
                let k = rng.gen_range(1..=e.dim().max(1));
                let vectors: Vec<Vec<Rational>> = (0..k).map(|_| random_vector_in(&mut rng, e)).collect();
                let sub = Subspace::span_vectors(n, &vectors)?;
                match pool.get(rng.gen_range(0..pool.len().max(1))) {
                    Some(extra) if rng.gen_bool(0.5) => sub.sum(extra),
                    _ => sub,
                }
            }
            _ => continue,
        };
        if !w.is_zero() {
            search.consider(w, None)?;
        }
    }
    Ok(())
}
