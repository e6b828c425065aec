//! Finite filtrations by subspaces, stored canonically as their jumps.
//!
//! A list of steps `(i, S_i)` with strictly increasing indices is read as a step
//! function: the value at `i` is the step with the greatest listed index `≤ i`.
//! For a decreasing filtration the value below the first index is the whole
//! space and a virtual step `(max + 1, 0)` is appended; for an increasing one the
//! value below the first index is `0` and the virtual step is `(max + 1, full)`.
//! An empty list means concentration in degree 0.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_linalg::{RationalMatrix, SpanningRows, Subspace};

#[derive(Clone, Debug, PartialEq, Eq)]
struct Steps {
    ambient_dim: usize,
    decreasing: bool,
    /// Indices where the value changes, with the new value; the last value is
    /// the terminal one (`0` or full).
    jumps: Vec<(i64, Subspace)>,
}

impl Steps {
    fn outer(&self) -> Subspace {
        if self.decreasing {
            Subspace::full(self.ambient_dim)
        } else {
            Subspace::zero(self.ambient_dim)
        }
    }

    fn terminal(&self) -> Subspace {
        if self.decreasing {
            Subspace::zero(self.ambient_dim)
        } else {
            Subspace::full(self.ambient_dim)
        }
    }

    fn new(ambient_dim: usize, decreasing: bool, steps: Vec<(i64, Subspace)>) -> Result<Self> {
        for (i, s) in &steps {
            if s.ambient_dim() != ambient_dim {
                return Err(Error::InvalidFiltration(format!("step {i} lives in dimension {}", s.ambient_dim())));
            }
        }
        for w in steps.windows(2) {
            let ((i, a), (j, b)) = (&w[0], &w[1]);
            if i >= j {
                return Err(Error::InvalidFiltration(format!("indices {i}, {j} are not strictly increasing")));
            }
            let ok = if decreasing { a.contains(b) } else { b.contains(a) };
            if !ok {
                let dir = if decreasing { "decreasing" } else { "increasing" };
                return Err(Error::InvalidFiltration(format!("steps {i} and {j} are not {dir}")));
            }
        }
        let mut raw = Steps { ambient_dim, decreasing, jumps: steps };
        let (default_index, default) = (if decreasing { 1 } else { 0 }, raw.terminal());
        match raw.jumps.last() {
            None => raw.jumps.push((default_index, default)),
            Some((max, last)) if *last != raw.terminal() => {
                let max = *max;
                let t = raw.terminal();
                raw.jumps.push((max + 1, t));
            }
            _ => {}
        }
        Ok(raw.canonical())
    }

    fn canonical(self) -> Self {
        let mut jumps = Vec::new();
        let mut prev = self.outer();
        for (i, s) in self.jumps.iter() {
            if *s != prev {
                jumps.push((*i, s.clone()));
                prev = s.clone();
            }
        }
        Steps { jumps, ..self }
    }

    fn value(&self, i: i64) -> Subspace {
        self.jumps.iter().rev().find(|(j, _)| *j <= i).map(|(_, s)| s.clone()).unwrap_or_else(|| self.outer())
    }

    /// The value at each jump, plus the outer value one step before the first.
    fn probe_indices(&self) -> BTreeSet<i64> {
        let mut out: BTreeSet<i64> = self.jumps.iter().map(|(i, _)| *i).collect();
        if let Some((first, _)) = self.jumps.first() {
            out.insert(first - 1);
        }
        out
    }

    fn map_steps(&self, ambient_dim: usize, f: impl Fn(&Subspace) -> Result<Subspace>) -> Result<Self> {
        let mut jumps = Vec::with_capacity(self.jumps.len());
        for (i, s) in &self.jumps {
            jumps.push((*i, f(s)?));
        }
        Steps::new(ambient_dim, self.decreasing, jumps)
    }
}

macro_rules! filtration_type {
    ($name:ident, $decreasing:expr) => {
        impl $name {
            pub fn new(ambient_dim: usize, steps: Vec<(i64, Subspace)>) -> Result<Self> {
                Steps::new(ambient_dim, $decreasing, steps).map($name)
            }

            /// Concentrated in degree 0.
            pub fn trivial(ambient_dim: usize) -> Self {
                Self::new(ambient_dim, Vec::new()).expect("trivial filtration")
            }

            pub fn ambient_dim(&self) -> usize {
                self.0.ambient_dim
            }

            pub fn step(&self, i: i64) -> Subspace {
                self.0.value(i)
            }

            /// Canonical jumps `(i, value from i on)`.
            pub fn jumps(&self) -> &[(i64, Subspace)] {
                &self.0.jumps
            }

            /// Smallest and largest jump index.
            pub fn window(&self) -> Option<(i64, i64)> {
                Some((self.0.jumps.first()?.0, self.0.jumps.last()?.0))
            }

            /// Indices at which comparing two filtrations is enough.
            pub fn probe_indices(&self, other: &Self) -> BTreeSet<i64> {
                let mut s = self.0.probe_indices();
                s.extend(other.0.probe_indices());
                s
            }

            /// Induced filtration on a subspace, in its canonical coordinates.
            pub fn restrict(&self, sub: &Subspace) -> Result<Self> {
                if sub.ambient_dim() != self.ambient_dim() {
                    return Err(Error::OutsideAmbient(self.ambient_dim()));
                }
                self.0.map_steps(sub.dim(), |s| sub.relative(&sub.intersection(s))).map($name)
            }

            /// Image filtration on the quotient by a subspace, in canonical quotient
            /// coordinates.
            pub fn quotient(&self, sub: &Subspace) -> Result<Self> {
                if sub.ambient_dim() != self.ambient_dim() {
                    return Err(Error::OutsideAmbient(self.ambient_dim()));
                }
                let q = sub.quotient_matrix();
                self.0.map_steps(sub.codim(), |s| Ok(s.image_under(&q))).map($name)
            }

            /// Image along an invertible change of coordinates.
            pub fn transport(&self, change: &RationalMatrix) -> Result<Self> {
                self.0.map_steps(change.rows(), |s| Ok(s.image_under(change))).map($name)
            }

            pub fn direct_sum(&self, other: &Self) -> Result<Self> {
                let idx = self.probe_indices(other);
                let n = self.ambient_dim() + other.ambient_dim();
                let steps = idx
                    .into_iter()
                    .map(|i| {
                        let m = self.step(i).inclusion().block_diag(&other.step(i).inclusion());
                        (i, Subspace::span_columns(&m))
                    })
                    .collect();
                Self::new(n, steps)
            }

            /// `m(F_i) ⊆ F′_i` for all `i`.
            pub fn is_preserved_by(&self, m: &RationalMatrix, target: &Self) -> bool {
                self.probe_indices(target).into_iter().all(|i| target.step(i).contains(&self.step(i).image_under(m)))
            }

            /// `m(F_i) = im(m) ∩ F′_i` for all `i`.
            pub fn is_strict_for(&self, m: &RationalMatrix, target: &Self) -> bool {
                let image = Subspace::full(m.cols()).image_under(m);
                self.probe_indices(target)
                    .into_iter()
                    .all(|i| self.step(i).image_under(m) == image.intersection(&target.step(i)))
            }

            /// The first index where the two filtrations differ, for diagnostics.
            pub fn first_difference(&self, m: &RationalMatrix, target: &Self, strict: bool) -> Option<i64> {
                let image = Subspace::full(m.cols()).image_under(m);
                self.probe_indices(target).into_iter().find(|&i| {
                    let img = self.step(i).image_under(m);
                    if strict {
                        img != image.intersection(&target.step(i))
                    } else {
                        !target.step(i).contains(&img)
                    }
                })
            }
        }

        impl Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let steps: Vec<(i64, &Subspace)> = self.0.jumps.iter().map(|(i, v)| (*i, v)).collect();
                steps.serialize(s)
            }
        }
    };
}

/// A decreasing, exhaustive, separated filtration `Fil^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration(Steps);

/// An increasing, exhaustive, separated filtration `W_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFiltration(Steps);

filtration_type!(Filtration, true);
filtration_type!(WeightFiltration, false);

impl Filtration {
    /// `t_H = Σ_i i · dim gr^i`.
    pub fn hodge_number(&self) -> i64 {
        let mut prev = self.0.ambient_dim as i64;
        let mut total = 0;
        for (i, s) in &self.0.jumps {
            let d = s.dim() as i64;
            total += (i - 1) * (prev - d);
            prev = d;
        }
        total
    }

    /// `i ↦ dim gr^i` on its support.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        let mut prev = self.0.ambient_dim;
        let mut out = Vec::new();
        for (i, s) in &self.0.jumps {
            out.push((i - 1, prev - s.dim()));
            prev = s.dim();
        }
        out
    }

    /// Largest `i` with `Fil^i ≠ 0`, if the space is nonzero.
    pub fn deepest_nonzero_index(&self) -> Option<i64> {
        self.0.jumps.last().map(|(i, _)| i - 1)
    }
}

impl WeightFiltration {
    /// `j ↦ dim gr_j` on its support.
    pub fn graded_dims(&self) -> Vec<(i64, usize)> {
        let mut prev = 0;
        let mut out = Vec::new();
        for (j, s) in &self.0.jumps {
            out.push((*j, s.dim() - prev));
            prev = s.dim();
        }
        out
    }
}

/// Raw serialized steps; the ambient dimension comes from the owner.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(transparent)]
pub struct RawSteps(pub Vec<(i64, SpanningRows)>);

impl RawSteps {
    fn subspaces(self, ambient_dim: usize) -> Result<Vec<(i64, Subspace)>> {
        self.0.into_iter().map(|(i, rows)| Ok((i, rows.into_subspace(ambient_dim)?))).collect()
    }

    pub fn into_filtration(self, ambient_dim: usize) -> Result<Filtration> {
        Filtration::new(ambient_dim, self.subspaces(ambient_dim)?)
    }

    pub fn into_weight(self, ambient_dim: usize) -> Result<WeightFiltration> {
        WeightFiltration::new(ambient_dim, self.subspaces(ambient_dim)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(n: usize, rows: &[&[i64]]) -> Subspace {
        Subspace::from_rows(n, &RationalMatrix::from_ints(rows)).unwrap()
    }

    #[test]
    fn hodge_number_examples() {
        let f = Filtration::new(1, vec![(0, Subspace::full(1)), (1, Subspace::zero(1))]).unwrap();
        assert_eq!(f.hodge_number(), 0);
        let tate = Filtration::new(1, vec![(-1, Subspace::full(1)), (0, Subspace::zero(1))]).unwrap();
        assert_eq!(tate.hodge_number(), -1);
        let plane = sp(3, &[&[1, 0, 0], &[0, 1, 0]]);
        let f = Filtration::new(3, vec![(-1, Subspace::full(3)), (0, plane), (1, Subspace::zero(3))]).unwrap();
        assert_eq!(f.hodge_number(), -1);
        assert_eq!(f.graded_dims(), vec![(-1, 1), (0, 2)]);
    }

    #[test]
    fn canonical_form_and_conventions() {
        let a = Filtration::new(2, vec![(-3, Subspace::full(2)), (0, sp(2, &[&[1, 1]]))]).unwrap();
        let b =
            Filtration::new(2, vec![(0, sp(2, &[&[2, 2]])), (1, Subspace::zero(2)), (5, Subspace::zero(2))]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.step(-10), Subspace::full(2));
        assert_eq!(a.step(0).dim(), 1);
        assert!(a.step(1).is_zero());
        assert_eq!(Filtration::trivial(2).step(0), Subspace::full(2));
        assert!(Filtration::trivial(2).step(1).is_zero());
        let w = WeightFiltration::new(2, vec![(-2, sp(2, &[&[1, 0]]))]).unwrap();
        assert!(w.step(-3).is_zero());
        assert_eq!(w.step(-2).dim(), 1);
        assert!(w.step(-1).is_full());
        assert_eq!(w.graded_dims(), vec![(-2, 1), (-1, 1)]);
    }

    #[test]
    fn rejects_non_monotone_steps() {
        let r = Filtration::new(2, vec![(0, sp(2, &[&[1, 0]])), (1, sp(2, &[&[0, 1]]))]);
        assert!(matches!(r, Err(Error::InvalidFiltration(_))));
        let r = Filtration::new(2, vec![(1, Subspace::zero(2)), (0, Subspace::full(2))]);
        assert!(matches!(r, Err(Error::InvalidFiltration(_))));
        let r = WeightFiltration::new(2, vec![(0, Subspace::full(2)), (1, Subspace::zero(2))]);
        assert!(matches!(r, Err(Error::InvalidFiltration(_))));
    }

    #[test]
    fn restriction_and_quotient_are_additive() {
        let plane = sp(3, &[&[1, 0, 0], &[0, 1, 1]]);
        let f = Filtration::new(
            3,
            vec![(-1, Subspace::full(3)), (0, plane), (1, sp(3, &[&[1, 0, 0]])), (2, Subspace::zero(3))],
        )
        .unwrap();
        let w = sp(3, &[&[1, 1, 1], &[0, 0, 1]]);
        let total = f.hodge_number();
        assert_eq!(f.restrict(&w).unwrap().hodge_number() + f.quotient(&w).unwrap().hodge_number(), total);
    }

    #[test]
    fn strictness() {
        let line_axis = Filtration::new(2, vec![(0, sp(2, &[&[1, 0]])), (1, Subspace::zero(2))]).unwrap();
        let id = RationalMatrix::identity(2);
        assert!(line_axis.is_strict_for(&id, &line_axis));
        // source Fil^0 = 0, map into Fil^0 of the target: compatible but not strict
        let src = Filtration::new(1, vec![(0, Subspace::zero(1))]).unwrap();
        let m = RationalMatrix::from_ints(&[&[1], &[0]]);
        assert!(src.is_preserved_by(&m, &line_axis));
        assert!(!src.is_strict_for(&m, &line_axis));
    }
}
