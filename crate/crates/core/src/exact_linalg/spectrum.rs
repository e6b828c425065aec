//! Rational eigenvalues via the characteristic polynomial.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::RationalMatrix;
use super::rational::{int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSpectrum {
    /// Distinct rational eigenvalues in increasing order with algebraic multiplicities.
    pub eigenvalues: Vec<(Rational, usize)>,
    /// True iff the characteristic polynomial splits over Q.
    pub is_complete: bool,
}

impl RationalSpectrum {
    pub fn is_multiplicity_free(&self) -> bool {
        self.eigenvalues.iter().all(|(_, m)| *m == 1)
    }
}

/// Coefficients `c_0, ..., c_n` (constant term first) of `det(x I - m)`, by the
/// Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(m: &RationalMatrix) -> Result<Vec<Rational>> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut aux = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        aux = &m.mul(&aux) + &RationalMatrix::scalar(n, &coeffs[n - k + 1]);
        let t = m.mul(&aux).trace();
        coeffs[n - k] = -t / int(k as i64);
    }
    Ok(coeffs)
}

pub fn eval_poly(coeffs: &[Rational], x: &Rational) -> Rational {
    coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

/// Divides by `(x - root)`, assuming `root` is a root.
fn deflate(coeffs: &[Rational], root: &Rational) -> Vec<Rational> {
    let n = coeffs.len() - 1;
    let mut out = vec![Rational::zero(); n];
    let mut carry = Rational::zero();
    for k in (1..=n).rev() {
        carry = &coeffs[k] + carry * root;
        out[k - 1] = carry.clone();
    }
    out
}

const DIVISOR_LIMIT: u128 = 1 << 62;

fn positive_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs().to_u128().filter(|&v| v <= DIVISOR_LIMIT).ok_or(Error::CoefficientTooLarge)?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small.into_iter().map(BigInt::from).collect())
}

/// All rational roots with multiplicity, by the rational-root theorem on the
/// integer-scaled polynomial.
pub fn rational_roots(coeffs: &[Rational]) -> Result<Vec<(Rational, usize)>> {
    let mut poly: Vec<Rational> = coeffs.to_vec();
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    let mut roots = Vec::new();
    let mut zero_mult = 0;
    while poly.len() > 1 && poly[0].is_zero() {
        poly.remove(0);
        zero_mult += 1;
    }
    if zero_mult > 0 {
        roots.push((Rational::zero(), zero_mult));
    }
    if poly.len() <= 1 {
        return Ok(roots);
    }
    let lcm = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = poly.iter().map(|c| (c * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
    let num_divs = positive_divisors(&ints[0])?;
    let den_divs = positive_divisors(ints.last().expect("nonconstant"))?;
    let mut candidates: Vec<Rational> = Vec::new();
    for a in &num_divs {
        for b in &den_divs {
            for sign in [1, -1] {
                let c = Rational::new(a * BigInt::from(sign), b.clone());
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
        }
    }
    candidates.sort();
    for c in candidates {
        let mut mult = 0;
        while poly.len() > 1 && eval_poly(&poly, &c).is_zero() {
            poly = deflate(&poly, &c);
            mult += 1;
        }
        if mult > 0 {
            roots.push((c, mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(roots)
}

pub fn rational_spectrum(m: &RationalMatrix) -> Result<RationalSpectrum> {
    let chi = characteristic_polynomial(m)?;
    let eigenvalues = rational_roots(&chi)?;
    let total: usize = eigenvalues.iter().map(|(_, k)| k).sum();
    Ok(RationalSpectrum { is_complete: total == m.rows(), eigenvalues })
}
