//! Formal integer combinations `Σ nᵢ[zᵢ]` of parameters in `C ∖ {0, 1}`.
//!
//! Elements are kept as merged term lists; the five-term relation is not
//! imposed, it is only checked numerically through [`PreBlochElement::dilog_eval`].

use alloc::format;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use crate::dilog::bloch_wigner_finite;
use crate::{Complex, Error, Result};

/// Parameters closer than this to 0 or 1 are rejected.
pub const PARAM_TOL: f64 = 1e-12;

/// Parameters closer than this (relative to their size) are merged.
pub const MERGE_TOL: f64 = 1e-14;

/// Which involution to apply termwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamInvolution {
    /// `[z] ↦ [z̄]`.
    Conjugate,
    /// `[z] ↦ [1/z]`.
    Reciprocal,
}

/// An element of the free abelian group on `C ∖ {0, 1}`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PreBlochElement {
    terms: Vec<(i64, Complex)>,
}

fn check_param(z: Complex) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::NonFinite("pre-Bloch parameter"));
    }
    if z.norm() <= PARAM_TOL || (z - 1.0).norm() <= PARAM_TOL {
        return Err(Error::Degenerate(format!("pre-Bloch parameter {z} is 0 or 1")));
    }
    Ok(())
}

fn same_param(a: Complex, b: Complex) -> bool {
    (a - b).norm() <= MERGE_TOL * a.norm().max(1.0)
}

impl PreBlochElement {
    /// The empty element.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The generator `[z]`.
    pub fn generator(z: Complex) -> Result<Self> {
        Self::from_terms([(1, z)])
    }

    /// Builds a merged element from `(coefficient, parameter)` pairs.
    pub fn from_terms<I: IntoIterator<Item = (i64, Complex)>>(terms: I) -> Result<Self> {
        let mut out = Self::zero();
        for (n, z) in terms {
            check_param(z)?;
            out.push(n, z);
        }
        Ok(out)
    }

    fn push(&mut self, n: i64, z: Complex) {
        if n == 0 {
            return;
        }
        if let Some(pos) = self.terms.iter().position(|&(_, w)| same_param(w, z)) {
            self.terms[pos].0 += n;
            if self.terms[pos].0 == 0 {
                self.terms.remove(pos);
            }
        } else {
            self.terms.push((n, z));
        }
    }

    /// Terms in insertion order, zero coefficients removed.
    pub fn terms(&self) -> &[(i64, Complex)] {
        &self.terms
    }

    /// Number of distinct parameters.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True for the empty element.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies every coefficient by `k`.
    pub fn scaled(&self, k: i64) -> Self {
        let mut out = Self::zero();
        for &(n, z) in &self.terms {
            out.push(n * k, z);
        }
        out
    }

    /// `Σ nᵢ D(zᵢ)`.
    pub fn dilog_eval(&self) -> f64 {
        self.terms
            .iter()
            .map(|&(n, z)| n as f64 * bloch_wigner_finite(z))
            .sum()
    }

    /// Applies `z ↦ z̄` or `z ↦ 1/z` to every parameter. Either way the
    /// `D`-value changes sign.
    pub fn involute(&self, kind: ParamInvolution) -> Self {
        let mut out = Self::zero();
        for &(n, z) in &self.terms {
            let w = match kind {
                ParamInvolution::Conjugate => z.conj(),
                ParamInvolution::Reciprocal => z.inv(),
            };
            out.push(n, w);
        }
        out
    }
}

impl Add for PreBlochElement {
    type Output = PreBlochElement;

    fn add(mut self, rhs: PreBlochElement) -> PreBlochElement {
        for (n, z) in rhs.terms {
            self.push(n, z);
        }
        self
    }
}

impl Neg for PreBlochElement {
    type Output = PreBlochElement;

    fn neg(self) -> PreBlochElement {
        self.scaled(-1)
    }
}

impl Sub for PreBlochElement {
    type Output = PreBlochElement;

    fn sub(self, rhs: PreBlochElement) -> PreBlochElement {
        self + (-rhs)
    }
}

/// `[x] - [y] + [y/x] - [(1-x⁻¹)/(1-y⁻¹)] + [(1-x)/(1-y)]`.
pub fn five_term_element(x: Complex, y: Complex) -> Result<PreBlochElement> {
    check_param(x)?;
    check_param(y)?;
    let one = Complex::new(1.0, 0.0);
    let params = [x, y, y / x, (one - x.inv()) / (one - y.inv()), (one - x) / (one - y)];
    let signs = [1, -1, 1, -1, 1];
    PreBlochElement::from_terms(signs.into_iter().zip(params))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn cancellation_gives_empty() {
        let a = PreBlochElement::generator(c(2.0, 1.0)).unwrap();
        assert!((a.clone() + a.scaled(-1)).is_empty());
        let b = PreBlochElement::generator(c(0.0, 1.0)).unwrap()
            + PreBlochElement::generator(c(0.0, 2.0)).unwrap();
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn merging_within_tolerance() {
        let z = c(0.25, -3.0);
        let a = PreBlochElement::from_terms([(2, z), (1, z + c(1e-16, 0.0))]).unwrap();
        assert_eq!(a.terms(), &[(3, z)]);
    }

    #[test]
    fn rejects_excluded_parameters() {
        assert!(PreBlochElement::generator(c(1.0, 0.0)).is_err());
        assert!(PreBlochElement::generator(c(0.0, 0.0)).is_err());
        assert!(PreBlochElement::generator(c(f64::NAN, 0.0)).is_err());
    }

    #[test]
    fn reciprocal_and_conjugate_negate() {
        let z = c(0.3, 0.7);
        let a = PreBlochElement::generator(z).unwrap();
        let recip = a.clone() + a.involute(ParamInvolution::Reciprocal);
        assert!(recip.dilog_eval().abs() < 1e-14);
        let conj = a.clone() + a.involute(ParamInvolution::Conjugate);
        assert!(conj.dilog_eval().abs() < 1e-14);
        assert!(PreBlochElement::zero().involute(ParamInvolution::Conjugate).is_empty());
    }

    #[test]
    fn five_term_examples() {
        let e = five_term_element(c(2.0, 1.0), c(3.0, -1.0)).unwrap();
        assert_eq!(e.len(), 5);
        assert!(e.dilog_eval().abs() < 1e-12);
        assert!(five_term_element(c(2.0, 1.0), c(2.0, 1.0)).is_err());
        assert!(five_term_element(c(1.0, 0.0), c(2.0, 1.0)).is_err());
    }
}
