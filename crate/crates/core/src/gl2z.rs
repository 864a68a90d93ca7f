//! Exact 2×2 integer matrices of determinant ±1.
//!
//! Arithmetic is checked `i64`; any overflow surfaces as [`Error::Overflow`].

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A matrix `(alpha beta / gamma delta)` with determinant `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[[i64; 2]; 2]", into = "[[i64; 2]; 2]")]
pub struct Gl2Matrix {
    alpha: i64,
    beta: i64,
    gamma: i64,
    delta: i64,
}

/// `(0 1 / 1 0)`.
pub const H: Gl2Matrix = Gl2Matrix { alpha: 0, beta: 1, gamma: 1, delta: 0 };
/// `(1 0 / 1 1)`.
pub const U: Gl2Matrix = Gl2Matrix { alpha: 1, beta: 0, gamma: 1, delta: 1 };
pub const IDENTITY: Gl2Matrix = Gl2Matrix { alpha: 1, beta: 0, gamma: 0, delta: 1 };

/// Result of [`Gl2Matrix::normalize`]: `normalized = U^h · A · U^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub normalized: Gl2Matrix,
    pub k: i64,
    pub h: i64,
}

/// Floor division rounding toward negative infinity.
pub fn floor_div(a: i64, b: i64) -> Result<i64> {
    let q = a.checked_div(b).ok_or(Error::Overflow("floor division"))?;
    if a % b != 0 && ((a < 0) != (b < 0)) {
        Ok(q - 1)
    } else {
        Ok(q)
    }
}

fn det_of(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Option<i64> {
    (alpha as i128 * delta as i128 - beta as i128 * gamma as i128).try_into().ok()
}

impl Gl2Matrix {
    pub fn new(alpha: i64, beta: i64, gamma: i64, delta: i64) -> Result<Self> {
        match det_of(alpha, beta, gamma, delta) {
            Some(1 | -1) => Ok(Gl2Matrix { alpha, beta, gamma, delta }),
            Some(d) => Err(Error::Determinant(d)),
            None => Err(Error::Overflow("determinant")),
        }
    }

    pub fn alpha(&self) -> i64 {
        self.alpha
    }
    pub fn beta(&self) -> i64 {
        self.beta
    }
    pub fn gamma(&self) -> i64 {
        self.gamma
    }
    pub fn delta(&self) -> i64 {
        self.delta
    }

    pub fn entries(&self) -> [[i64; 2]; 2] {
        [[self.alpha, self.beta], [self.gamma, self.delta]]
    }

    pub fn det(&self) -> i64 {
        // Construction guarantees the determinant fits and is ±1.
        (self.alpha as i128 * self.delta as i128 - self.beta as i128 * self.gamma as i128) as i64
    }

    /// Sign of `beta`; zero when `beta = 0`.
    pub fn epsilon(&self) -> i64 {
        self.beta.signum()
    }

    /// Rejects anything that cannot label an edge: determinant `+1` or `beta = 0`.
    pub fn check_edge_label(&self) -> Result<()> {
        if self.det() != -1 {
            return Err(Error::NotOrientationReversing(self.det()));
        }
        if self.beta == 0 {
            return Err(Error::ZeroBeta);
        }
        Ok(())
    }

    /// `0 <= eps*alpha < |beta|` and `0 <= eps*delta < |beta|` with `eps = sign(beta)`.
    pub fn is_normalized(&self) -> Result<bool> {
        self.check_edge_label()?;
        let eps = self.epsilon();
        let bound = self.beta.abs();
        let window = |x: i64| (0..bound).contains(&(eps * x));
        Ok(window(self.alpha) && window(self.delta))
    }

    pub fn is_plus_minus_h(&self) -> bool {
        *self == H || *self == -H
    }

    /// Exact product `self · other`.
    pub fn compose(&self, other: &Gl2Matrix) -> Result<Gl2Matrix> {
        let dot = |a: i64, b: i64, c: i64, d: i64| -> Result<i64> {
            a.checked_mul(b)
                .and_then(|x| c.checked_mul(d).and_then(|y| x.checked_add(y)))
                .ok_or(Error::Overflow("matrix product"))
        };
        Ok(Gl2Matrix {
            alpha: dot(self.alpha, other.alpha, self.beta, other.gamma)?,
            beta: dot(self.alpha, other.beta, self.beta, other.delta)?,
            gamma: dot(self.gamma, other.alpha, self.delta, other.gamma)?,
            delta: dot(self.gamma, other.beta, self.delta, other.delta)?,
        })
    }

    /// `U^k = (1 0 / k 1)`.
    pub fn power_u(k: i64) -> Gl2Matrix {
        Gl2Matrix { alpha: 1, beta: 0, gamma: k, delta: 1 }
    }

    /// Brings an edge label into normalized form by `A' = U^h · A · U^k` with
    /// `k = -floor(alpha / beta)` and `h = -floor(delta' / beta)`, where
    /// `delta'` is read off `A · U^k`.
    pub fn normalize(&self) -> Result<Normalization> {
        self.check_edge_label()?;
        let k = floor_div(self.alpha, self.beta)?.checked_neg().ok_or(Error::Overflow("normalization shift"))?;
        let right = self.compose(&Gl2Matrix::power_u(k))?;
        let h = floor_div(right.delta, self.beta)?.checked_neg().ok_or(Error::Overflow("normalization shift"))?;
        let normalized = Gl2Matrix::power_u(h).compose(&right)?;
        debug_assert_eq!(normalized.is_normalized().ok(), Some(true));
        Ok(Normalization { normalized, k, h })
    }
}

impl Neg for Gl2Matrix {
    type Output = Gl2Matrix;

    fn neg(self) -> Gl2Matrix {
        Gl2Matrix { alpha: -self.alpha, beta: -self.beta, gamma: -self.gamma, delta: -self.delta }
    }
}

impl TryFrom<[[i64; 2]; 2]> for Gl2Matrix {
    type Error = Error;

    fn try_from([[a, b], [c, d]]: [[i64; 2]; 2]) -> Result<Self> {
        Gl2Matrix::new(a, b, c, d)
    }
}

impl From<Gl2Matrix> for [[i64; 2]; 2] {
    fn from(m: Gl2Matrix) -> Self {
        m.entries()
    }
}

impl fmt::Display for Gl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} / {} {})", self.alpha, self.beta, self.gamma, self.delta)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> Gl2Matrix {
        Gl2Matrix::new(a, b, c, d).unwrap()
    }

    #[test]
    fn rejects_non_unimodular() {
        assert!(matches!(Gl2Matrix::new(2, 0, 0, 2), Err(Error::Determinant(4))));
    }

    #[test]
    fn is_normalized_examples() {
        assert!(H.is_normalized().unwrap());
        assert!(m(1, 2, 1, 1).is_normalized().unwrap());
        assert!(!m(5, 3, 2, 1).is_normalized().unwrap());
        assert!(matches!(IDENTITY.is_normalized(), Err(Error::NotOrientationReversing(1))));
        assert!(matches!(m(1, 0, 0, -1).is_normalized(), Err(Error::ZeroBeta)));
    }

    #[test]
    fn plus_minus_h() {
        assert!(H.is_plus_minus_h());
        assert!((-H).is_plus_minus_h());
        assert!(!m(1, 2, 1, 1).is_plus_minus_h());
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(H.normalize().unwrap(), Normalization { normalized: H, k: 0, h: 0 });
        assert_eq!(m(5, 3, 2, 1).normalize().unwrap(), Normalization { normalized: m(2, 3, 1, 1), k: -1, h: 0 });
        let neg = m(-2, -3, -1, -1);
        assert_eq!(neg.normalize().unwrap(), Normalization { normalized: neg, k: 0, h: 0 });
        assert!(matches!(m(1, 0, 0, -1).normalize(), Err(Error::ZeroBeta)));
    }

    #[test]
    fn compose_examples() {
        let a = m(5, 3, 2, 1);
        assert_eq!(IDENTITY.compose(&a).unwrap(), a);
        assert_eq!(Gl2Matrix::power_u(0), IDENTITY);
        assert_eq!(U.compose(&U).unwrap(), m(1, 0, 2, 1));
        assert_eq!(Gl2Matrix::power_u(1), U);
    }

    #[test]
    fn compose_overflow_is_reported() {
        let big = Gl2Matrix::power_u(i64::MAX / 2);
        assert!(matches!(big.compose(&big).and_then(|x| x.compose(&big)), Err(Error::Overflow(_))));
    }

    #[test]
    fn floor_div_rounds_down() {
        assert_eq!(floor_div(7, 2).unwrap(), 3);
        assert_eq!(floor_div(-7, 2).unwrap(), -4);
        assert_eq!(floor_div(7, -2).unwrap(), -4);
        assert_eq!(floor_div(-7, -2).unwrap(), 3);
        assert_eq!(floor_div(-6, 3).unwrap(), -2);
    }

    /// Determinant -1 matrix with the given first row, `gcd(alpha, beta) = 1`.
    fn complete(alpha: i64, beta: i64, shift: i64) -> Option<Gl2Matrix> {
        // alpha*delta - beta*gamma = -1
        let (g, x, y) = ext_gcd(alpha, beta);
        if g.abs() != 1 {
            return None;
        }
        // alpha*x + beta*y = g  =>  delta = -g*x, gamma = g*y
        let delta = -g * x + shift * beta;
        let gamma = g * y + shift * alpha;
        Gl2Matrix::new(alpha, beta, gamma, delta).ok()
    }

    fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
        if b == 0 {
            (a, 1, 0)
        } else {
            let (g, x, y) = ext_gcd(b, a % b);
            (g, y, x - (a / b) * y)
        }
    }

    proptest! {
        #[test]
        fn normalize_properties(alpha in -2000i64..2000, beta in -2000i64..2000, shift in -50i64..50) {
            prop_assume!(beta != 0);
            let Some(a) = complete(alpha, beta, shift) else { return Ok(()); };
            prop_assert_eq!(a.det(), -1);
            let n = a.normalize().unwrap();
            let b = n.normalized;
            prop_assert!(b.is_normalized().unwrap());
            prop_assert_eq!(b.beta(), a.beta());
            prop_assert_eq!(b.det(), -1);
            prop_assert!(b.beta() as i128 * b.gamma() as i128 > 0);
            if b.beta().abs() == 1 {
                prop_assert_eq!(b, if b.beta() == 1 { H } else { -H });
            }
            if !b.is_plus_minus_h() {
                prop_assert!(b.delta() != 0);
                prop_assert_eq!(b.beta().signum(), b.delta().signum());
            }
            prop_assert_eq!(b.normalize().unwrap(), Normalization { normalized: b, k: 0, h: 0 });
            prop_assert_eq!((-b).is_normalized().unwrap(), true);
            prop_assert_eq!(a.is_normalized().unwrap(), (-a).is_normalized().unwrap());
            // Reading h off the original delta gives the same result.
            prop_assert_eq!(n.h, -floor_div(a.delta(), a.beta()).unwrap());
            let rebuilt = Gl2Matrix::power_u(n.h).compose(&a).unwrap().compose(&Gl2Matrix::power_u(n.k)).unwrap();
            prop_assert_eq!(rebuilt, b);
        }
    }
}
