//! Seifert pieces of a graph manifold.
//!
//! A piece is stored without its number of boundary components: that number
//! is always the degree of the vertex carrying the piece in a
//! [`DecompositionGraph`](crate::DecompositionGraph).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::farey::gcd;

/// An exceptional fibre of type `(p, q)` with `0 < q < p` and `gcd(p, q) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "[i64; 2]", into = "[i64; 2]")]
pub struct Fibre {
    p: i64,
    q: i64,
}

impl Fibre {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if !(0 < q && q < p) {
            return Err(Error::InvalidFibre { p, q, reason: "need 0 < q < p" });
        }
        if gcd(p, q) != 1 {
            return Err(Error::InvalidFibre { p, q, reason: "p and q must be coprime" });
        }
        Ok(Fibre { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

impl TryFrom<[i64; 2]> for Fibre {
    type Error = Error;

    fn try_from([p, q]: [i64; 2]) -> Result<Self> {
        Fibre::new(p, q)
    }
}

impl From<Fibre> for [i64; 2] {
    fn from(f: Fibre) -> Self {
        [f.p, f.q]
    }
}

/// Parameters `(g, (p_1, q_1), ..., (p_r, q_r), b)` of an orientable Seifert
/// fibre space with non-empty boundary.
///
/// `g` is the genus of the base when the base is orientable and minus the
/// genus otherwise. The fibre list is kept lexicographically non-decreasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeifertData {
    g: i64,
    fibres: Vec<Fibre>,
    b: i64,
}

/// Why a piece falls outside the admissible class.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClassSViolation {
    /// `d = 0`: the piece has no boundary.
    Closed,
    /// `g = 0`, one boundary torus and at most one exceptional fibre.
    FibredSolidTorus,
    /// `g = 0`, two boundary tori and no exceptional fibre.
    ThickenedTorus,
}

impl fmt::Display for ClassSViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassSViolation::Closed => "closed piece shape (no boundary)",
            ClassSViolation::FibredSolidTorus => "fibred solid torus shape",
            ClassSViolation::ThickenedTorus => "thickened torus shape",
        })
    }
}

impl SeifertData {
    /// Fibres must already be lexicographically sorted.
    pub fn new(g: i64, fibres: Vec<Fibre>, b: i64) -> Result<Self> {
        if let Some(w) = fibres.windows(2).find(|w| w[0] > w[1]) {
            return Err(Error::InvalidFibre {
                p: w[1].p,
                q: w[1].q,
                reason: "fibres must be lexicographically non-decreasing",
            });
        }
        Ok(SeifertData { g, fibres, b })
    }

    pub fn from_pairs(g: i64, pairs: &[(i64, i64)], b: i64) -> Result<Self> {
        let fibres = pairs.iter().map(|&(p, q)| Fibre::new(p, q)).collect::<Result<_>>()?;
        SeifertData::new(g, fibres, b)
    }

    pub fn g(&self) -> i64 {
        self.g
    }

    pub fn fibres(&self) -> &[Fibre] {
        &self.fibres
    }

    /// Number of exceptional fibres.
    pub fn r(&self) -> usize {
        self.fibres.len()
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn with_b(&self, b: i64) -> Self {
        SeifertData { b, ..self.clone() }
    }

    /// `2g` for an orientable base, `-g` otherwise.
    pub fn handle_count(&self) -> i64 {
        if self.g >= 0 {
            2 * self.g
        } else {
            -self.g
        }
    }

    /// `d + r + 2h`, the quantity that must be at least 3 for the piece to be
    /// admissible.
    pub fn shape_index(&self, d: usize) -> i64 {
        d as i64 + self.r() as i64 + 2 * self.handle_count()
    }

    /// Checks membership in the admissible class for a piece with `d` boundary
    /// tori.
    pub fn validate_class_s(&self, d: usize) -> Result<(), ClassSViolation> {
        if d == 0 {
            return Err(ClassSViolation::Closed);
        }
        if self.shape_index(d) >= 3 {
            return Ok(());
        }
        // d + r + 2h < 3 with d >= 1 forces g = 0 and (d, r) in {(1, 0), (1, 1), (2, 0)}.
        if d == 1 {
            Err(ClassSViolation::FibredSolidTorus)
        } else {
            Err(ClassSViolation::ThickenedTorus)
        }
    }

    /// The literal tuple `(0, [(2,1), (2,1)], b)`.
    pub fn is_twisted_bundle_shape(&self) -> bool {
        self.g == 0 && self.fibres.len() == 2 && self.fibres.iter().all(|f| f.p == 2 && f.q == 1)
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.g)?;
        for x in &self.fibres {
            write!(f, ", ({}, {})", x.p, x.q)?;
        }
        write!(f, ", {})", self.b)
    }
}
