//! Slopes, Farey triangles and the distance in the dual tree of the Farey
//! triangulation.
//!
//! The complexity of a gluing matrix is available two ways: the closed form
//! [`matrix_complexity`] (a continued fraction sum) and the search
//! [`complexity_by_search`], which walks the dual tree and knows nothing about
//! continued fractions.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gl2z::Gl2Matrix;

pub(crate) fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i64
}

/// Sum of the coefficients of the continued fraction expansion of `p/q`
/// (all coefficients positive).
pub fn cf_sum(p: i64, q: i64) -> Result<u64> {
    if p <= 0 || q <= 0 || gcd(p, q) != 1 {
        return Err(Error::InvalidRational(p, q));
    }
    let (mut a, mut b) = (p as u64, q as u64);
    let mut sum = 0;
    while b != 0 {
        sum += a / b;
        (a, b) = (b, a % b);
    }
    Ok(sum)
}

/// A vertex of the Farey triangulation, `a/b` with `gcd(a, b) = 1`.
///
/// Stored with `b > 0`, or as `1/0` for infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slope {
    a: i64,
    b: i64,
}

impl Slope {
    pub const INFINITY: Slope = Slope { a: 1, b: 0 };
    pub const ZERO: Slope = Slope { a: 0, b: 1 };

    pub fn new(a: i64, b: i64) -> Result<Self> {
        if gcd(a, b) != 1 {
            return Err(Error::InvalidTriangle(format!("{a}/{b} is not a reduced slope")));
        }
        if b < 0 || (b == 0 && a < 0) {
            let neg = |x: i64| x.checked_neg().ok_or(Error::Overflow("slope"));
            Ok(Slope { a: neg(a)?, b: neg(b)? })
        } else {
            Ok(Slope { a, b })
        }
    }

    pub fn numer(&self) -> i64 {
        self.a
    }

    pub fn denom(&self) -> i64 {
        self.b
    }

    fn cross(&self, other: &Slope) -> i128 {
        self.a as i128 * other.b as i128 - self.b as i128 * other.a as i128
    }

    /// Whether the two slopes span an edge of the triangulation.
    pub fn is_farey_neighbour(&self, other: &Slope) -> bool {
        self.cross(other).abs() == 1
    }

    fn combine(&self, other: &Slope, sign: i64) -> Result<Slope> {
        let a = other.a.checked_mul(sign).and_then(|x| self.a.checked_add(x));
        let b = other.b.checked_mul(sign).and_then(|x| self.b.checked_add(x));
        match (a, b) {
            (Some(a), Some(b)) => Slope::new(a, b),
            _ => Err(Error::Overflow("Farey flip")),
        }
    }
}

/// Position on the projective line: infinity first, then by decreasing value.
/// Canonical representatives all lie in the half-open upper half plane, so the
/// sign of the cross product is the angular order.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        0.cmp(&self.cross(other))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (_, 0) => f.write_str("inf"),
            (a, 1) => write!(f, "{a}"),
            (a, b) => write!(f, "{a}/{b}"),
        }
    }
}

/// Three slopes, pairwise Farey neighbours, kept in projective-line order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FareyTriangle([Slope; 3]);

impl FareyTriangle {
    pub fn new(x: Slope, y: Slope, z: Slope) -> Result<Self> {
        if !(x.is_farey_neighbour(&y) && y.is_farey_neighbour(&z) && x.is_farey_neighbour(&z)) {
            return Err(Error::InvalidTriangle(format!("{{{x}, {y}, {z}}}")));
        }
        let mut v = [x, y, z];
        v.sort();
        Ok(FareyTriangle(v))
    }

    /// `{inf, 0, 1}`.
    pub fn tau_plus() -> Self {
        FareyTriangle([Slope::INFINITY, Slope { a: 1, b: 1 }, Slope::ZERO])
    }

    /// `{inf, 0, -1}`.
    pub fn tau_minus() -> Self {
        FareyTriangle([Slope::INFINITY, Slope::ZERO, Slope { a: -1, b: 1 }])
    }

    pub fn vertices(&self) -> &[Slope; 3] {
        &self.0
    }

    pub fn contains(&self, s: &Slope) -> bool {
        self.0.contains(s)
    }

    /// The triangle on the other side of the edge `(u, v)`; `w` is the
    /// opposite vertex, and the new vertex is whichever of `u ± v` is not `w`.
    fn flip(u: Slope, v: Slope, w: Slope) -> Result<FareyTriangle> {
        let sum = u.combine(&v, 1)?;
        let apex = if sum == w { u.combine(&v, -1)? } else { sum };
        FareyTriangle::new(u, v, apex)
    }

    /// The three neighbours in the dual tree.
    pub fn neighbours(&self) -> Result<[FareyTriangle; 3]> {
        let [x, y, z] = self.0;
        Ok([FareyTriangle::flip(x, y, z)?, FareyTriangle::flip(y, z, x)?, FareyTriangle::flip(z, x, y)?])
    }

    /// One step along the dual-tree path toward `target`.
    fn step_toward(&self, target: &FareyTriangle) -> Result<FareyTriangle> {
        let [s0, s1, s2] = self.0;
        // A triangle distinct from self has a vertex outside it; all such
        // vertices lie in the same arc cut out by self's vertices.
        let x = target.0.iter().find(|x| !self.contains(x)).expect("distinct triangles differ in a vertex");
        if s0 < *x && *x < s1 {
            FareyTriangle::flip(s0, s1, s2)
        } else if s1 < *x && *x < s2 {
            FareyTriangle::flip(s1, s2, s0)
        } else {
            FareyTriangle::flip(s2, s0, s1)
        }
    }
}

impl fmt::Display for FareyTriangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [x, y, z] = &self.0;
        write!(f, "{{{x}, {y}, {z}}}")
    }
}

/// Image of a triangle under left multiplication of its slope vectors.
pub fn act(a: &Gl2Matrix, t: &FareyTriangle) -> Result<FareyTriangle> {
    let image = |s: &Slope| -> Result<Slope> {
        let x = s.a as i128;
        let y = s.b as i128;
        let top = a.alpha() as i128 * x + a.beta() as i128 * y;
        let bottom = a.gamma() as i128 * x + a.delta() as i128 * y;
        match (i64::try_from(top), i64::try_from(bottom)) {
            (Ok(top), Ok(bottom)) => Slope::new(top, bottom),
            _ => Err(Error::Overflow("matrix action")),
        }
    };
    let [x, y, z] = &t.0;
    FareyTriangle::new(image(x)?, image(y)?, image(z)?)
}

/// Number of edges on the path between `from` and `to` in the dual tree.
pub fn farey_distance(from: &FareyTriangle, to: &FareyTriangle) -> Result<u64> {
    let mut current = *from;
    let mut steps = 0;
    while current != *to {
        current = current.step_toward(to)?;
        steps += 1;
    }
    Ok(steps)
}

/// Closed form for a normalized matrix: 0 for `±H`, otherwise
/// `S(|beta| / |delta|) - 1`.
pub fn matrix_complexity(a: &Gl2Matrix) -> Result<u64> {
    if !a.is_normalized()? {
        return Err(Error::NotNormalized);
    }
    if a.is_plus_minus_h() {
        return Ok(0);
    }
    Ok(cf_sum(a.beta().abs(), a.delta().abs())? - 1)
}

/// The four distances `d(A t, t')` for `t, t'` in `{tau_-, tau_+}`, in the
/// order `(A tau_-, tau_-)`, `(A tau_-, tau_+)`, `(A tau_+, tau_-)`, `(A tau_+, tau_+)`.
pub fn complexity_distances(a: &Gl2Matrix) -> Result<[u64; 4]> {
    let minus = FareyTriangle::tau_minus();
    let plus = FareyTriangle::tau_plus();
    let a_minus = act(a, &minus)?;
    let a_plus = act(a, &plus)?;
    Ok([
        farey_distance(&a_minus, &minus)?,
        farey_distance(&a_minus, &plus)?,
        farey_distance(&a_plus, &minus)?,
        farey_distance(&a_plus, &plus)?,
    ])
}

/// Minimum of the four dual-tree distances, computed by walking the tree.
pub fn complexity_by_search(a: &Gl2Matrix) -> Result<u64> {
    Ok(complexity_distances(a)?.into_iter().min().expect("four distances"))
}
