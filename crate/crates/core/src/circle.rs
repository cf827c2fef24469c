//! Points on the circle, the extended complex plane, and the basic
//! Möbius-type maps the rest of the crate is built on.
//!
//! The circle is parametrized by angles in `[0, 2π)`. The Cayley transform
//! `z ↦ (z - i)/(z + i)` carries the real line (plus the point at infinity)
//! onto the unit circle; its inverse pulls circle points back to extended
//! reals. Proximity of extended-complex points is always measured with the
//! chordal metric, which treats infinity on the same footing as any finite
//! point.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Two extended-complex points closer than this (chordally) are treated as
/// coincident.
pub const DISTINCT_TOL: f64 = 1e-10;

/// A point of the Riemann sphere: a finite complex number or infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    pub fn real(x: f64) -> Self {
        ExtComplex::Finite(Complex64::new(x, 0.0))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    /// The finite value, if any.
    pub fn as_finite(&self) -> Option<Complex64> {
        match self {
            ExtComplex::Finite(z) => Some(*z),
            ExtComplex::Infinity => None,
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

impl From<f64> for ExtComplex {
    fn from(x: f64) -> Self {
        ExtComplex::real(x)
    }
}

/// Chordal distance on the Riemann sphere,
/// `d(z, w) = 2|z - w| / sqrt((1 + |z|²)(1 + |w|²))`,
/// extended continuously to infinity.
pub fn chordal_distance(z: &ExtComplex, w: &ExtComplex) -> f64 {
    match (z, w) {
        (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
        (ExtComplex::Finite(z), ExtComplex::Infinity)
        | (ExtComplex::Infinity, ExtComplex::Finite(z)) => {
            2.0 / (1.0 + z.norm_sqr()).sqrt()
        }
        (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
            2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()) * (1.0 + w.norm_sqr())).sqrt()
        }
    }
}

/// A point on the unit circle, stored as its angle in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirclePoint {
    angle: f64,
}

impl CirclePoint {
    pub fn new(angle: f64) -> Self {
        CirclePoint {
            angle: angle.rem_euclid(TAU),
        }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.angle)
    }

    pub fn to_ext(&self) -> ExtComplex {
        ExtComplex::Finite(self.to_complex())
    }
}

/// Cross-ratio `[z1 : z2 : z3 : z4] = (z1 - z3)(z2 - z4) / ((z2 - z3)(z1 - z4))`
/// on the extended plane. Infinity in any slot is handled by the usual
/// limit; four points with a coincident pair are rejected.
pub fn cross_ratio(
    z1: ExtComplex,
    z2: ExtComplex,
    z3: ExtComplex,
    z4: ExtComplex,
) -> Result<ExtComplex> {
    let pts = [z1, z2, z3, z4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            if chordal_distance(&pts[i], &pts[j]) < DISTINCT_TOL {
                return Err(Error::DegenerateConfiguration(format!(
                    "cross-ratio arguments {i} and {j} coincide"
                )));
            }
        }
    }

    // At most one argument is infinite (two would have been rejected as
    // coincident). An infinite point occurs in exactly one numerator factor
    // and one denominator factor, which cancel in the limit.
    use ExtComplex::{Finite, Infinity};
    let (num, den) = match (z1, z2, z3, z4) {
        (Infinity, Finite(b), Finite(c), Finite(d)) => (b - d, b - c),
        (Finite(a), Infinity, Finite(c), Finite(d)) => (a - c, a - d),
        (Finite(a), Finite(b), Infinity, Finite(d)) => (b - d, a - d),
        (Finite(a), Finite(b), Finite(c), Infinity) => (a - c, b - c),
        (Finite(a), Finite(b), Finite(c), Finite(d)) => ((a - c) * (b - d), (b - c) * (a - d)),
        _ => unreachable!("two infinite arguments are coincident"),
    };
    if den.norm() == 0.0 {
        return Ok(ExtComplex::Infinity);
    }
    Ok(ExtComplex::Finite(num / den))
}

/// Cayley transform `z ↦ (z - i)/(z + i)`, mapping the extended real line
/// onto the unit circle (and the upper half-plane into the disc).
pub fn cayley(z: ExtComplex) -> ExtComplex {
    let i = Complex64::new(0.0, 1.0);
    match z {
        ExtComplex::Infinity => ExtComplex::Finite(Complex64::new(1.0, 0.0)),
        ExtComplex::Finite(z) => {
            let den = z + i;
            if den.norm() == 0.0 {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite((z - i) / den)
            }
        }
    }
}

/// Inverse Cayley transform `w ↦ i(1 + w)/(1 - w)`.
pub fn cayley_inv(w: ExtComplex) -> ExtComplex {
    let i = Complex64::new(0.0, 1.0);
    match w {
        ExtComplex::Infinity => ExtComplex::Finite(Complex64::new(0.0, -1.0)),
        ExtComplex::Finite(w) => {
            let den = Complex64::new(1.0, 0.0) - w;
            if den.norm() == 0.0 {
                ExtComplex::Infinity
            } else {
                ExtComplex::Finite(i * (1.0 + w) / den)
            }
        }
    }
}

/// Angle coordinate of `x ∈ (0, 1)` on the circle: the Cayley image of `x`
/// written as `e^{iθ}` with `θ = 2 arctan x + π ∈ (π, 3π/2)`.
pub fn theta_of_x(x: f64) -> Result<CirclePoint> {
    if !(x > 0.0 && x < 1.0) || !x.is_finite() {
        return Err(Error::DomainError(format!(
            "theta_of_x requires x in (0, 1), got {x}"
        )));
    }
    Ok(CirclePoint::new(theta_angle(x)))
}

/// Unchecked angle map used internally where `x ∈ (0, 1)` is already known.
pub(crate) fn theta_angle(x: f64) -> f64 {
    2.0 * x.atan() + PI
}

/// Principal arccotangent with range `(0, π)`, continuous across `u = 0`.
pub fn arccot(u: f64) -> f64 {
    FRAC_PI_2 - u.atan()
}

/// Counterclockwise angular displacement from `b` to `a`:
/// `(a - b) mod 2π`, in `[0, 2π)`.
pub fn ominus(a: f64, b: f64) -> f64 {
    (a - b).rem_euclid(TAU)
}

/// A parabolic one-parameter family element acting on circle angles:
/// `n_t · φ = 2 arccot(cot(φ/2) - t)`, fixing the angle `0 ≡ 2π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NtElement {
    pub t: f64,
}

impl NtElement {
    pub fn new(t: f64) -> Self {
        NtElement { t }
    }

    /// Action on an angle in `(0, 2π)`. The fixed angle `0` maps to itself:
    /// `cot(φ/2)` diverges there and the composition through IEEE infinity
    /// returns `0` and `2π⁻` at the respective limits.
    pub fn apply_angle(&self, phi: f64) -> f64 {
        nt_angle_action(self.t, phi)
    }

    pub fn apply(&self, p: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.apply_angle(p.angle()))
    }

    /// Group law: `n_s ∘ n_t = n_{s+t}`.
    pub fn compose(&self, other: &NtElement) -> NtElement {
        NtElement {
            t: self.t + other.t,
        }
    }
}

/// Angle form of the `n_t` action, `φ ↦ 2 arccot(-t + cot(φ/2))`.
pub fn nt_angle_action(t: f64, phi: f64) -> f64 {
    2.0 * arccot(-t + 1.0 / (0.5 * phi).tan())
}
