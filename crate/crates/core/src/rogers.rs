//! The constant-orientation cocycle and its closed forms: the basic
//! integrals I₁–I₃, the closed flat integrand, and the resulting
//! single-integral formula for the Rogers dilogarithm — together with the
//! classical series reference used as the arbiter in every comparison.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};

/// ζ(2) = π²/6.
pub const ZETA2: f64 = PI * PI / 6.0;

// ---------------------------------------------------------------------------
// Reference dilogarithms.
// ---------------------------------------------------------------------------

/// Series-based Li₂ and Rogers L₂, independent of everything else in the
/// crate. Arguments are reduced to [0, 1/2] through the Euler reflection
/// `Li₂(x) + Li₂(1-x) = ζ(2) - log x · log(1-x)`, so the power series
/// converges geometrically; the tail after `series_terms` terms is bounded
/// by `x^{N+1}/((N+1)²(1-x))` and checked against `tail_tol`.
#[derive(Debug, Clone)]
pub struct ReferenceDilog {
    pub series_terms: usize,
    pub tail_tol: f64,
}

impl Default for ReferenceDilog {
    fn default() -> Self {
        ReferenceDilog {
            series_terms: 64,
            tail_tol: 1e-15,
        }
    }
}

impl ReferenceDilog {
    fn li2_series(&self, x: f64) -> f64 {
        debug_assert!((0.0..=0.5).contains(&x));
        let n = self.series_terms;
        let tail = x.powi(n as i32 + 1) / ((n as f64 + 1.0).powi(2) * (1.0 - x));
        assert!(
            tail <= self.tail_tol,
            "series tail {tail:.3e} exceeds tail_tol {:.3e}",
            self.tail_tol
        );
        let mut acc = 0.0;
        let mut pow = 1.0;
        for k in 1..=n {
            pow *= x;
            acc += pow / (k as f64 * k as f64);
        }
        acc
    }

    /// Euler dilogarithm on [0, 1].
    pub fn li2(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) || !x.is_finite() {
            return Err(Error::DomainError(format!("li2 needs x in [0,1], got {x}")));
        }
        if x == 0.0 {
            return Ok(0.0);
        }
        if x == 1.0 {
            return Ok(ZETA2);
        }
        if x <= 0.5 {
            Ok(self.li2_series(x))
        } else {
            Ok(ZETA2 - x.ln() * (1.0 - x).ln() - self.li2_series(1.0 - x))
        }
    }

    /// Rogers dilogarithm `L₂(x) = Li₂(x) + ½ log x log(1-x)` on (0,1).
    pub fn rogers(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::DomainError(format!(
                "rogers needs x in (0,1), got {x}"
            )));
        }
        Ok(self.li2(x)? + 0.5 * x.ln() * (1.0 - x).ln())
    }
}

/// [`ReferenceDilog::li2`] with default settings.
pub fn li2_reference(x: f64) -> Result<f64> {
    ReferenceDilog::default().li2(x)
}

/// [`ReferenceDilog::rogers`] with default settings.
pub fn rogers_reference(x: f64) -> Result<f64> {
    ReferenceDilog::default().rogers(x)
}

// ---------------------------------------------------------------------------
// The orientation cocycle and its closed-form integrals.
// ---------------------------------------------------------------------------

/// The constant 5-point cocycle: `scale` times the parity of the
/// permutation sorting the tuple into cyclic order. All closed forms below
/// are linear in `scale`.
#[derive(Debug, Clone, Copy)]
pub struct OrientationCocycle {
    pub scale: f64,
}

impl Default for OrientationCocycle {
    fn default() -> Self {
        OrientationCocycle {
            scale: -0.5 * ZETA2,
        }
    }
}

impl OrientationCocycle {
    pub fn with_scale(scale: f64) -> Self {
        OrientationCocycle { scale }
    }

    /// Value on a raw angle tuple; ties give 0.
    pub fn eval_angles(&self, angles: &[f64; 5]) -> f64 {
        let g = crate::config::AltFunction2::new(|_, _| 1.0);
        // sign · g(λ) with g ≡ 1 reduces to the bare permutation sign
        self.scale * crate::config::ext5_eval(&g, angles)
    }

    pub fn eval(&self, cfg: &Config) -> Result<f64> {
        Ok(self.scale * orientation_sign(cfg)? as f64)
    }

    /// Slot-1 circle average at four fixed, sorted angles:
    /// `scale/π · (θ0 - θ1 + θ2 - θ3 + π)`.
    pub fn i1(&self, t0: f64, t1: f64, t2: f64, t3: f64) -> Result<f64> {
        if !(0.0 <= t0 && t0 < t1 && t1 < t2 && t2 < t3 && t3 < TAU) {
            return Err(Error::DomainError(format!(
                "i1 needs 0 ≤ θ0 < θ1 < θ2 < θ3 < 2π, got ({t0}, {t1}, {t2}, {t3})"
            )));
        }
        Ok(self.scale / PI * (t0 - t1 + t2 - t3 + PI))
    }

    /// Weighted double average over the first two slots:
    /// `scale·i/π² · ((e^{iθ2}-1)(θ1-π) - (e^{iθ1}-1)(θ2-π) - π)`.
    pub fn i2(&self, t1: f64, t2: f64) -> Result<Complex64> {
        if !(0.0 < t1 && t1 < t2 && t2 < TAU) {
            return Err(Error::DomainError(format!(
                "i2 needs 0 < θ1 < θ2 < 2π, got ({t1}, {t2})"
            )));
        }
        let i = Complex64::new(0.0, 1.0);
        let e1 = Complex64::from_polar(1.0, t1);
        let e2 = Complex64::from_polar(1.0, t2);
        Ok(self.scale * i / (PI * PI)
            * ((e2 - 1.0) * (t1 - PI) - (e1 - 1.0) * (t2 - PI) - PI))
    }

    /// Weighted triple average with one free slot:
    /// `scale·i/π² · (2 sin θ + θ - π)`.
    pub fn i3(&self, t: f64) -> Result<Complex64> {
        if !(0.0 < t && t < TAU) {
            return Err(Error::DomainError(format!(
                "i3 needs 0 < θ < 2π, got {t}"
            )));
        }
        let i = Complex64::new(0.0, 1.0);
        Ok(self.scale * i / (PI * PI) * (2.0 * t.sin() + t - PI))
    }

    /// Closed form of the flat integrand of this cocycle on the ordered
    /// sector `0 < φ1 < φ2 < 2π`:
    /// `scale/(2π²)·((3φ1-2π)(cos φ2 - 1) - (3φ2-4π)(cos φ1 - 1))
    ///  - 3·scale/π²·(sin φ1 · ln(s12/s1) - sin φ2 · ln(s12/s2))`
    /// with `s12 = sin((φ2-φ1)/2)`, `sj = sin(φj/2)`.
    pub fn f_flat_closed(&self, p1: f64, p2: f64) -> Result<f64> {
        if !(0.0 < p1 && p1 < p2 && p2 < TAU) {
            return Err(Error::DomainError(format!(
                "f_flat_closed needs 0 < φ1 < φ2 < 2π, got ({p1}, {p2})"
            )));
        }
        let a = (3.0 * p1 - 2.0 * PI) * (p2.cos() - 1.0)
            - (3.0 * p2 - 4.0 * PI) * (p1.cos() - 1.0);
        let s12 = (0.5 * (p2 - p1)).sin();
        let s1 = (0.5 * p1).sin();
        let s2 = (0.5 * p2).sin();
        let b = p1.sin() * (s12 / s1).ln() - p2.sin() * (s12 / s2).ln();
        Ok(self.scale / (2.0 * PI * PI) * a - 3.0 * self.scale / (PI * PI) * b)
    }

    /// The alternative printed form of the same integrand (differing in the
    /// overall sign of the polynomial part and the log coefficient); kept
    /// for the comparison flag on the final formula.
    fn f_flat_intro(&self, p1: f64, p2: f64) -> Result<f64> {
        if !(0.0 < p1 && p1 < p2 && p2 < TAU) {
            return Err(Error::DomainError(format!(
                "f_flat_intro needs 0 < φ1 < φ2 < 2π, got ({p1}, {p2})"
            )));
        }
        let a = (3.0 * p1 - 2.0 * PI) * (p2.cos() - 1.0)
            - (3.0 * p2 - 4.0 * PI) * (p1.cos() - 1.0);
        let s12 = (0.5 * (p2 - p1)).sin();
        let s1 = (0.5 * p1).sin();
        let s2 = (0.5 * p2).sin();
        let b = p1.sin() * (s12 / s1).ln() - p2.sin() * (s12 / s2).ln();
        Ok(-self.scale / (2.0 * PI * PI) * a - 0.75 * self.scale / (PI * PI) * b)
    }
}

/// Parity (±1) of the permutation sorting a 5-point configuration into
/// cyclic order; well defined because cyclic rotations of five points are
/// even.
pub fn orientation_sign(cfg: &Config) -> Result<i32> {
    if cfg.k() != 5 {
        return Err(Error::InvalidInput(format!(
            "orientation_sign needs 5 points, got {}",
            cfg.k()
        )));
    }
    let (_, sign) = crate::config::sort_with_sign(&cfg.angles());
    debug_assert!(sign != 0, "distinct configuration cannot tie");
    Ok(sign)
}

/// Closed flat integrand of the default orientation cocycle.
pub fn f_flat_closed(p1: f64, p2: f64) -> Result<f64> {
    OrientationCocycle::default().f_flat_closed(p1, p2)
}

/// Slot-1 average of the default cocycle at sorted angles.
pub fn i1(t0: f64, t1: f64, t2: f64, t3: f64) -> Result<f64> {
    OrientationCocycle::default().i1(t0, t1, t2, t3)
}

/// Weighted double average of the default cocycle.
pub fn i2(t1: f64, t2: f64) -> Result<Complex64> {
    OrientationCocycle::default().i2(t1, t2)
}

/// Weighted triple average of the default cocycle.
pub fn i3(t: f64) -> Result<Complex64> {
    OrientationCocycle::default().i3(t)
}

// ---------------------------------------------------------------------------
// The single-integral formula for L₂.
// ---------------------------------------------------------------------------

/// Which printed form of the formula to evaluate. The two differ in the
/// arctangent term and the flat-integrand coefficients; `Body` is the one
/// that agrees with the series reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormulaVariant {
    Body,
    Intro,
}

impl std::str::FromStr for FormulaVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "body" => Ok(FormulaVariant::Body),
            "intro" => Ok(FormulaVariant::Intro),
            other => Err(Error::InvalidInput(format!(
                "unknown formula variant '{other}' (use body|intro)"
            ))),
        }
    }
}

/// `L₂(x)` through the closed-form cocycle primitives: the arctangent term
/// plus four pulled-back integrals of the flat integrand along parabolic
/// orbits. Everything inside is a closed form; only four smooth 1-D
/// integrals are evaluated numerically.
pub fn rogers_new_formula(x: f64, cfg: &QuadConfig) -> Result<f64> {
    rogers_new_formula_variant(x, FormulaVariant::Body, cfg)
}

/// [`rogers_new_formula`] with an explicit variant choice.
pub fn rogers_new_formula_variant(x: f64, variant: FormulaVariant, cfg: &QuadConfig) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::DomainError(format!(
            "formula needs x in (0,1), got {x}"
        )));
    }
    let coc = OrientationCocycle::default();
    let fb = |p1: f64, p2: f64| -> f64 {
        match variant {
            FormulaVariant::Body => coc.f_flat_closed(p1, p2).unwrap_or(f64::NAN),
            FormulaVariant::Intro => coc.f_flat_intro(p1, p2).unwrap_or(f64::NAN),
        }
    };

    // Σ sgn · ∫_0^T F(2 arccot(a - t), 2 arccot(-a - t)) dt over the four
    // parabolic segments; a > 0 keeps the arguments strictly ordered.
    let segments: [(f64, f64, f64); 4] = [
        ((1.0 - x) / (2.0 * x), -(x + 1.0) / (2.0 * x), -1.0),
        ((1.0 - x) / 2.0, (x + 1.0) / 2.0, 1.0),
        (0.5, 0.5, -1.0),
        (x / 2.0, x / 2.0, 1.0),
    ];
    let mut acc = 0.0;
    for &(a, t_end, sgn) in &segments {
        let integrand = |t: f64| {
            let p1 = 2.0 * crate::circle::arccot(a - t);
            let p2 = 2.0 * crate::circle::arccot(-a - t);
            fb(p1, p2)
        };
        let r = integrate(integrand, 0.0, t_end, cfg)?;
        acc += sgn * r.real();
    }

    let arctan = (2.0 * x).atan2(1.0 - x * x);
    let first = match variant {
        FormulaVariant::Body => ZETA2 / (2.0 * PI) * (arctan - 0.5 * PI),
        FormulaVariant::Intro => -ZETA2 / (2.0 * PI) * (arctan + 0.5 * PI),
    };
    Ok(0.5 * ZETA2 + first + acc)
}
