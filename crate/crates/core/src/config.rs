//! Configurations of circle points, their coordinates, and the
//! extension/restriction dictionary between alternating functions of one to
//! three real variables and alternating functions on tuples of circle
//! points.
//!
//! A `Config` is an ordered tuple of 3 to 6 pairwise-distinct points.
//! Cyclically oriented tuples carry coordinates: the first three points are
//! sent to (e^{i·3π/2}, 1, e^{iπ}) — the Cayley images of (1, ∞, 0) — and
//! the remaining points land at 𝒞(λ₁), …, 𝒞(λ_{k−3}) with
//! 0 < λ₁ < … < λ_{k−3} < 1. `ext` transports a function of the λ's to an
//! alternating function of arbitrary tuples by sorting into cyclic order
//! and signing with the permutation parity; `res` evaluates a tuple
//! function at the canonical position.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::circle::{chordal_distance, ominus, theta_angle, CirclePoint, DISTINCT_TOL};
use crate::error::{Error, Result};

/// Angles closer than this after sorting are treated as a tie; a tied tuple
/// has permutation sign 0 and every alternating quantity vanishes on it.
const TIE_TOL: f64 = 1e-13;

/// Functions on tuples of circle points, given by their angle lists.
pub type TupleFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

// ---------------------------------------------------------------------------
// Coordinates.
// ---------------------------------------------------------------------------

/// Coordinates of an oriented configuration modulo the Möbius action:
/// a strictly increasing tuple in (0,1) of dimension 1 to 3.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamPoint {
    coords: Vec<f64>,
}

impl ParamPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() || coords.len() > 3 {
            return Err(Error::InvalidInput(format!(
                "parameter point must have 1 to 3 coordinates, got {}",
                coords.len()
            )));
        }
        for w in coords.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidInput(format!(
                    "parameter coordinates must increase strictly, got {coords:?}"
                )));
            }
        }
        if !(coords[0] > 0.0 && coords[coords.len() - 1] < 1.0) {
            return Err(Error::InvalidInput(format!(
                "parameter coordinates must lie in (0,1), got {coords:?}"
            )));
        }
        Ok(ParamPoint { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

// ---------------------------------------------------------------------------
// Configurations.
// ---------------------------------------------------------------------------

/// An ordered tuple of k ∈ {3,…,6} pairwise-distinct circle points.
#[derive(Debug, Clone)]
pub struct Config {
    points: Vec<CirclePoint>,
}

impl Config {
    pub fn new(points: Vec<CirclePoint>) -> Result<Self> {
        if !(3..=6).contains(&points.len()) {
            return Err(Error::InvalidInput(format!(
                "configuration needs 3 to 6 points, got {}",
                points.len()
            )));
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                let d = chordal_distance(&points[i].to_ext(), &points[j].to_ext());
                if d < DISTINCT_TOL {
                    return Err(Error::DegenerateConfiguration(format!(
                        "points {i} and {j} coincide (chordal distance {d:.3e})"
                    )));
                }
            }
        }
        Ok(Config { points })
    }

    pub fn from_angles(angles: &[f64]) -> Result<Self> {
        Config::new(angles.iter().map(|&a| CirclePoint::new(a)).collect())
    }

    pub fn k(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[CirclePoint] {
        &self.points
    }

    pub fn angles(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.angle()).collect()
    }
}

// ---------------------------------------------------------------------------
// Alternating-function wrappers.
// ---------------------------------------------------------------------------

/// One-variable functions on (0,1); the alternation relation is
/// `f(x) = -f(1-x)`, enforced by [`AltFunction1::symmetrized`].
#[derive(Clone)]
pub struct AltFunction1 {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl AltFunction1 {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        AltFunction1 { f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        AltFunction1::new(|_| 0.0)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::DomainError(format!(
                "argument {x} outside (0,1)"
            )));
        }
        Ok((self.f)(x))
    }

    pub(crate) fn eval_raw(&self, x: f64) -> f64 {
        (self.f)(x)
    }

    /// Projection onto the alternating relation: `x ↦ (f(x) - f(1-x))/2`.
    pub fn symmetrized(&self) -> AltFunction1 {
        let f = self.f.clone();
        AltFunction1::new(move |x| 0.5 * (f(x) - f(1.0 - x)))
    }
}

/// Two-variable functions on 𝓟₂ = {0 < x < y < 1}; the relation identifies
/// `(x,y)` with its orbit under [`p2_image`], which has order five.
#[derive(Clone)]
pub struct AltFunction2 {
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl AltFunction2 {
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        AltFunction2 { f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        AltFunction2::new(|_, _| 0.0)
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        if !(0.0 < x && x < y && y < 1.0) {
            return Err(Error::DomainError(format!(
                "({x}, {y}) outside the ordered square 0 < x < y < 1"
            )));
        }
        Ok((self.f)(x, y))
    }

    pub(crate) fn eval_raw(&self, x: f64, y: f64) -> f64 {
        (self.f)(x, y)
    }

    /// Average over the order-five relation orbit, the projection onto
    /// relation-invariant functions.
    pub fn symmetrized(&self) -> AltFunction2 {
        let f = self.f.clone();
        AltFunction2::new(move |x, y| {
            let (mut u, mut v) = (x, y);
            let mut acc = 0.0;
            for _ in 0..5 {
                acc += f(u, v);
                let (nu, nv) = p2_image(u, v);
                u = nu;
                v = nv;
            }
            acc / 5.0
        })
    }
}

/// Three-variable functions on 𝓟₃ = {0 < x < y < z < 1}; the relation map
/// [`p3_image`] has order six and enters with alternating sign.
#[derive(Clone)]
pub struct AltFunction3 {
    f: Arc<dyn Fn(f64, f64, f64) -> f64 + Send + Sync>,
}

impl AltFunction3 {
    pub fn new(f: impl Fn(f64, f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        AltFunction3 { f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        AltFunction3::new(|_, _, _| 0.0)
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> Result<f64> {
        if !(0.0 < x && x < y && y < z && z < 1.0) {
            return Err(Error::DomainError(format!(
                "({x}, {y}, {z}) outside the ordered cube 0 < x < y < z < 1"
            )));
        }
        Ok((self.f)(x, y, z))
    }

    pub(crate) fn eval_raw(&self, x: f64, y: f64, z: f64) -> f64 {
        (self.f)(x, y, z)
    }

    /// Signed average over the order-six relation orbit.
    pub fn symmetrized(&self) -> AltFunction3 {
        let f = self.f.clone();
        AltFunction3::new(move |x, y, z| {
            let (mut u, mut v, mut w) = (x, y, z);
            let mut acc = 0.0;
            let mut sign = 1.0;
            for _ in 0..6 {
                acc += sign * f(u, v, w);
                let (nu, nv, nw) = p3_image(u, v, w);
                u = nu;
                v = nv;
                w = nw;
                sign = -sign;
            }
            acc / 6.0
        })
    }
}

/// Generator of the two-variable relation orbit:
/// `(x,y) ↦ (1-y, (1-y)/(1-x))`. Maps 𝓟₂ to itself and has order five.
pub fn p2_image(x: f64, y: f64) -> (f64, f64) {
    (1.0 - y, (1.0 - y) / (1.0 - x))
}

/// Generator of the three-variable relation orbit:
/// `(x,y,z) ↦ (1-z, (1-z)/(1-x), (1-z)/(1-y))`. Maps 𝓟₃ to itself and has
/// order six; functions satisfying the relation pick up a sign under it.
pub fn p3_image(x: f64, y: f64, z: f64) -> (f64, f64, f64) {
    (1.0 - z, (1.0 - z) / (1.0 - x), (1.0 - z) / (1.0 - y))
}

// ---------------------------------------------------------------------------
// Sorting into cyclic order.
// ---------------------------------------------------------------------------

/// Sort `angles` ascending and return the sorted values together with the
/// parity of the sorting permutation (+1 even, -1 odd, 0 if two angles tie
/// within [`TIE_TOL`]). Parity is computed by cycle decomposition.
pub(crate) fn sort_with_sign(angles: &[f64]) -> (Vec<f64>, i32) {
    let k = angles.len();
    let mut idx: Vec<usize> = (0..k).collect();
    idx.sort_by(|&i, &j| angles[i].partial_cmp(&angles[j]).unwrap());
    let sorted: Vec<f64> = idx.iter().map(|&i| angles[i]).collect();
    for w in sorted.windows(2) {
        if w[1] - w[0] < TIE_TOL {
            return (sorted, 0);
        }
    }
    let mut visited = vec![false; k];
    let mut transpositions = 0usize;
    for start in 0..k {
        if visited[start] {
            continue;
        }
        let mut len = 0usize;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = idx[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    let sign = if transpositions % 2 == 0 { 1 } else { -1 };
    (sorted, sign)
}

/// λ-coordinates of the points in their given slot order, via the sine
/// quotient `λ_j = s(θ₂,θ₁) s(θ₃,θ_{j+3}) / (s(θ₃,θ₁) s(θ₂,θ_{j+3}))` with
/// `s(u,v) = sin((u-v)/2)`. This is the cross-ratio that places the first
/// three points at the Cayley images of (1, ∞, 0); it is independent of the
/// chosen angle representatives.
pub(crate) fn lambdas_of_angles(angles: &[f64]) -> Vec<f64> {
    let s = |u: f64, v: f64| (0.5 * (u - v)).sin();
    let pref = s(angles[1], angles[0]) / s(angles[2], angles[0]);
    (3..angles.len())
        .map(|j| pref * s(angles[2], angles[j]) / s(angles[1], angles[j]))
        .collect()
}

fn lambda2_of_sorted(a: &[f64; 5]) -> (f64, f64) {
    let s = |u: f64, v: f64| (0.5 * (u - v)).sin();
    let pref = s(a[1], a[0]) / s(a[2], a[0]);
    (
        pref * s(a[2], a[3]) / s(a[1], a[3]),
        pref * s(a[2], a[4]) / s(a[1], a[4]),
    )
}

/// Whether the tuple winds counterclockwise in its slot order: starting
/// from the first point, the displacements `θ_j ⊖ θ_1` increase strictly.
/// For k ≥ 4 the test is expressed through the coordinates, which must be
/// strictly increasing inside (0,1).
pub fn is_cyclically_oriented(cfg: &Config) -> bool {
    let a = cfg.angles();
    let first_three = {
        let d2 = ominus(a[1], a[0]);
        let d3 = ominus(a[2], a[0]);
        d2 > 0.0 && d3 > d2
    };
    if cfg.k() == 3 {
        return first_three;
    }
    if !first_three {
        return false;
    }
    let lams = lambdas_of_angles(&a);
    let mut prev = 0.0;
    for &l in &lams {
        if !(l > prev && l < 1.0) {
            return false;
        }
        prev = l;
    }
    true
}

/// Coordinates of a cyclically oriented configuration with k ≥ 4.
pub fn lambda_coords(cfg: &Config) -> Result<ParamPoint> {
    if cfg.k() < 4 {
        return Err(Error::InvalidInput(
            "coordinates need at least 4 points".into(),
        ));
    }
    if !is_cyclically_oriented(cfg) {
        return Err(Error::DomainError(
            "coordinates are defined for cyclically oriented tuples only".into(),
        ));
    }
    ParamPoint::new(lambdas_of_angles(&cfg.angles()))
}

/// The canonical representative of a parameter point: the configuration
/// with angles `(3π/2, 0, π, θ(λ₁), …)`, i.e. points
/// `(-i, 1, -1, 𝒞(λ₁), …)`.
pub fn canonical_config(p: &ParamPoint) -> Result<Config> {
    let mut angles = vec![1.5 * PI, 0.0, PI];
    angles.extend(p.coords().iter().map(|&l| theta_angle(l)));
    Config::from_angles(&angles)
}

// ---------------------------------------------------------------------------
// Extension and restriction.
// ---------------------------------------------------------------------------

/// Stack-allocated core of `ext₅`: sort the five angles, sign with the
/// permutation parity, evaluate at the coordinates of the sorted tuple.
/// Ties give 0. This is the inner loop of every cocycle quadrature, so it
/// avoids heap traffic.
pub(crate) fn ext5_eval(g: &AltFunction2, angles: &[f64; 5]) -> f64 {
    let mut idx = [0usize, 1, 2, 3, 4];
    // insertion sort of the index array by angle
    for i in 1..5 {
        let mut j = i;
        while j > 0 && angles[idx[j - 1]] > angles[idx[j]] {
            idx.swap(j - 1, j);
            j -= 1;
        }
    }
    let sorted = [
        angles[idx[0]],
        angles[idx[1]],
        angles[idx[2]],
        angles[idx[3]],
        angles[idx[4]],
    ];
    for w in 0..4 {
        if sorted[w + 1] - sorted[w] < TIE_TOL {
            return 0.0;
        }
    }
    let mut visited = [false; 5];
    let mut transpositions = 0usize;
    for start in 0..5 {
        if visited[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !visited[i] {
            visited[i] = true;
            i = idx[i];
            len += 1;
        }
        transpositions += len - 1;
    }
    let sign = if transpositions % 2 == 0 { 1.0 } else { -1.0 };
    let (l1, l2) = lambda2_of_sorted(&sorted);
    sign * g.eval_raw(l1, l2)
}

pub(crate) fn ext4_angles(f: &AltFunction1, angles: &[f64]) -> f64 {
    debug_assert_eq!(angles.len(), 4);
    let (sorted, sign) = sort_with_sign(angles);
    if sign == 0 {
        return 0.0;
    }
    let lam = lambdas_of_angles(&sorted)[0];
    sign as f64 * f.eval_raw(lam)
}

pub(crate) fn ext5_angles(g: &AltFunction2, angles: &[f64]) -> f64 {
    debug_assert_eq!(angles.len(), 5);
    let arr = [angles[0], angles[1], angles[2], angles[3], angles[4]];
    ext5_eval(g, &arr)
}

/// Alternating extension of a one-variable function to 4-point
/// configurations.
pub fn ext4(f: &AltFunction1, cfg: &Config) -> Result<f64> {
    if cfg.k() != 4 {
        return Err(Error::InvalidInput(format!(
            "ext4 needs a 4-point configuration, got k = {}",
            cfg.k()
        )));
    }
    Ok(ext4_angles(f, &cfg.angles()))
}

/// Alternating extension of a two-variable function to 5-point
/// configurations.
pub fn ext5(g: &AltFunction2, cfg: &Config) -> Result<f64> {
    if cfg.k() != 5 {
        return Err(Error::InvalidInput(format!(
            "ext5 needs a 5-point configuration, got k = {}",
            cfg.k()
        )));
    }
    Ok(ext5_angles(g, &cfg.angles()))
}

/// [`ext4`] packaged as a tuple function, for composition with the
/// simplicial differential.
pub fn ext4_tuple(f: &AltFunction1) -> TupleFn {
    let f = f.clone();
    Arc::new(move |angles: &[f64]| ext4_angles(&f, angles))
}

/// [`ext5`] packaged as a tuple function.
pub fn ext5_tuple(g: &AltFunction2) -> TupleFn {
    let g = g.clone();
    Arc::new(move |angles: &[f64]| ext5_angles(&g, angles))
}

/// Restriction of a 4-point function to the canonical position.
pub fn res4(c: &TupleFn) -> AltFunction1 {
    let c = c.clone();
    AltFunction1::new(move |x| c(&[1.5 * PI, 0.0, PI, theta_angle(x)]))
}

/// Restriction of a 5-point function to the canonical position.
pub fn res5(c: &TupleFn) -> AltFunction2 {
    let c = c.clone();
    AltFunction2::new(move |x, y| c(&[1.5 * PI, 0.0, PI, theta_angle(x), theta_angle(y)]))
}

/// Restriction of a 6-point function to the canonical position.
pub fn res6(c: &TupleFn) -> AltFunction3 {
    let c = c.clone();
    AltFunction3::new(move |x, y, z| {
        c(&[
            1.5 * PI,
            0.0,
            PI,
            theta_angle(x),
            theta_angle(y),
            theta_angle(z),
        ])
    })
}
