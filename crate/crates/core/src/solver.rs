//! The constructive solution pipeline for the perturbed five-term system.
//!
//! Starting from a bounded alternating 5-point cocycle `c`, the chain is
//!
//! 1. `r_c(φ)`: an outer 1-D integral of a triple circle average against
//!    the weight `1/(1-cos ζ)`, anchored at `ζ = π`;
//! 2. `v_flat(θ1,θ2) = Im(e^{iθ1} r_c(θ2 ⊖ θ1))`;
//! 3. `f_flat`: a weighted double average plus three `v_flat` corrections —
//!    the "flat integrand" on the ordered sector Ω⁺;
//! 4. `f0`: the flat integrand pulled back along a parabolic orbit and
//!    integrated in the orbit parameter;
//! 5. `primitive_p`: a circle average plus four `f0` terms — a bounded
//!    primitive of `c` under the simplicial differential;
//! 6. `solve_lrc`: the explicit solution of the perturbed system, a
//!    specialization of the primitive to one free circle point.
//!
//! The expensive object is the outer integral of step 1. A
//! [`CocyclePipeline`] therefore tabulates it once on a fixed panel mesh,
//! geometrically refined toward the `1/(1-cos)` poles at 0 and 2π, and
//! reuses the table for every downstream evaluation. Fixed Gauss rules
//! handle the inner averages, with cells split along the discontinuity
//! locus of the cocycle's sorting sign.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circle::{arccot, CirclePoint};
pub use crate::circle::ominus;
use crate::config::{ext5_eval, AltFunction2, Config};
use crate::error::{Error, Result};
use crate::operators::{p2_margin_grid, p3_margin_grid, six_term_lhs};
use crate::quad::{gl_nodes, integrate, GlNode, QuadConfig};

// ---------------------------------------------------------------------------
// Cocycles.
// ---------------------------------------------------------------------------

/// A bounded alternating function of five circle points, given through its
/// values on angle tuples. Alternation and invariance are properties of the
/// supplied evaluator, spot-checked by tests rather than enforced per call.
#[derive(Clone)]
pub struct Cocycle5 {
    eval: Arc<dyn Fn(&[f64; 5]) -> f64 + Send + Sync>,
    sup_norm: Option<f64>,
}

impl Cocycle5 {
    pub fn new(
        eval: impl Fn(&[f64; 5]) -> f64 + Send + Sync + 'static,
        sup_norm: Option<f64>,
    ) -> Self {
        Cocycle5 {
            eval: Arc::new(eval),
            sup_norm,
        }
    }

    pub fn zero() -> Self {
        Cocycle5::new(|_| 0.0, Some(0.0))
    }

    /// The constant cocycle: `scale` times the cyclic-sorting parity.
    pub fn orientation(scale: f64) -> Self {
        let g = AltFunction2::new(|_, _| 1.0);
        Cocycle5::new(
            move |angles| scale * ext5_eval(&g, angles),
            Some(scale.abs()),
        )
    }

    /// Alternating extension of a relation-invariant two-variable function;
    /// the sup-norm metadata is estimated on a margin grid (the extension
    /// takes exactly the values ±g(λ)).
    pub fn from_invariant(g: &AltFunction2) -> Self {
        let sup = p2_margin_grid(40, 1e-3)
            .into_iter()
            .map(|(x, y)| g.eval_raw(x, y).abs())
            .fold(0.0, f64::max);
        let g = g.clone();
        Cocycle5::new(move |angles| ext5_eval(&g, angles), Some(sup))
    }

    pub fn eval_angles(&self, angles: &[f64; 5]) -> f64 {
        (self.eval)(angles)
    }

    pub fn eval(&self, cfg: &Config) -> Result<f64> {
        if cfg.k() != 5 {
            return Err(Error::InvalidInput(format!(
                "cocycle evaluation needs 5 points, got {}",
                cfg.k()
            )));
        }
        let a = cfg.angles();
        Ok((self.eval)(&[a[0], a[1], a[2], a[3], a[4]]))
    }

    /// Sup-norm bound, when one is known.
    pub fn sup_norm(&self) -> Option<f64> {
        self.sup_norm
    }
}

// ---------------------------------------------------------------------------
// Fixed-rule building blocks shared by the averages.
// ---------------------------------------------------------------------------

/// Gauss points of one axis segment.
fn segment_nodes(a: f64, b: f64, rule: &[GlNode]) -> Vec<(f64, f64)> {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    rule.iter()
        .map(|g| (mid + half * g.x, half * g.w))
        .collect()
}

/// Nodes and weights for one triangle of the square `[a,b]²` split along
/// its diagonal, via the collapsed (Duffy) map that keeps Gauss accuracy
/// for integrands that are smooth up to the diagonal. `upper` selects the
/// triangle `E < P`; `(E, P, w)` triples are appended to `out`.
fn duffy_triangle(a: f64, b: f64, rule: &[GlNode], upper: bool, out: &mut Vec<(f64, f64, f64)>) {
    let h = b - a;
    for gv in rule {
        let v = 0.5 * (gv.x + 1.0);
        let wv = 0.5 * gv.w;
        let outer = a + h * v;
        for gu in rule {
            let u = 0.5 * (gu.x + 1.0);
            let wu = 0.5 * gu.w;
            let inner = a + h * v * u;
            let w = wv * wu * h * h * v;
            if upper {
                out.push((inner, outer, w));
            } else {
                out.push((outer, inner, w));
            }
        }
    }
}

/// Split every interval of a sorted breakpoint list into equal panels no
/// longer than `cap`, then halve each interval's end panels `grade` times:
/// geometric refinement toward the breakpoints, which is where the sorted
/// cocycle's sharpest features sit.
fn refine_breakpoints(bps: &[f64], cap: f64, grade: u32) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(bps.len());
    for w in bps.windows(2) {
        let (a, b) = (w[0], w[1]);
        let len = b - a;
        out.push(a);
        if len < 1e-13 {
            continue;
        }
        let n = if len > cap {
            (len / cap).ceil() as usize
        } else {
            1
        };
        let step = len / n as f64;
        let mut g: Vec<f64> = Vec::with_capacity(n + 2 * grade as usize);
        let mut d = step;
        for _ in 0..grade {
            d *= 0.5;
            g.push(a + d);
        }
        for k in 1..n {
            g.push(a + step * k as f64);
        }
        d = step;
        for _ in 0..grade {
            d *= 0.5;
            g.push(b - d);
        }
        g.sort_by(|x, y| x.partial_cmp(y).unwrap());
        g.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
        out.extend(g);
    }
    out.push(*bps.last().expect("non-empty breakpoint list"));
    out
}

/// All 2-D nodes for a breakpoint-aligned partition of `[0,2π]²`: tensor
/// cells off the diagonal blocks, Duffy pairs on them.
fn plane_cells(breakpoints: &[f64], rule: &[GlNode]) -> Vec<(f64, f64, f64)> {
    let m = breakpoints.len() - 1;
    let mut out = Vec::with_capacity(m * m * rule.len() * rule.len() * 2);
    for i in 0..m {
        for j in 0..m {
            let (a1, b1) = (breakpoints[i], breakpoints[i + 1]);
            let (a2, b2) = (breakpoints[j], breakpoints[j + 1]);
            if i == j {
                duffy_triangle(a1, b1, rule, true, &mut out);
                duffy_triangle(a1, b1, rule, false, &mut out);
            } else {
                for (e, we) in segment_nodes(a1, b1, rule) {
                    for (p, wp) in segment_nodes(a2, b2, rule) {
                        out.push((e, p, we * wp));
                    }
                }
            }
        }
    }
    out
}

/// Circle average of `c` in its first slot with the other four angles
/// fixed, by Gauss rules on the arcs cut out by the fixed angles (the
/// integrand is smooth on each arc; the sorting sign only changes at the
/// fixed angles). Arcs longer than `panel_cap` are paneled.
fn favg_slot1(c: &Cocycle5, fixed: &[f64; 4], rule: &[GlNode], panel_cap: f64) -> f64 {
    let mut bps = vec![0.0, TAU];
    bps.extend(fixed.iter().map(|&t| t.rem_euclid(TAU)));
    bps.sort_by(|x, y| x.partial_cmp(y).unwrap());
    bps.dedup_by(|x, y| (*x - *y).abs() < 1e-13);
    let bps = refine_breakpoints(&bps, panel_cap, avg_grade(panel_cap));
    let mut acc = 0.0;
    for w in bps.windows(2) {
        if w[1] - w[0] < 1e-13 {
            continue;
        }
        for (psi, wt) in segment_nodes(w[0], w[1], rule) {
            acc += wt * c.eval_angles(&[psi, fixed[0], fixed[1], fixed[2], fixed[3]]);
        }
    }
    acc / TAU
}

/// The inner triple-average integrand of the outer `r_c` integral:
/// `J(ζ) = ⨍⨍⨍ sin(η-φ) c(η, φ, ψ, 0, ζ)`, all three averages normalized.
/// The ψ average is exact-breakpoint Gauss (arcs at {η, φ, ζ}); the (η,φ)
/// plane uses diagonal-split cells at breakpoints {0, ζ, 2π}. Both the
/// plane intervals and the ψ arcs are paneled to their caps.
#[allow(clippy::too_many_arguments)]
fn j_of_zeta(
    c: &Cocycle5,
    zeta: f64,
    rule2: &[GlNode],
    rule_psi: &[GlNode],
    plane_cap: f64,
    plane_grade: u32,
    psi_cap: f64,
    psi_grade: u32,
) -> f64 {
    let bps = refine_breakpoints(&[0.0, zeta, TAU], plane_cap, plane_grade);
    let mut acc = 0.0;
    for (e, p, w) in plane_cells(&bps, rule2) {
        // exact arc partition for the ψ slot
        let mut m = [e, p, zeta];
        m.sort_by(|x, y| x.partial_cmp(y).unwrap());
        let arcs = refine_breakpoints(&[0.0, m[0], m[1], m[2], TAU], psi_cap, psi_grade);
        let mut inner = 0.0;
        for a in arcs.windows(2) {
            if a[1] - a[0] < 1e-13 {
                continue;
            }
            for (psi, wt) in segment_nodes(a[0], a[1], rule_psi) {
                inner += wt * c.eval_angles(&[e, p, psi, 0.0, zeta]);
            }
        }
        acc += w * (e - p).sin() * inner / TAU;
    }
    acc / (TAU * TAU)
}

/// The weighted double average entering the flat integrand:
/// `⨍⨍ sin(φ) c(η, φ, 0, φ1, φ2)` over `(η, φ)`, with cells split at
/// {0, φ1, φ2, 2π} and along the diagonal, then paneled to `panel_cap`.
fn flat_double_average(c: &Cocycle5, p1: f64, p2: f64, rule: &[GlNode], panel_cap: f64) -> f64 {
    debug_assert!(0.0 < p1 && p1 < p2 && p2 < TAU);
    let bps = refine_breakpoints(&[0.0, p1, p2, TAU], panel_cap, avg_grade(panel_cap));
    let mut acc = 0.0;
    for (e, p, w) in plane_cells(&bps, rule) {
        acc += w * p.sin() * c.eval_angles(&[e, p, 0.0, p1, p2]);
    }
    acc / (TAU * TAU)
}

// ---------------------------------------------------------------------------
// The tabulated outer integral.
// ---------------------------------------------------------------------------

const TABLE_RULE: usize = 12;
const TABLE_RULE2: usize = 10;
const TABLE_RULE_PSI: usize = 8;
/// Innermost mesh spacing next to the 1/(1-cos) poles at 0 and 2π.
const TABLE_EPS: f64 = 1e-8;
/// End-grading depth of the paneled circle and plane averages; applied
/// only when a finite panel cap asks for refinement at all.
const AVG_GRADE: u32 = 3;

fn avg_grade(cap: f64) -> u32 {
    if cap.is_finite() {
        AVG_GRADE
    } else {
        0
    }
}

struct Panel {
    a: f64,
    b: f64,
    /// `J` sampled at the Gauss nodes of this panel.
    j: Vec<f64>,
    /// `∫_a^b J(ζ)/(1-cos ζ) dζ` by the same rule.
    integral: f64,
}

/// `W(φ) = ∫_π^φ J(ζ)/(1-cos ζ) dζ` on a pole-graded panel mesh, with the
/// `J` samples kept for interpolation so partial panels need no new cocycle
/// evaluations.
pub struct RcTable {
    boundaries: Vec<f64>,
    panels: Vec<Panel>,
    /// `W` at the panel boundaries, anchored to 0 at π.
    cum: Vec<f64>,
    /// Barycentric weights of the Gauss reference nodes.
    bary: Vec<f64>,
}

fn table_mesh() -> Vec<f64> {
    let mut pts = vec![PI];
    let mut v = PI;
    while v > TABLE_EPS {
        v *= 0.5;
        pts.push(v);
    }
    let mut gap = PI;
    while gap > TABLE_EPS {
        gap *= 0.5;
        pts.push(TAU - gap);
    }
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts
}

/// Inner-rule settings for one tabulated `J` node at pole distance `dist`.
///
/// A finite requested cap buys full end-graded paneling on the panels the
/// solve path actually reads (`dist ≥ π/16`, i.e. solves with `x` away from
/// the ends of `(0,1)`); the pole-adjacent panels fall back to progressively
/// lighter rules, so extreme arguments lose accuracy gradually instead of
/// multiplying the tabulation cost. An infinite cap keeps one uniform rule
/// everywhere.
fn j_node_config(dist: f64, cap: f64, grade: u32) -> (f64, u32) {
    if !cap.is_finite() || dist >= PI / 16.0 {
        (cap, grade)
    } else if dist >= PI / 64.0 {
        (1.0, 3)
    } else if dist >= PI / 256.0 {
        (f64::INFINITY, 2)
    } else {
        (f64::INFINITY, 1)
    }
}

impl RcTable {
    pub fn build(c: &Cocycle5) -> RcTable {
        RcTable::build_with(c, TABLE_RULE2, TABLE_RULE_PSI, f64::INFINITY, 0)
    }

    pub(crate) fn build_with(
        c: &Cocycle5,
        rule2_n: usize,
        rule_psi_n: usize,
        cap: f64,
        grade: u32,
    ) -> RcTable {
        let boundaries = table_mesh();
        let rule = gl_nodes(TABLE_RULE);
        let rule2 = gl_nodes(rule2_n);
        let rule_psi = gl_nodes(rule_psi_n);

        let panels: Vec<Panel> = boundaries
            .par_windows(2)
            .map(|w| {
                let (a, b) = (w[0], w[1]);
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                let mut j = Vec::with_capacity(rule.len());
                let mut integral = 0.0;
                for g in rule {
                    let z = mid + half * g.x;
                    let (cz, gz) = j_node_config(z.min(TAU - z), cap, grade);
                    let jv = j_of_zeta(c, z, rule2, rule_psi, cz, gz, cz, gz);
                    integral += half * g.w * jv / (1.0 - z.cos());
                    j.push(jv);
                }
                Panel { a, b, j, integral }
            })
            .collect();

        // anchor the cumulative integral at the boundary equal to π
        let ipi = boundaries
            .iter()
            .position(|&b| b == PI)
            .expect("mesh contains pi");
        let mut cum = vec![0.0; boundaries.len()];
        for k in ipi..panels.len() {
            cum[k + 1] = cum[k] + panels[k].integral;
        }
        for k in (0..ipi).rev() {
            cum[k] = cum[k + 1] - panels[k].integral;
        }

        let mut bary = vec![1.0; rule.len()];
        for i in 0..rule.len() {
            for jn in 0..rule.len() {
                if i != jn {
                    bary[i] /= rule[i].x - rule[jn].x;
                }
            }
        }

        RcTable {
            boundaries,
            panels,
            cum,
            bary,
        }
    }

    fn j_interp(&self, k: usize, z: f64) -> f64 {
        let rule = gl_nodes(TABLE_RULE);
        let p = &self.panels[k];
        let t = (2.0 * z - (p.a + p.b)) / (p.b - p.a);
        let mut num = 0.0;
        let mut den = 0.0;
        for (i, g) in rule.iter().enumerate() {
            let d = t - g.x;
            if d.abs() < 1e-14 {
                return p.j[i];
            }
            let q = self.bary[i] / d;
            num += q * p.j[i];
            den += q;
        }
        num / den
    }

    /// Cumulative weighted integral from π, clamped to the mesh range
    /// (the values there are the finite limits of everything downstream).
    pub fn w(&self, phi: f64) -> f64 {
        let lo = self.boundaries[0];
        let hi = self.boundaries[self.boundaries.len() - 1];
        let phi = phi.clamp(lo, hi);
        let k = match self
            .boundaries
            .binary_search_by(|b| b.partial_cmp(&phi).unwrap())
        {
            Ok(i) => i.min(self.panels.len() - 1),
            Err(i) => i - 1,
        };
        let k = k.min(self.panels.len() - 1);
        let a = self.boundaries[k];
        let rule = gl_nodes(TABLE_RULE);
        let mut partial = 0.0;
        for (z, wt) in segment_nodes(a, phi, rule) {
            partial += wt * self.j_interp(k, z) / (1.0 - z.cos());
        }
        self.cum[k] + partial
    }

    /// `r(φ) = -½ (1-e^{iφ}) W(φ)`.
    pub fn r(&self, phi: f64) -> Complex64 {
        let w = self.w(phi);
        -0.5 * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, phi)) * w
    }
}

// ---------------------------------------------------------------------------
// Flat integrand and the orbit coordinates.
// ---------------------------------------------------------------------------

/// A function on the ordered sector Ω⁺ = {0 < φ1 < φ2 < 2π}, extended to
/// swapped arguments antisymmetrically (the extension the orbit pull-back
/// needs; it changes nothing on Ω⁺).
#[derive(Clone)]
pub struct FlatIntegrand {
    f: Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>,
}

impl FlatIntegrand {
    /// Wrap an evaluator defined for `φ1 < φ2`.
    pub fn new(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        FlatIntegrand { f: Arc::new(f) }
    }

    pub fn constant(v: f64) -> Self {
        FlatIntegrand::new(move |_, _| v)
    }

    pub fn eval(&self, p1: f64, p2: f64) -> f64 {
        if p1 == p2 {
            0.0
        } else if p1 < p2 {
            (self.f)(p1, p2)
        } else {
            -(self.f)(p2, p1)
        }
    }
}

/// Orbit coordinates of a point of Ω under the parabolic flow: the time
/// `T = -½(cot(φ1/2) + cot(φ2/2))` to the anti-diagonal and the crossing
/// angle `Φ = 2 arccot(½(cot(φ1/2) - cot(φ2/2)))`.
pub fn t_phi(p1: f64, p2: f64) -> Result<(f64, f64)> {
    if !(0.0 < p1 && p1 < TAU && 0.0 < p2 && p2 < TAU) {
        return Err(Error::DomainError(format!(
            "t_phi needs angles in (0, 2π), got ({p1}, {p2})"
        )));
    }
    let c1 = 1.0 / (0.5 * p1).tan();
    let c2 = 1.0 / (0.5 * p2).tan();
    Ok((-0.5 * (c1 + c2), 2.0 * arccot(0.5 * (c1 - c2))))
}

/// Integral of a flat integrand along the parabolic orbit through
/// `(φ1, φ2)`, from the anti-diagonal crossing to the point itself:
/// oriented, so `T < 0` is allowed.
pub fn f0(fb: &FlatIntegrand, p1: f64, p2: f64, cfg: &QuadConfig) -> Result<f64> {
    let (t_end, phi) = t_phi(p1, p2)?;
    if t_end.abs() < 1e-15 {
        return Ok(0.0);
    }
    let u = 1.0 / (0.5 * phi).tan();
    let fb = fb.clone();
    let r = integrate(
        move |t| fb.eval(2.0 * arccot(u - t), 2.0 * arccot(-u - t)),
        0.0,
        t_end,
        cfg,
    )?;
    Ok(r.real())
}

// ---------------------------------------------------------------------------
// Pipeline: a cocycle with its table.
// ---------------------------------------------------------------------------

/// A cocycle bundled with its tabulated outer integral and quadrature
/// settings; construction is expensive (the table), everything after is
/// cheap and shareable across threads.
#[derive(Clone)]
pub struct CocyclePipeline {
    c: Cocycle5,
    table: Arc<RcTable>,
    quad: QuadConfig,
}

impl CocyclePipeline {
    pub fn new(c: Cocycle5, quad: QuadConfig) -> Self {
        let table = Arc::new(RcTable::build_with(
            &c,
            TABLE_RULE2,
            TABLE_RULE_PSI,
            quad.table_cap,
            quad.table_grade,
        ));
        CocyclePipeline { c, table, quad }
    }

    pub fn cocycle(&self) -> &Cocycle5 {
        &self.c
    }

    pub fn table(&self) -> &RcTable {
        &self.table
    }

    pub fn r_c(&self, phi: f64) -> Result<Complex64> {
        if !(0.0 < phi && phi < TAU) {
            return Err(Error::DomainError(format!(
                "r_c needs φ in (0, 2π), got {phi}"
            )));
        }
        Ok(self.table.r(phi))
    }

    /// Circle average of the cocycle in its first slot, the other four
    /// angles held fixed.
    pub fn slot_average(&self, fixed: &[f64; 4]) -> f64 {
        favg_slot1(&self.c, fixed, gl_nodes(TABLE_RULE), self.quad.panel_cap)
    }

    /// `v♭(θ1, θ2) = Im(e^{iθ1} r(θ2 ⊖ θ1))`.
    pub fn v_flat(&self, t1: f64, t2: f64) -> Result<f64> {
        let d = ominus(t2, t1);
        if d == 0.0 {
            return Err(Error::DomainError(
                "v_flat needs distinct angles".into(),
            ));
        }
        Ok((Complex64::from_polar(1.0, t1) * self.table.r(d)).im)
    }

    /// The flat integrand on Ω⁺: weighted double average plus the three
    /// `v♭` corrections.
    pub fn f_flat(&self, p1: f64, p2: f64) -> Result<f64> {
        if !(0.0 < p1 && p1 < p2 && p2 < TAU) {
            return Err(Error::DomainError(format!(
                "f_flat needs 0 < φ1 < φ2 < 2π, got ({p1}, {p2})"
            )));
        }
        let avg =
            flat_double_average(&self.c, p1, p2, gl_nodes(TABLE_RULE2), self.quad.panel_cap);
        Ok(avg + self.v_flat(p1, p2)? - self.v_flat(0.0, p2)? + self.v_flat(0.0, p1)?)
    }

    /// The flat integrand packaged for orbit pull-backs.
    pub fn flat_integrand(&self) -> FlatIntegrand {
        let me = self.clone();
        FlatIntegrand::new(move |p1, p2| me.f_flat(p1, p2).unwrap_or(f64::NAN))
    }

    pub fn f0(&self, p1: f64, p2: f64) -> Result<f64> {
        f0(&self.flat_integrand(), p1, p2, &self.quad)
    }

    /// The bounded primitive at four circle points: slot-1 average plus
    /// four orbit integrals of the flat integrand at pairwise angle
    /// differences.
    pub fn primitive_p(&self, pts: &[CirclePoint; 4]) -> Result<f64> {
        let t = [pts[0].angle(), pts[1].angle(), pts[2].angle(), pts[3].angle()];
        let fb = self.flat_integrand();
        let avg = favg_slot1(&self.c, &t, gl_nodes(TABLE_RULE), self.quad.panel_cap);
        let q = &self.quad;
        Ok(avg + f0(&fb, ominus(t[2], t[1]), ominus(t[3], t[1]), q)?
            - f0(&fb, ominus(t[2], t[0]), ominus(t[3], t[0]), q)?
            + f0(&fb, ominus(t[1], t[0]), ominus(t[3], t[0]), q)?
            - f0(&fb, ominus(t[1], t[0]), ominus(t[2], t[0]), q)?)
    }
}

// ---------------------------------------------------------------------------
// One-shot operations (no precomputed table).
// ---------------------------------------------------------------------------

/// Direct evaluation of the outer integral for a single `φ`: adaptive in
/// `ζ` with the triple average re-evaluated at every node. Build a
/// [`CocyclePipeline`] instead when more than a few values are needed.
pub fn r_c(c: &Cocycle5, phi: f64, cfg: &QuadConfig) -> Result<Complex64> {
    if !(0.0 < phi && phi < TAU) {
        return Err(Error::DomainError(format!(
            "r_c needs φ in (0, 2π), got {phi}"
        )));
    }
    let rule2 = gl_nodes(TABLE_RULE2);
    let rule_psi = gl_nodes(TABLE_RULE_PSI);
    let w = integrate(
        |z| {
            let (cz, gz) = j_node_config(z.min(TAU - z), cfg.table_cap, cfg.table_grade);
            j_of_zeta(c, z, rule2, rule_psi, cz, gz, cz, gz) / (1.0 - z.cos())
        },
        PI,
        phi,
        cfg,
    )?
    .real();
    Ok(-0.5 * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, phi)) * w)
}

/// `v♭` without a table; one direct `r_c` evaluation.
pub fn v_flat(c: &Cocycle5, t1: f64, t2: f64) -> Result<f64> {
    let d = ominus(t2, t1);
    if d == 0.0 {
        return Err(Error::DomainError("v_flat needs distinct angles".into()));
    }
    let r = r_c(c, d, &QuadConfig::pipeline())?;
    Ok((Complex64::from_polar(1.0, t1) * r).im)
}

/// The flat integrand without a table; three direct `r_c` evaluations.
pub fn f_flat(c: &Cocycle5, p1: f64, p2: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(0.0 < p1 && p1 < p2 && p2 < TAU) {
        return Err(Error::DomainError(format!(
            "f_flat needs 0 < φ1 < φ2 < 2π, got ({p1}, {p2})"
        )));
    }
    let avg = flat_double_average(c, p1, p2, gl_nodes(TABLE_RULE2), cfg.panel_cap);
    let vf = |t1: f64, t2: f64| -> Result<f64> {
        let d = ominus(t2, t1);
        let r = r_c(c, d, cfg)?;
        Ok((Complex64::from_polar(1.0, t1) * r).im)
    };
    Ok(avg + vf(p1, p2)? - vf(0.0, p2)? + vf(0.0, p1)?)
}

/// The bounded primitive through a freshly built pipeline; prefer
/// [`CocyclePipeline::primitive_p`] for repeated use.
pub fn primitive_p(
    c: &Cocycle5,
    pts: &[CirclePoint; 4],
    cfg: &QuadConfig,
) -> Result<f64> {
    CocyclePipeline::new(c.clone(), cfg.clone()).primitive_p(pts)
}

// ---------------------------------------------------------------------------
// The perturbed system and its solver.
// ---------------------------------------------------------------------------

/// Margin of the validation grids at construction.
const VALIDATION_MARGIN: f64 = 1e-3;

/// A right-hand side and reflection constant, admissibility-checked at
/// construction: the two-variable relation symmetry of `R` and the
/// six-term compatibility are sampled on margin grids and must hold to the
/// given tolerance.
#[derive(Clone)]
pub struct PerturbedSystem {
    r: AltFunction2,
    c: f64,
}

impl PerturbedSystem {
    /// Default validation: 20-node grids, tolerance 1e-8.
    pub fn new(r: AltFunction2, c: f64) -> Result<Self> {
        PerturbedSystem::with_validation(r, c, 20, 1e-8)
    }

    pub fn with_validation(r: AltFunction2, c: f64, grid_n: usize, tol: f64) -> Result<Self> {
        let mut worst = 0.0f64;
        let mut worst_sample = vec![];
        for (x, y) in p2_margin_grid(grid_n, VALIDATION_MARGIN) {
            let (mx, my) = crate::config::p2_image(x, y);
            let d = (r.eval_raw(x, y) - r.eval_raw(mx, my)).abs();
            if d > worst {
                worst = d;
                worst_sample = vec![x, y];
            }
        }
        if worst > tol {
            return Err(Error::InvalidRhs {
                reason: "right-hand side violates the two-variable relation symmetry".into(),
                sample: worst_sample,
                residual: worst,
            });
        }

        let six = six_term_lhs(&r);
        let mut worst = 0.0f64;
        let mut worst_sample = vec![];
        for (x, y, z) in p3_margin_grid(grid_n, VALIDATION_MARGIN) {
            let d = six.eval_raw(x, y, z).abs();
            if d > worst {
                worst = d;
                worst_sample = vec![x, y, z];
            }
        }
        if worst > tol {
            return Err(Error::InvalidRhs {
                reason: "right-hand side violates the six-term compatibility equation".into(),
                sample: worst_sample,
                residual: worst,
            });
        }

        Ok(PerturbedSystem { r, c })
    }

    /// The homogeneous system `R ≡ 0` with reflection constant `c`.
    pub fn homogeneous(c: f64) -> Self {
        PerturbedSystem {
            r: AltFunction2::zero(),
            c,
        }
    }

    pub fn rhs(&self) -> &AltFunction2 {
        &self.r
    }

    pub fn constant(&self) -> f64 {
        self.c
    }

    /// The cocycle the solution formula integrates: the alternating
    /// extension of `R - C/2`.
    pub fn cocycle(&self) -> Cocycle5 {
        let r = self.r.clone();
        let c = self.c;
        let g = AltFunction2::new(move |x, y| r.eval_raw(x, y) - 0.5 * c);
        Cocycle5::from_invariant(&g)
    }
}

/// A validated system together with the pipeline of its cocycle; solves
/// the perturbed equation at any interior point.
pub struct Solver {
    system: PerturbedSystem,
    pipeline: CocyclePipeline,
}

impl Solver {
    pub fn new(system: PerturbedSystem, quad: QuadConfig) -> Self {
        let pipeline = CocyclePipeline::new(system.cocycle(), quad);
        Solver { system, pipeline }
    }

    pub fn system(&self) -> &PerturbedSystem {
        &self.system
    }

    pub fn pipeline(&self) -> &CocyclePipeline {
        &self.pipeline
    }

    /// The unique bounded solution at `x`: the slot-averaged cocycle term
    /// plus four orbit integrals, shifted by `C/2`.
    pub fn solve(&self, x: f64) -> Result<f64> {
        if !(x > 0.0 && x < 1.0) {
            return Err(Error::DomainError(format!(
                "solve needs x in (0,1), got {x}"
            )));
        }
        let tx = crate::circle::theta_angle(x);
        let fb = self.pipeline.flat_integrand();
        let q = &self.pipeline.quad;
        let avg = favg_slot1(
            &self.pipeline.c,
            &[0.0, PI, tx, 1.5 * PI],
            gl_nodes(TABLE_RULE),
            q.panel_cap,
        );
        let sum = avg + f0(&fb, tx - PI, 0.5 * PI, q)? - f0(&fb, tx, 1.5 * PI, q)?
            + f0(&fb, PI, 1.5 * PI, q)?
            - f0(&fb, PI, tx, q)?;
        let value = 0.5 * self.system.c - sum;
        if !value.is_finite() {
            return Err(Error::InvalidInput(format!(
                "solution evaluation produced a non-finite value at x = {x}"
            )));
        }
        Ok(value)
    }

    /// Solve at many points in parallel.
    pub fn solve_grid(&self, xs: &[f64]) -> Result<Vec<f64>> {
        xs.par_iter().map(|&x| self.solve(x)).collect()
    }

    /// Residual of the computed solution over a 𝓟₂ grid (five-term defect
    /// against `R - C` plus reflection defect); every evaluation point
    /// triggers a solve, so keep the grid modest.
    pub fn residual(&self, grid: &[(f64, f64)]) -> Result<crate::operators::Residual> {
        let res = crate::operators::spence_abel_residual(
            |x| self.solve(x).unwrap_or(f64::NAN),
            self.system.rhs(),
            self.system.constant(),
            grid,
        );
        if !res.sup_abs.is_finite() {
            return Err(Error::InvalidInput(
                "residual sweep hit a failed solve".into(),
            ));
        }
        Ok(res)
    }
}

/// One-shot solve: builds the pipeline, evaluates at `x`, discards the
/// table. Use [`Solver`] for more than one point.
pub fn solve_lrc(sys: &PerturbedSystem, x: f64, cfg: &QuadConfig) -> Result<f64> {
    Solver::new(sys.clone(), cfg.clone()).solve(x)
}
