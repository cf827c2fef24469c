//! The simplicial differential on tuple functions and its reduced forms:
//! the five-term operator on one-variable functions and the six-term
//! operator on two-variable functions, together with residual evaluation
//! for the perturbed functional equation.

use crate::config::{AltFunction1, AltFunction2, AltFunction3, ParamPoint, TupleFn};
use std::sync::Arc;

/// The five-term combination
/// `f(x) - f(y) - f(x/y) - f((1-y)/(1-x)) + f(x(1-y)/(y(1-x)))`
/// of an arbitrary function of one variable, evaluated at `(x,y)` with
/// `0 < x < y < 1`. All five inner arguments then lie in (0,1).
pub fn five_term<F: Fn(f64) -> f64>(f: F, x: f64, y: f64) -> f64 {
    f(x) - f(y)
        - f(x / y)
        - f((1.0 - y) / (1.0 - x))
        + f(x * (1.0 - y) / (y * (1.0 - x)))
}

/// Five-term operator on alternating one-variable functions. The result
/// lives on 𝓟₂ and satisfies the two-variable relation.
pub fn tau3(f: &AltFunction1) -> AltFunction2 {
    let f = f.clone();
    AltFunction2::new(move |x, y| five_term(|t| f.eval_raw(t), x, y))
}

/// Six-term operator on two-variable relation functions:
/// `-g(x,y) + g(x,z) - g(y,z) + g(x/z, y/z)
///  + g((1-z)/(1-x), (1-z)/(1-y)) - g(x(1-z)/(z(1-x)), y(1-z)/(z(1-y)))`.
/// Composition with [`tau3`] vanishes identically.
pub fn tau4(g: &AltFunction2) -> AltFunction3 {
    let g = g.clone();
    AltFunction3::new(move |x, y, z| {
        -g.eval_raw(x, y) + g.eval_raw(x, z) - g.eval_raw(y, z)
            + g.eval_raw(x / z, y / z)
            + g.eval_raw((1.0 - z) / (1.0 - x), (1.0 - z) / (1.0 - y))
            - g.eval_raw(
                x * (1.0 - z) / (z * (1.0 - x)),
                y * (1.0 - z) / (z * (1.0 - y)),
            )
    })
}

/// The six-term admissibility combination in the sign convention of the
/// perturbation system: exactly `-tau4(g)`. A right-hand side is admissible
/// when this vanishes on 𝓟₃.
pub fn six_term_lhs(g: &AltFunction2) -> AltFunction3 {
    let t = tau4(g);
    AltFunction3::new(move |x, y, z| -t.eval_raw(x, y, z))
}

/// Simplicial differential: for `c` on (m-1)-tuples, returns the m-tuple
/// function `Σ_j (-1)^j c(…, ẑ_j, …)` (hat = omit slot j).
pub fn delta_n(c: TupleFn) -> TupleFn {
    Arc::new(move |angles: &[f64]| {
        let mut acc = 0.0;
        let mut sign = 1.0;
        let mut reduced = Vec::with_capacity(angles.len() - 1);
        for j in 0..angles.len() {
            reduced.clear();
            reduced.extend_from_slice(&angles[..j]);
            reduced.extend_from_slice(&angles[j + 1..]);
            acc += sign * c(&reduced);
            sign = -sign;
        }
        acc
    })
}

/// Worst absolute values of a residual sweep. `sup_abs` always equals the
/// largest `|value|` among the retained samples.
#[derive(Debug, Clone)]
pub struct Residual {
    pub sup_abs: f64,
    pub samples: Vec<(ParamPoint, f64)>,
}

/// How many worst offenders a [`Residual`] retains.
const RESIDUAL_SAMPLES: usize = 16;

fn build_residual(mut entries: Vec<(ParamPoint, f64)>) -> Residual {
    // total_cmp keeps NaN defects sortable (they rank as worst offenders)
    entries.sort_by(|a, b| b.1.abs().total_cmp(&a.1.abs()));
    let sup_abs = entries.first().map_or(0.0, |(_, v)| v.abs());
    entries.truncate(RESIDUAL_SAMPLES);
    Residual {
        sup_abs,
        samples: entries,
    }
}

/// Residual of the perturbed system `(R, C)` for a candidate solution `L`:
/// the five-term defect `|five_term(L)(x,y) + C - R(x,y)|` over the given
/// 𝓟₂ grid, combined with the reflection defect `|L(x) + L(1-x) - C|` over
/// the grid's projected coordinates. The returned `sup_abs` is the larger
/// of the two sups; samples carry the worst offenders of both kinds
/// (reflection samples appear as one-coordinate points).
pub fn spence_abel_residual<F>(l: F, r: &AltFunction2, c: f64, grid: &[(f64, f64)]) -> Residual
where
    F: Fn(f64) -> f64,
{
    let mut entries = Vec::with_capacity(grid.len() + 2 * grid.len());
    let mut projected: Vec<f64> = Vec::with_capacity(2 * grid.len());
    for &(x, y) in grid {
        let v = five_term(&l, x, y) + c - r.eval_raw(x, y);
        if let Ok(p) = ParamPoint::new(vec![x, y]) {
            entries.push((p, v));
        }
        projected.push(x);
        projected.push(y);
    }
    projected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    projected.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    for &x in &projected {
        let v = l(x) + l(1.0 - x) - c;
        if let Ok(p) = ParamPoint::new(vec![x]) {
            entries.push((p, v));
        }
    }
    build_residual(entries)
}

/// Tensor grid on 𝓟₂ with an exclusion margin near the boundary: the
/// pairs `(x_i, x_j)` with `i < j` for `n` equispaced nodes of
/// `[margin, 1 - margin]`.
pub fn p2_margin_grid(n: usize, margin: f64) -> Vec<(f64, f64)> {
    let nodes = line_margin_grid(n, margin);
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            out.push((nodes[i], nodes[j]));
        }
    }
    out
}

/// Increasing triples from the same marginal nodes: the 𝓟₃ companion of
/// [`p2_margin_grid`].
pub fn p3_margin_grid(n: usize, margin: f64) -> Vec<(f64, f64, f64)> {
    let nodes = line_margin_grid(n, margin);
    let mut out = Vec::new();
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            for k in (j + 1)..nodes.len() {
                out.push((nodes[i], nodes[j], nodes[k]));
            }
        }
    }
    out
}

/// `n` equispaced nodes on `[margin, 1 - margin]`.
pub fn line_margin_grid(n: usize, margin: f64) -> Vec<f64> {
    assert!(n >= 2, "grid needs at least two nodes");
    let lo = margin;
    let hi = 1.0 - margin;
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}
