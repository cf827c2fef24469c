//! Numerical toolkit for the five-term functional equation of the Rogers
//! dilogarithm and its bounded perturbations.
//!
//! The library has three layers:
//!
//! - **Geometry and operators** ([`circle`], [`config`], [`operators`]):
//!   circle configurations, cross-ratio coordinates, the
//!   extension/restriction dictionary between functions on ordered
//!   parameter tuples and alternating functions of circle points, and the
//!   simplicial/five-term/six-term difference operators.
//! - **Analysis** ([`quad`], [`rogers`]): adaptive Gauss-Kronrod
//!   quadrature with endpoint-singularity grading, the series reference
//!   for the dilogarithm, closed forms for the orientation-cocycle
//!   primitives, and the reconstruction of `L₂` from four 1-D integrals.
//! - **Solving and experiments** ([`solver`], [`stability`]): the
//!   constructive bounded solution of the perturbed system for admissible
//!   right-hand sides, and Hyers-Ulam / continuity bound measurements.
//!
//! The `spence-abel` binary (module [`cli`]) exposes evaluation, identity
//! checks, solving, and stability trials with CSV/JSON output.

pub mod circle;
pub mod cli;
pub mod config;
pub mod error;
pub mod operators;
pub mod quad;
pub mod rogers;
pub mod solver;
pub mod stability;

pub use circle::{
    arccot, cayley, cayley_inv, chordal_distance, cross_ratio, ominus, theta_of_x, CirclePoint,
    ExtComplex, NtElement,
};
pub use config::{
    canonical_config, ext4, ext4_tuple, ext5, ext5_tuple, is_cyclically_oriented, lambda_coords,
    p2_image, p3_image, res4, res5, res6, AltFunction1, AltFunction2, AltFunction3, Config,
    ParamPoint, TupleFn,
};
pub use error::{Error, Result};
pub use operators::{
    delta_n, five_term, line_margin_grid, p2_margin_grid, p3_margin_grid, six_term_lhs,
    spence_abel_residual, tau3, tau4, Residual,
};
pub use quad::{
    circle_average, circle_average_complex, circle_average_step, integrate, integrate_complex,
    integrate_complex_with_breakpoints, integrate_with_breakpoints, QuadConfig, QuadResult,
    QuadValue,
};
pub use rogers::{
    f_flat_closed, i1, i2, i3, li2_reference, rogers_new_formula, rogers_new_formula_variant,
    rogers_reference, FormulaVariant, OrientationCocycle, ReferenceDilog, ZETA2,
};
pub use solver::{
    f0, f_flat, primitive_p, r_c, solve_lrc, t_phi, v_flat, Cocycle5, CocyclePipeline,
    FlatIntegrand, PerturbedSystem, RcTable, Solver,
};
pub use stability::{
    continuity_sweep, cosine_series, generate_admissible_rhs, run_generated_trial,
    run_stability_trial, StabilityGrid, StabilityReport,
};
