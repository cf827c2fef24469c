//! Stability and continuity experiments: the Hyers-Ulam bound on seeded
//! perturbations, the continuity of solutions in the data, and the
//! Lipschitz control of the flat integrand by the cocycle.

use std::sync::LazyLock;

use spence_abel::{
    continuity_sweep, generate_admissible_rhs, p2_margin_grid, run_generated_trial,
    run_stability_trial, AltFunction1, PerturbedSystem, QuadConfig, Solver, StabilityGrid, ZETA2,
};

fn continuity_constants() -> (f64, f64) {
    (1.0 + 16.0 / 3.0f64.sqrt(), 1.0 + 8.0 / 3.0f64.sqrt())
}

static TRIAL_GRID: LazyLock<StabilityGrid> =
    LazyLock::new(|| StabilityGrid::with_counts(120, 40, 1e-3));

#[test]
fn twenty_seeded_trials_respect_the_bound() {
    for seed in 200..220 {
        let report = run_generated_trial(seed, 0.01, 3, &TRIAL_GRID).unwrap();
        assert!(
            report.ratio <= 1.0,
            "seed {seed}: ratio {} (deviation {:.3e}, bound {:.3e})",
            report.ratio,
            report.deviation,
            report.bound
        );
        assert!(report.deviation >= 0.0);
    }
}

#[test]
fn measured_defect_equals_the_five_term_image_of_the_bump() {
    let (f, r) = generate_admissible_rhs(321, 0.02, 2);
    let report = run_stability_trial(
        |x| spence_abel::rogers_reference(x).unwrap() + f.eval(x).unwrap(),
        ZETA2,
        &TRIAL_GRID,
        "defect linearity check",
    )
    .unwrap();
    let mut tau_sup: f64 = 0.0;
    for &(x, y) in &TRIAL_GRID.plane {
        tau_sup = tau_sup.max(r.eval(x, y).unwrap().abs());
    }
    assert!(
        (report.epsilon - tau_sup).abs() <= 1e-9,
        "{} vs {}",
        report.epsilon,
        tau_sup
    );
}

#[test]
fn reports_are_reproducible() {
    let a = run_generated_trial(77, 0.01, 4, &TRIAL_GRID).unwrap();
    let b = run_generated_trial(77, 0.01, 4, &TRIAL_GRID).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn identical_systems_sweep_to_zero() {
    let sys = PerturbedSystem::homogeneous(ZETA2);
    let d = continuity_sweep(&sys, &sys, &[0.3, 0.7]).unwrap();
    assert_eq!(d, 0.0);
}

#[test]
fn constant_shift_moves_solutions_by_the_dilogarithm_profile() {
    let delta = 0.1;
    let sys1 = PerturbedSystem::homogeneous(ZETA2);
    let sys2 = PerturbedSystem::homogeneous(ZETA2 + delta);
    let xs = [0.3, 0.5, 0.9];
    let measured = continuity_sweep(&sys1, &sys2, &xs).unwrap();
    // solutions scale linearly in the constant, so the difference profile
    // is δ·L₂(x)/ζ(2), largest at the largest sample
    let expected = delta
        * xs.iter()
            .map(|&x| spence_abel::rogers_reference(x).unwrap())
            .fold(0.0, f64::max)
        / ZETA2;
    assert!(
        (measured - expected).abs() <= 1e-6,
        "{measured} vs {expected}"
    );
}

#[test]
fn seeded_pairs_respect_continuity_and_lipschitz_constants() {
    let (k_rhs, k_const) = continuity_constants();
    let quad = QuadConfig::survey();
    let xs = [0.2, 0.5, 0.8];
    let omega_samples: [(f64, f64); 6] = [
        (0.9, 2.1),
        (1.5, 3.9),
        (0.4, 5.5),
        (2.7, 4.6),
        (3.3, 5.8),
        (1.1, 1.9),
    ];

    for pair in 0..3u64 {
        let (_, r1) = generate_admissible_rhs(400 + 2 * pair, 0.02, 2);
        let (_, r2) = generate_admissible_rhs(401 + 2 * pair, 0.02, 2);
        let c1 = ZETA2 + 0.05 * (pair as f64 - 1.0);
        let c2 = ZETA2 - 0.03 * (pair as f64);
        let sys1 = PerturbedSystem::new(r1, c1).unwrap();
        let sys2 = PerturbedSystem::new(r2, c2).unwrap();

        let s1 = Solver::new(sys1.clone(), quad.clone());
        let s2 = Solver::new(sys2.clone(), quad.clone());

        // sup norms of the data differences on a sample grid; the cocycle
        // difference is |(R1-R2) - (C1-C2)/2| in coordinates
        let mut rhs_diff: f64 = 0.0;
        let mut c_norm: f64 = 0.0;
        for (x, y) in p2_margin_grid(40, 1e-3) {
            let d = sys1.rhs().eval(x, y).unwrap() - sys2.rhs().eval(x, y).unwrap();
            rhs_diff = rhs_diff.max(d.abs());
            c_norm = c_norm.max((d - 0.5 * (c1 - c2)).abs());
        }

        // Lipschitz control of the flat integrand by the cocycle
        let mut flat_diff: f64 = 0.0;
        for &(p1, p2) in &omega_samples {
            let d = (s1.pipeline().f_flat(p1, p2).unwrap()
                - s2.pipeline().f_flat(p1, p2).unwrap())
            .abs();
            flat_diff = flat_diff.max(d);
        }
        assert!(
            flat_diff <= 4.0 * c_norm + 1e-9,
            "pair {pair}: flat ratio {} > 4",
            flat_diff / c_norm
        );

        // continuity of the solutions in the data
        let l1 = s1.solve_grid(&xs).unwrap();
        let l2 = s2.solve_grid(&xs).unwrap();
        let measured = l1
            .iter()
            .zip(&l2)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let bound = k_rhs * rhs_diff + k_const * (c1 - c2).abs();
        assert!(
            measured <= bound,
            "pair {pair}: measured {measured:.6e} > bound {bound:.6e}"
        );
    }
}

#[test]
fn trial_rejects_inconsistent_reflection_data() {
    let f = AltFunction1::new(|x| 0.05 * (std::f64::consts::PI * x).cos());
    // wrong constant: reflection mismatch must be caught
    let err = run_stability_trial(
        |x| spence_abel::rogers_reference(x).unwrap() + f.eval(x).unwrap(),
        ZETA2 + 0.1,
        &TRIAL_GRID,
        "bad constant",
    );
    assert!(err.is_err());
}
