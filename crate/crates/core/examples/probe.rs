//! Temporary accuracy probe (not part of the shipped API).

use std::f64::consts::{PI, TAU};

use spence_abel::{
    circle_average, integrate_with_breakpoints, r_c, tau3, theta_of_x, AltFunction1, Cocycle5,
    CocyclePipeline, PerturbedSystem, QuadConfig, Solver,
};

fn refined_double_avg(c: &Cocycle5, p1: f64, p2: f64, cfg: &QuadConfig) -> f64 {
    let outer = integrate_with_breakpoints(
        |p: f64| {
            let inner = integrate_with_breakpoints(
                |e: f64| c.eval_angles(&[e, p, 0.0, p1, p2]),
                0.0,
                TAU,
                &[p1, p2, p],
                cfg,
            )
            .unwrap()
            .real();
            p.sin() * inner
        },
        0.0,
        TAU,
        &[p1, p2],
        cfg,
    )
    .unwrap()
    .real();
    outer / (TAU * TAU)
}

fn refined_f_flat(c: &Cocycle5, p1: f64, p2: f64, cfg: &QuadConfig) -> f64 {
    let v = |t1: f64, t2: f64| -> f64 {
        let d = (t2 - t1).rem_euclid(TAU);
        let r = r_c(c, d, cfg).unwrap();
        (num_complex::Complex64::from_polar(1.0, t1) * r).im
    };
    refined_double_avg(c, p1, p2, cfg) + v(p1, p2) - v(0.0, p2) + v(0.0, p1)
}

fn arccot(x: f64) -> f64 {
    (PI / 2.0) - x.atan()
}

fn main() {
    for k in [1u32, 3] {
        let freq = k as f64 * PI;
        let f = AltFunction1::new(move |x| (freq * x).cos());
        let sys = PerturbedSystem::new(tau3(&f), 0.0).unwrap();
        let c = sys.cocycle();
        let solver = Solver::new(sys.clone(), QuadConfig::pipeline());
        let pipe: &CocyclePipeline = solver.pipeline();
        let tight = QuadConfig::closed_form();

        let x = 0.1;
        let tx = theta_of_x(x).unwrap().angle();
        println!("== cos({k}πx), x={x}, θx={tx:.6} ==");

        // stage 1: slot average, fixed rule vs adaptive
        let fixed = [0.0, PI, tx, 1.5 * PI];
        let favg_fixed = pipe.slot_average(&fixed);
        let favg_ad = circle_average(
            |psi| c.eval_angles(&[psi, 0.0, PI, tx, 1.5 * PI]),
            Some(&fixed),
            &tight,
        )
        .unwrap()
        .real();
        println!(
            "favg   fixed={favg_fixed:+.10e}  adaptive={favg_ad:+.10e}  err={:.3e}",
            (favg_fixed - favg_ad).abs()
        );

        // stage 2: tabulated r vs direct adaptive r
        for phi in [0.3, 1.5, 4.5] {
            let tab = pipe.r_c(phi).unwrap();
            let dir = r_c(&c, phi, &tight).unwrap();
            println!(
                "r({phi:.1})  table={tab:.8}  direct={dir:.8}  err={:.3e}",
                (tab - dir).norm()
            );
        }

        // stage 3: flat integrand along the orbits the solve at x=0.1 uses
        let pairs = [
            (tx - PI, 0.5 * PI),
            (tx, 1.5 * PI),
            (PI, 1.5 * PI),
            (PI, tx),
        ];
        for (p1, p2) in pairs {
            let (a, b) = if p1 < p2 { (p1, p2) } else { (p2, p1) };
            let c1 = 1.0 / (0.5 * a).tan();
            let c2 = 1.0 / (0.5 * b).tan();
            let t_end = -0.5 * (c1 + c2);
            let phi = 2.0 * arccot(0.5 * (c1 - c2));
            let u = 1.0 / (0.5 * phi).tan();
            print!("orbit ({p1:.3},{p2:.3}) T={t_end:+.2}: F errs");
            for frac in [0.25, 0.5, 0.75] {
                let t = frac * t_end;
                let (q1, q2) = (2.0 * arccot(u - t), 2.0 * arccot(-u - t));
                let (q1, q2) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
                let fp = pipe.f_flat(q1, q2).unwrap();
                let fr = refined_f_flat(&c, q1, q2, &tight);
                print!("  {:.3e}", (fp - fr).abs());
            }
            println!();
        }
    }
}
