//! Cross-ratio laws, coordinate round-trips, and the equivariance of the
//! extension/restriction dictionary.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

use spence_abel::{
    canonical_config, cross_ratio, ext4, ext5, lambda_coords, p2_image, AltFunction1,
    AltFunction2, CirclePoint, Config, ExtComplex, ParamPoint,
};

/// Sorted angles in (0, 2π) with circular gaps at least `min_gap`.
fn random_sorted_angles(rng: &mut ChaCha8Rng, k: usize, min_gap: f64) -> Vec<f64> {
    loop {
        let mut ts: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut ok = true;
        for i in 0..k {
            let gap = if i + 1 < k {
                ts[i + 1] - ts[i]
            } else {
                ts[0] + TAU - ts[k - 1]
            };
            ok &= gap > min_gap;
        }
        if ok {
            return ts;
        }
    }
}

fn finite(z: Complex64) -> ExtComplex {
    ExtComplex::from(z)
}

#[test]
fn normalization_sends_z_one_zero_infinity_to_z() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let z = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        if (z - Complex64::new(1.0, 0.0)).norm() < 1e-3 || z.norm() < 1e-3 {
            continue;
        }
        let v = cross_ratio(
            finite(z),
            finite(Complex64::new(1.0, 0.0)),
            finite(Complex64::new(0.0, 0.0)),
            ExtComplex::Infinity,
        )
        .unwrap();
        assert!((v.as_finite().unwrap() - z).norm() <= 1e-12);
    }
}

#[test]
fn cocycle_identity_holds_in_bulk() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let ts = random_sorted_angles(&mut rng, 5, 1e-3);
        let z: Vec<ExtComplex> = ts
            .iter()
            .map(|&t| finite(CirclePoint::new(t).to_complex()))
            .collect();
        let full = cross_ratio(z[0], z[1], z[2], z[3]).unwrap();
        let left = cross_ratio(z[0], z[4], z[2], z[3]).unwrap();
        let right = cross_ratio(z[4], z[1], z[2], z[3]).unwrap();
        let (Some(a), Some(b), Some(c)) = (full.as_finite(), left.as_finite(), right.as_finite())
        else {
            continue;
        };
        worst = worst.max((a - b * c).norm());
    }
    assert!(worst <= 1e-12, "worst cocycle defect {worst:.3e}");
}

#[test]
fn cross_ratio_is_mobius_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..100 {
        // a random Möbius map with well-conditioned coefficients
        let m: Vec<f64> = (0..8).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let (a, b, c, d) = (
            Complex64::new(m[0], m[1]),
            Complex64::new(m[2], m[3]),
            Complex64::new(m[4], m[5]),
            Complex64::new(m[6], m[7]),
        );
        if (a * d - b * c).norm() < 0.3 {
            continue;
        }
        let apply = |z: Complex64| (a * z + b) / (c * z + d);

        let ts = random_sorted_angles(&mut rng, 4, 5e-2);
        let zs: Vec<Complex64> = ts.iter().map(|&t| CirclePoint::new(t).to_complex()).collect();
        if zs.iter().any(|&z| (c * z + d).norm() < 0.2) {
            continue;
        }
        let Ok(before_ext) = cross_ratio(finite(zs[0]), finite(zs[1]), finite(zs[2]), finite(zs[3]))
        else {
            continue;
        };
        let Ok(after_ext) = cross_ratio(
            finite(apply(zs[0])),
            finite(apply(zs[1])),
            finite(apply(zs[2])),
            finite(apply(zs[3])),
        ) else {
            continue;
        };
        let (Some(before), Some(after)) = (before_ext.as_finite(), after_ext.as_finite()) else {
            continue;
        };
        assert!(
            (before - after).norm() <= 1e-11,
            "invariance defect {:.3e}",
            (before - after).norm()
        );
    }
}

#[test]
fn coordinate_round_trip_all_dims() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for dim in 1..=3 {
        for _ in 0..100 {
            let mut xs: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.02..0.98)).collect();
            xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
            if xs.windows(2).any(|w| w[1] - w[0] < 1e-2) {
                continue;
            }
            let p = ParamPoint::new(xs.clone()).unwrap();
            let cfg = canonical_config(&p).unwrap();
            let back = lambda_coords(&cfg).unwrap();
            for (u, v) in xs.iter().zip(back.coords()) {
                assert!((u - v).abs() <= 1e-12, "round trip {u} -> {v}");
            }
        }
    }
}

#[test]
fn rotating_the_tuple_acts_on_coordinates() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    // five points: coordinates move by the two-variable relation map
    for _ in 0..100 {
        let ts = random_sorted_angles(&mut rng, 5, 5e-2);
        let cfg = Config::from_angles(&ts).unwrap();
        let lam = lambda_coords(&cfg).unwrap();
        let mut rot = vec![ts[4]];
        rot.extend_from_slice(&ts[..4]);
        let cfg_rot = Config::from_angles(&rot).unwrap();
        let lam_rot = lambda_coords(&cfg_rot).unwrap();
        let (mx, my) = p2_image(lam.coords()[0], lam.coords()[1]);
        assert!((lam_rot.coords()[0] - mx).abs() <= 1e-12);
        assert!((lam_rot.coords()[1] - my).abs() <= 1e-12);
    }
    // four points: the coordinate reflects
    for _ in 0..100 {
        let ts = random_sorted_angles(&mut rng, 4, 5e-2);
        let cfg = Config::from_angles(&ts).unwrap();
        let lam = lambda_coords(&cfg).unwrap().coords()[0];
        let mut rot = vec![ts[3]];
        rot.extend_from_slice(&ts[..3]);
        let lam_rot = lambda_coords(&Config::from_angles(&rot).unwrap())
            .unwrap()
            .coords()[0];
        assert!((lam_rot - (1.0 - lam)).abs() <= 1e-12);
    }
}

#[test]
fn extension_alternates_and_is_disk_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    let f = AltFunction1::new(|x| (std::f64::consts::PI * x).cos());
    let g = AltFunction2::new(|x, y| x * y + (y - x).sin()).symmetrized();

    for _ in 0..60 {
        let ts = random_sorted_angles(&mut rng, 5, 5e-2);
        let cfg = Config::from_angles(&ts).unwrap();
        let base = ext5(&g, &cfg).unwrap();

        // transposition of two points flips the sign
        let mut swapped = ts.clone();
        swapped.swap(1, 3);
        let cfg_swapped = Config::from_angles(&swapped).unwrap();
        let v = ext5(&g, &cfg_swapped).unwrap();
        assert!((v + base).abs() <= 1e-10, "alternation defect {:.3e}", (v + base).abs());

        // a disk automorphism z ↦ e^{iα}(z-a)/(1-āz) preserves the value
        let alpha = rng.gen_range(0.0..TAU);
        let a = Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..TAU));
        let moved: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let z = CirclePoint::new(t).to_complex();
                let w = Complex64::from_polar(1.0, alpha) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z);
                w.arg()
            })
            .collect();
        let cfg_moved = Config::from_angles(&moved).unwrap();
        let v_moved = ext5(&g, &cfg_moved).unwrap();
        assert!(
            (v_moved - base).abs() <= 1e-10,
            "invariance defect {:.3e}",
            (v_moved - base).abs()
        );
    }

    for _ in 0..60 {
        let ts = random_sorted_angles(&mut rng, 4, 5e-2);
        let cfg = Config::from_angles(&ts).unwrap();
        let base = ext4(&f, &cfg).unwrap();
        let mut swapped = ts.clone();
        swapped.swap(0, 2);
        let v = ext4(&f, &Config::from_angles(&swapped).unwrap()).unwrap();
        assert!((v + base).abs() <= 1e-10);

        let alpha = rng.gen_range(0.0..TAU);
        let a = Complex64::from_polar(rng.gen_range(0.0..0.6), rng.gen_range(0.0..TAU));
        let moved: Vec<f64> = ts
            .iter()
            .map(|&t| {
                let z = CirclePoint::new(t).to_complex();
                (Complex64::from_polar(1.0, alpha) * (z - a)
                    / (Complex64::new(1.0, 0.0) - a.conj() * z))
                    .arg()
            })
            .collect();
        let v_moved = ext4(&f, &Config::from_angles(&moved).unwrap()).unwrap();
        assert!((v_moved - base).abs() <= 1e-10);
    }
}

#[test]
fn restriction_inverts_extension_on_canonical_slots() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let f = AltFunction1::new(|x| (std::f64::consts::PI * x).cos());
    let g = AltFunction2::new(|x, y| (x - y).sin() + x * x).symmetrized();

    use spence_abel::{ext4_tuple, ext5_tuple, res4, res5};
    let e4 = ext4_tuple(&f);
    let e5 = ext5_tuple(&g);
    let back4 = res4(&e4);
    let back5 = res5(&e5);
    for _ in 0..100 {
        let x = rng.gen_range(0.05..0.95);
        assert!((back4.eval(x).unwrap() - f.eval(x).unwrap()).abs() <= 1e-12);
    }
    for _ in 0..100 {
        let x = rng.gen_range(0.05..0.9);
        let y = rng.gen_range((x + 0.02)..0.97);
        assert!((back5.eval(x, y).unwrap() - g.eval(x, y).unwrap()).abs() <= 1e-10);
    }
}

#[test]
fn degenerate_and_unoriented_inputs_are_rejected() {
    let c = Config::from_angles(&[0.1, 0.1 + 1e-12, 2.0]);
    assert!(c.is_err());

    // not cyclically ordered: coordinates are refused
    let cfg = Config::from_angles(&[0.0, 3.0, 1.5, 4.5]).unwrap();
    assert!(!spence_abel::config::is_cyclically_oriented(&cfg));
    assert!(lambda_coords(&cfg).is_err());
}
