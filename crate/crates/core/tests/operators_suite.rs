//! The difference-operator dictionary: restriction ∘ simplicial difference
//! ∘ extension reproduces the explicit five- and six-term operators, and
//! composing the two operators annihilates.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spence_abel::{
    delta_n, ext4_tuple, ext5_tuple, res5, res6, tau3, tau4, AltFunction1, AltFunction2,
};

fn random_p2(rng: &mut ChaCha8Rng) -> (f64, f64) {
    loop {
        let x = rng.gen_range(0.02..0.98);
        let y = rng.gen_range(0.02..0.98);
        if y - x > 0.02 {
            return (x, y);
        }
    }
}

fn random_p3(rng: &mut ChaCha8Rng) -> (f64, f64, f64) {
    loop {
        let mut v = [
            rng.gen_range(0.02..0.98),
            rng.gen_range(0.02..0.98),
            rng.gen_range(0.02..0.98),
        ];
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if v[1] - v[0] > 0.02 && v[2] - v[1] > 0.02 {
            return (v[0], v[1], v[2]);
        }
    }
}

#[test]
fn five_term_factors_through_the_dictionary() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for f in [
        AltFunction1::new(|x| (std::f64::consts::PI * x).cos()),
        AltFunction1::new(|x| x - 0.5),
    ] {
        let composed = res5(&delta_n(ext4_tuple(&f)));
        let direct = tau3(&f);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let (x, y) = random_p2(&mut rng);
            let a = composed.eval(x, y).unwrap();
            let b = direct.eval(x, y).unwrap();
            worst = worst.max((a - b).abs());
        }
        assert!(worst <= 1e-11, "five-term dictionary defect {worst:.3e}");
    }
}

#[test]
fn six_term_factors_through_the_dictionary() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let g = AltFunction2::new(|x, y| x * y).symmetrized();
    let composed = res6(&delta_n(ext5_tuple(&g)));
    let direct = tau4(&g);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (x, y, z) = random_p3(&mut rng);
        let a = composed.eval(x, y, z).unwrap();
        let b = direct.eval(x, y, z).unwrap();
        worst = worst.max((a - b).abs());
    }
    assert!(worst <= 1e-11, "six-term dictionary defect {worst:.3e}");
}

#[test]
fn six_term_annihilates_five_term_images() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for f in [
        AltFunction1::new(|x| (std::f64::consts::PI * x).cos()),
        AltFunction1::new(|x| (3.0 * std::f64::consts::PI * x).cos()),
    ] {
        let r = tau3(&f);
        let composed = tau4(&r);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let (x, y, z) = random_p3(&mut rng);
            worst = worst.max(composed.eval(x, y, z).unwrap().abs());
        }
        assert!(worst <= 1e-11, "tau4 of tau3 image: {worst:.3e}");
    }
}

#[test]
fn simplicial_differential_squares_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let f = AltFunction1::new(|x| x * x - x);
    let c4 = ext4_tuple(&f);
    let dd = delta_n(delta_n(c4));
    for _ in 0..50 {
        let ts: Vec<f64> = {
            let mut v: Vec<f64> = (0..6)
                .map(|_| rng.gen_range(0.05..std::f64::consts::TAU - 0.05))
                .collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            v
        };
        if ts.windows(2).any(|w| w[1] - w[0] < 0.05) {
            continue;
        }
        assert!(dd(&ts).abs() <= 1e-12);
    }
}

#[test]
fn five_term_image_is_annihilated_before_restriction() {
    // the six-point differential already kills the extended five-term
    // image, not just its restriction
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let f = AltFunction1::new(|x| (std::f64::consts::PI * x).cos());
    let r = tau3(&f);
    let chain = delta_n(ext5_tuple(&r));
    for _ in 0..50 {
        let mut ts: Vec<f64> = (0..6)
            .map(|_| rng.gen_range(0.05..std::f64::consts::TAU - 0.05))
            .collect();
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if ts.windows(2).any(|w| w[1] - w[0] < 0.05) {
            continue;
        }
        assert!(chain(&ts).abs() <= 1e-10, "defect {:.3e}", chain(&ts).abs());
    }
}
