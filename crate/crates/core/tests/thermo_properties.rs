use freezelab_core::ergopt::max_ergodic_average;
use freezelab_core::random;
use freezelab_core::transfer::{pressure, pressure_curve};
use freezelab_core::{enumerate_simple_cycles, integrate, LocPotential, MarkovMeasure, Sft};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn system(seed: u64) -> (ChaCha8Rng, Sft, LocPotential) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sft = random::sft(&mut rng, 6, 0.4);
    let phi = random::potential(&mut rng, &sft, -2.0, 2.0);
    (rng, sft, phi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_is_affine_on_disjoint_mixtures(seed in any::<u64>(), t in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random::sft(&mut rng, 4, 0.5);
        let b = random::sft(&mut rng, 4, 0.5);
        let u = Sft::disjoint_union(&[&a, &b]).unwrap();
        let on = |part: usize, rng: &mut ChaCha8Rng| -> MarkovMeasure {
            loop {
                let m = random::markov_measure(&u, rng).unwrap();
                let v = m.support()[0];
                if (v < a.vertex_count()) == (part == 0) {
                    return m;
                }
            }
        };
        let m0 = on(0, &mut rng);
        let m1 = on(1, &mut rng);
        let mix = m0.mix(&m1, t).unwrap();
        let expected = t * m0.entropy() + (1.0 - t) * m1.entropy();
        prop_assert!((mix.entropy() - expected).abs() < 1e-10);
    }

    #[test]
    fn integration_is_linear(seed in any::<u64>(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let (mut rng, sft, phi) = system(seed);
        let psi = random::potential(&mut rng, &sft, -1.0, 1.0);
        let m = random::markov_measure(&sft, &mut rng).unwrap();
        let lhs = integrate(&phi.combine(a, &psi, b).unwrap(), &m).unwrap();
        let rhs = a * integrate(&phi, &m).unwrap() + b * integrate(&psi, &m).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn constant_shift_moves_pressure(seed in any::<u64>(), c in -5.0f64..5.0, beta in 0.0f64..10.0) {
        let (_, sft, phi) = system(seed);
        let p = pressure(&sft, &phi, beta).unwrap();
        let q = pressure(&sft, &phi.shifted(c), beta).unwrap();
        prop_assert!((q - p - beta * c).abs() < 1e-10 * (1.0 + q.abs()));
    }

    #[test]
    fn pressure_is_monotone_in_the_potential(seed in any::<u64>()) {
        let (mut rng, sft, phi) = system(seed);
        let bump = random::potential(&mut rng, &sft, 0.0, 0.5);
        let bigger = phi.combine(1.0, &bump, 1.0).unwrap();
        prop_assert!(pressure(&sft, &phi, 1.0).unwrap() <= pressure(&sft, &bigger, 1.0).unwrap() + 1e-12);
    }

    #[test]
    fn maximum_is_stable_under_coboundaries(seed in any::<u64>(), c in -2.0f64..2.0) {
        let (mut rng, sft, phi) = system(seed);
        let u: Vec<f64> = (0..sft.vertex_count()).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let w: Vec<f64> = sft
            .edges()
            .iter()
            .zip(phi.weights())
            .map(|(&(i, j), &x)| x + u[i] - u[j] + c)
            .collect();
        let moved = phi.with_weights(w).unwrap();
        let a = max_ergodic_average(&sft, &phi).unwrap();
        let b = max_ergodic_average(&sft, &moved).unwrap();
        prop_assert!((b.value - a.value - c).abs() < 1e-9);
        let brute = enumerate_simple_cycles(&sft)
            .unwrap()
            .means(&phi)
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert_eq!(a.value, brute);
    }

    #[test]
    fn pressure_curves_are_convex(seed in any::<u64>()) {
        let (_, sft, phi) = system(seed);
        let grid: Vec<f64> = (0..=40).map(|k| k as f64 * 0.5).collect();
        let curve = pressure_curve(&sft, &phi, &grid).unwrap();
        prop_assert!(curve.check().is_ok());
        prop_assert!(curve.min_second_difference() >= -1e-8);
    }

    #[test]
    fn gibbs_measures_attain_pressure(seed in any::<u64>(), beta in 0.0f64..8.0) {
        let (_, sft, phi) = system(seed);
        let p = pressure(&sft, &phi, beta).unwrap();
        for m in freezelab_core::transfer::gibbs_measure(&sft, &phi, beta).unwrap() {
            let v = m.entropy() + beta * integrate(&phi, &m).unwrap();
            prop_assert!((v - p).abs() < 1e-8);
        }
    }
}
