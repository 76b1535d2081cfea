use freezelab_core::renewal::{
    freezing_point, generating_at_one, renewal_pressure, RenewalPotential, TailRule,
};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = RenewalPotential> {
    prop_oneof![
        (0.5f64..2.0).prop_map(|s| RenewalPotential::new(
            vec![-s * 2f64.ln()],
            TailRule::Log { scale: s }
        )
        .unwrap()),
        (0.2f64..3.0).prop_map(|c| RenewalPotential::new(
            vec![],
            TailRule::Geometric {
                coeff: -c,
                ratio: 1.0
            }
        )
        .unwrap()),
        (prop::collection::vec(-1.0f64..-0.01, 0..4), 0.5f64..3.0).prop_map(|(t, c)| {
            RenewalPotential::new(
                t,
                TailRule::Power {
                    coeff: -c,
                    exponent: 1.0,
                },
            )
            .unwrap()
        }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn series_at_one_is_non_increasing(p in family(), b in 0.3f64..4.0, d in 0.01f64..1.0) {
        let lo = generating_at_one(&p, b + d, 1e-8).unwrap();
        let hi = generating_at_one(&p, b, 1e-8).unwrap();
        prop_assert!(lo.lo <= hi.hi);
    }

    #[test]
    fn frozen_set_is_a_ray(p in family()) {
        let b0 = freezing_point(&p, 1e-10).unwrap();
        for k in 1..4 {
            prop_assert_eq!(renewal_pressure(&p, b0 + 1e-6 * k as f64 * 10.0, 1e-10).unwrap(), 0.0);
        }
        prop_assert!(renewal_pressure(&p, b0 - 1e-3, 1e-10).unwrap() > 0.0);
    }

    #[test]
    fn renewal_pressure_is_convex(p in family()) {
        let b0 = freezing_point(&p, 1e-10).unwrap();
        let grid: Vec<f64> = (1..=12).map(|k| b0 * k as f64 / 8.0).collect();
        let ps: Vec<f64> = grid.iter().map(|&b| renewal_pressure(&p, b, 1e-11).unwrap()).collect();
        for w in ps.windows(3) {
            prop_assert!(w[0] - 2.0 * w[1] + w[2] >= -1e-9);
        }
    }

    #[test]
    fn scaling_divides_the_freezing_point(p in family(), eps in 0.25f64..2.0) {
        let b0 = freezing_point(&p, 1e-10).unwrap();
        let scaled = freezing_point(&p.scaled(eps).unwrap(), 1e-10).unwrap();
        prop_assert!((scaled * eps - b0).abs() < 1e-8 * (1.0 + b0));
    }
}
