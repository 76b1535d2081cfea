use freezelab_core::construct::{
    construct, converse_probe, lemma31_report, random_scenario, Scenario,
};
use freezelab_core::random;
use freezelab_core::transfer::pressure;
use freezelab_core::{LocPotential, Sft};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn certified_conditions_freeze_the_face(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_scenario(&mut rng, seed, 4, 2).unwrap();
        let face = s.face().unwrap();
        let c = construct(&s.sft, &s.phi, &face).unwrap();
        prop_assert!(c.separator.min_lower_slack >= -1e-9);
        prop_assert!(c.separator.min_upper_slack >= -1e-9);
        let betas: Vec<f64> = (0..20).map(|_| rng.gen_range(1.0..60.0)).collect();
        let report = lemma31_report(&s.sft, &c.psi, &face, &betas).unwrap();
        prop_assert!(report.condition2);
        prop_assert!(report.passed, "{:?}", report.first_failure());
    }

    #[test]
    fn violated_condition_two_loses_the_extreme(seed in any::<u64>(), level in -1.0f64..1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..6);
        let a = random::mixing_sft(&mut rng, n, 0.4);
        let h = pressure(&a, &LocPotential::zero(&a), 1.0).unwrap();
        prop_assume!(h > 0.1);
        let pa = LocPotential::constant(&a, level);
        let b = Sft::fixed_point();
        let pb = LocPotential::constant(&b, level + h);
        let s = Scenario::assemble("converse", &[(a, pa), (b, pb)], &[0, 1], Some(seed)).unwrap();
        let face = s.face().unwrap();
        let r = converse_probe(&s.sft, &s.phi, &face.extremes()[0]).unwrap();
        prop_assert!(r.deficit >= 0.1);
        prop_assert!(r.passed, "{:?}", r);
    }
}
