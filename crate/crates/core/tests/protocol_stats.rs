use edplab_core::analysis::{check_estimator_mean, completeness_soundness, MomentCheck, SampleMoments};
use edplab_core::criteria::swap_witness_value_pure;
use edplab_core::protocols::{
    record_witness_shots, run_edp_on_distribution, simulate_edp, swap_test_estimate, EdpConfig,
    ProtocolId, ShotRecord,
};
use edplab_core::random::{
    sample_haar_pure_shaped, Branch, Ensemble, EnsembleParams, LabeledState, PiStar, QuantumState,
    RngStream,
};
use edplab_core::runner::Sequential;
use edplab_core::tensor::{StateVector, SubsystemShape};
use edplab_core::C64;
use proptest::prelude::*;

fn bell() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = C64::new(0.0, 0.0);
    StateVector::new(
        vec![C64::new(h, 0.0), z, z, C64::new(h, 0.0)],
        SubsystemShape::bipartite(2, 2),
    )
    .unwrap()
}

fn labeled(psi: StateVector, entangled: bool) -> LabeledState {
    let (d_a, d_b) = psi.shape().bipartition().unwrap();
    LabeledState {
        state: QuantumState::Pure(psi),
        branch: if entangled { Branch::GlobalHaar } else { Branch::Product },
        params: EnsembleParams {
            d: d_a * d_b,
            k: 1,
            parts: 2,
        },
        entangled,
    }
}

#[test]
fn bell_state_estimator_is_unbiased() {
    let mut rng = RngStream::new(31, 0);
    let rho_a = bell().reduced_first();
    let check = check_estimator_mean(&rho_a, 200, 50, 1000, &mut rng).unwrap();
    assert!((check.expected - 0.5).abs() < 1e-12);
    assert!(check.within(4.0), "{check:?}");
}

#[test]
fn random_pure_states_estimator_is_unbiased() {
    let mut rng = RngStream::new(32, 0);
    for (d_a, d_b) in [(2, 3), (3, 3), (4, 2)] {
        let psi = sample_haar_pure_shaped(SubsystemShape::bipartite(d_a, d_b), &mut rng);
        let check = check_estimator_mean(&psi.reduced_first(), 10, 8, 2000, &mut rng).unwrap();
        assert!((check.expected - psi.reduced_purity()).abs() < 1e-12);
        assert!(check.within(4.0), "{check:?}");
    }
}

#[test]
fn swap_test_variance_is_bernoulli() {
    let mut rng = RngStream::new(33, 0);
    for (p, pairs) in [(0.5, 100u64), (1.0, 10), (0.2, 37)] {
        let xs: Vec<f64> = (0..20_000).map(|_| swap_test_estimate(p, pairs, &mut rng)).collect();
        let m = SampleMoments::from_slice(&xs).unwrap();
        let mean = MomentCheck {
            observed: m.mean,
            expected: p,
            se: m.mean_se,
        };
        let var = MomentCheck {
            observed: m.variance,
            expected: (1.0 - p * p) / pairs as f64,
            se: m.variance_se,
        };
        assert!(mean.within(4.0), "{mean:?}");
        assert!(var.within(4.0), "{var:?}");
    }
}

#[test]
fn witness_shot_mean_is_unbiased() {
    let mut rng = RngStream::new(34, 0);
    for _ in 0..5 {
        let psi = sample_haar_pure_shaped(SubsystemShape::bipartite(3, 3), &mut rng);
        let w = swap_witness_value_pure(&psi).unwrap().value;
        let state = labeled(psi, true);
        let cfg = EdpConfig::witness_with_threshold(4000, 0.0).unwrap();
        let xs: Vec<f64> = (0..500)
            .map(|_| simulate_edp(&state, &cfg, &mut rng).unwrap().c_hat)
            .collect();
        let m = SampleMoments::from_slice(&xs).unwrap();
        let check = MomentCheck {
            observed: m.mean,
            expected: w,
            se: m.mean_se,
        };
        assert!(check.within(4.0), "{check:?}");
        let ShotRecord::Witness(shots) = record_witness_shots(&state.state, 40_000, &mut rng).unwrap() else {
            panic!("wrong record kind");
        };
        let mean = shots.iter().map(|&s| s as f64).sum::<f64>() / shots.len() as f64;
        let se = ((1.0 - w * w) / shots.len() as f64).sqrt();
        assert!((mean - w).abs() <= 4.0 * se, "{mean} vs {w}");
    }
}

#[test]
fn rand_meas_calibration_points() {
    let cfg_for = |d: usize| {
        let d_a = (d as f64).sqrt() as u64;
        let n_m = 4 * (d_a as f64).sqrt().ceil() as u64;
        EdpConfig::rand_meas(20, n_m).unwrap()
    };
    let run = |d: usize, seed: u64| {
        let ens = Ensemble::Bipartite(PiStar::new(d, 1).unwrap());
        run_edp_on_distribution(&ens, &cfg_for(d), 2000, seed, &[1], &Sequential).unwrap()
    };
    let small = run(16, 35);
    let product: Vec<_> = small.iter().filter(|o| o.branch == Branch::Product).collect();
    let fp = product.iter().filter(|o| o.outcome.entangled).count() as f64 / product.len() as f64;
    assert!(fp < 0.05, "false-positive rate {fp}");

    let large = run(256, 36);
    let global: Vec<_> = large.iter().filter(|o| o.branch == Branch::GlobalHaar).collect();
    let hit = global.iter().filter(|o| o.outcome.entangled).count() as f64 / global.len() as f64;
    assert!(hit >= 0.9, "detection rate {hit}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn decisions_follow_the_sign(seed: u64, which in 0usize..3, budget in 2u64..40) {
        let cfg = match ProtocolId::ALL[which] {
            ProtocolId::Witness => EdpConfig::witness(budget, 16).unwrap(),
            ProtocolId::RandMeas => EdpConfig::rand_meas(3, budget).unwrap(),
            ProtocolId::SwapTest => EdpConfig::swap_test(budget).unwrap(),
        };
        let ens = Ensemble::Bipartite(PiStar::new(16, 1).unwrap());
        let out = run_edp_on_distribution(&ens, &cfg, 50, seed, &[9], &Sequential).unwrap();
        for o in &out {
            prop_assert_eq!(o.outcome.entangled, o.outcome.c_hat < 0.0);
            prop_assert_eq!(o.entangled, o.branch == Branch::GlobalHaar);
        }
        let stats = completeness_soundness(&out).unwrap();
        prop_assert!((0.0..=1.0).contains(&stats.completeness));
        if let Some(s) = stats.soundness {
            prop_assert!((0.0..=1.0).contains(&s));
        }
    }
}
