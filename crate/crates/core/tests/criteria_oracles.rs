use edplab_core::analysis::detection_rate;
use edplab_core::criteria::{
    detection_power_closed_form, ppt_min_eig, purity_criterion_value, regularized_incomplete_beta,
    swap_witness_value, swap_witness_value_pure,
};
use edplab_core::random::{sample_haar_pure, sample_haar_pure_shaped, sample_pi, RngStream};
use edplab_core::tensor::SubsystemShape;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

/// `I_{1/2}(a, b) = Pr[Bin(a + b - 1, 1/2) >= a]` for integer `a, b`, summed
/// exactly.
fn binomial_tail_half(a: u64, b: u64) -> f64 {
    let n = a + b - 1;
    let mut coeff = BigUint::one();
    let mut tail = BigUint::zero();
    for j in 0..=n {
        if j >= a {
            tail += &coeff;
        }
        coeff = coeff * BigUint::from(n - j) / BigUint::from(j + 1);
    }
    // tail / 2^n, keeping 64 significant bits before the division.
    let shift = n.saturating_sub(64);
    let top = (tail >> shift).to_f64().unwrap();
    top / 2f64.powi((n - shift) as i32)
}

#[test]
fn detection_power_matches_binomial_tail() {
    for d_a in 2..=64u64 {
        let a = d_a * (d_a + 1) / 2;
        let b = d_a * (d_a - 1) / 2;
        let oracle = 0.5 * binomial_tail_half(a, b);
        let got = detection_power_closed_form((d_a * d_a) as usize).unwrap();
        assert!(
            (got - oracle).abs() <= 1e-12 * oracle.max(1e-300) + 1e-15,
            "d_A = {d_a}: {got} vs {oracle}"
        );
    }
}

#[test]
fn detection_power_anchors() {
    assert_eq!(detection_power_closed_form(4).unwrap(), 0.0625);
    assert!((detection_power_closed_form(16).unwrap() - 0.07544).abs() < 5e-6);
    assert!((binomial_tail_half(10, 6) / 2.0 - 4944.0 / 65536.0).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn beta_matches_binomial_tail(a in 1u64..300, b in 1u64..300) {
        let got = regularized_incomplete_beta(0.5, a as f64, b as f64).unwrap();
        let oracle = binomial_tail_half(a, b);
        prop_assert!((got - oracle).abs() <= 1e-11 * oracle + 1e-14, "{} vs {}", got, oracle);
    }

    #[test]
    fn beta_symmetry(x in 0.0f64..=1.0, a in 0.05f64..500.0, b in 0.05f64..500.0) {
        let lhs = regularized_incomplete_beta(x, a, b).unwrap();
        let rhs = 1.0 - regularized_incomplete_beta(1.0 - x, b, a).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12, "{} vs {}", lhs, rhs);
    }

    #[test]
    fn purity_criterion_agrees_with_reduced_purity(d_a in 2usize..=4, d_b in 2usize..=4, product: bool, seed: u64) {
        let mut rng = RngStream::new(seed, 0);
        let psi = if product {
            sample_haar_pure(d_a, &mut rng).tensor(&sample_haar_pure(d_b, &mut rng))
        } else {
            sample_haar_pure_shaped(SubsystemShape::bipartite(d_a, d_b), &mut rng)
        };
        let rho = psi.density();
        let crit = purity_criterion_value(&rho).unwrap().value;
        let p = psi.reduced_purity();
        prop_assert_eq!(crit < -1e-6, p < 1.0 - 1e-6);
    }
}

#[test]
fn product_states_never_flagged() {
    let mut rng = RngStream::new(21, 0);
    for i in 0..10_000 {
        let d = 2 + i % 2;
        let rho = if i % 4 < 2 {
            sample_haar_pure(d, &mut rng)
                .tensor(&sample_haar_pure(d, &mut rng))
                .density()
        } else {
            sample_pi(d, 2, &mut rng).tensor(&sample_pi(d, 3, &mut rng))
        }
        .with_shape(SubsystemShape::bipartite(d, d))
        .unwrap();
        assert!(swap_witness_value(&rho).unwrap().value >= -1e-8);
        assert!(ppt_min_eig(&rho).unwrap().value >= -1e-8);
        assert!(purity_criterion_value(&rho).unwrap().value >= -1e-8);
    }
}

#[test]
fn pure_and_density_swap_values_agree() {
    let mut rng = RngStream::new(22, 0);
    for _ in 0..200 {
        let psi = sample_haar_pure_shaped(SubsystemShape::bipartite(3, 3), &mut rng);
        let a = swap_witness_value_pure(&psi).unwrap().value;
        let b = swap_witness_value(&psi.density()).unwrap().value;
        assert!((a - b).abs() < 1e-13);
    }
}

#[test]
fn detection_frequency_matches_closed_form() {
    for (d, seed) in [(4usize, 23u64), (16, 24), (64, 25)] {
        let mut rng = RngStream::new(seed, 0);
        let p = detection_rate(d, 20_000, &mut rng).unwrap();
        assert!(p.z_score() <= 4.0, "{p:?}");
    }
}
