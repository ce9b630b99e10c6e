//! Randomized invariants: contraction bounds, log-domain factor accounting,
//! probability conservation, and subspace partitioning.

use num_complex::Complex64;
use proptest::prelude::*;

use decohere::decoherence::{
    factor_two_level_exact, factor_two_level_thermal, mode_exponents, product_factor,
    scaling_exponent, DecoherenceFactor,
};
use decohere::environment::{BathMode, ThermalState};
use decohere::registers::{
    decompose_subspaces, net_coupling_of_index, BasisLabel, CouplingMatrix, RegisterSpec,
};
use decohere::shor::{shor_distribution, shor_distribution_decohered, DecoherenceKernel,
    ShorInstance};

/// Valid (n, x) pairs for toy order-finding instances.
const TOY_PAIRS: &[(u64, u64)] = &[(9, 8), (15, 2), (15, 7), (21, 2), (33, 10), (35, 6)];

fn arb_mode() -> impl Strategy<Value = BathMode> {
    (0.05f64..5.0, 0.0f64..2.5).prop_map(|(omega, g)| BathMode::new(omega, g).unwrap())
}

proptest! {
    #[test]
    fn thermal_factor_never_exceeds_unit_modulus(
        omega in 0.05f64..5.0,
        g in 0.0f64..3.0,
        xi_a in -6.0f64..6.0,
        xi_b in -6.0f64..6.0,
        beta in 0.0f64..20.0,
        t in 0.0f64..50.0,
    ) {
        let m = BathMode::new(omega, g).unwrap();
        let th = ThermalState::with_beta(beta).unwrap();
        let f = factor_two_level_thermal(&m, xi_a, xi_b, t, &th);
        prop_assert!(f.modulus() <= 1.0 + 1e-12);
        prop_assert!(f.exponent() >= -1e-12);
        // swapping the labels conjugates the overlap
        let g2 = factor_two_level_thermal(&m, xi_b, xi_a, t, &th);
        prop_assert!((f.value() - g2.value().conj()).norm() <= 1e-13);
    }

    #[test]
    fn product_modulus_is_the_exponent_sum(
        modes in proptest::collection::vec(arb_mode(), 1..8),
        xi_a in -3.0f64..3.0,
        xi_b in -3.0f64..3.0,
        t in 0.0f64..20.0,
    ) {
        let product = product_factor(&modes, |m| factor_two_level_exact(m, xi_a, xi_b, t));
        let total: f64 = mode_exponents(&modes, |m| factor_two_level_exact(m, xi_a, xi_b, t))
            .iter()
            .sum();
        if total.is_finite() {
            let expected = (-total).exp();
            prop_assert!(
                (product.modulus() - expected).abs() <= 1e-9 * expected.max(1e-300),
                "modulus {} vs exp(-sum) {}",
                product.modulus(),
                expected
            );
        } else {
            prop_assert!(product.modulus() == 0.0);
        }
    }

    #[test]
    fn unit_disc_values_are_accepted(r in 0.0f64..1.0, theta in 0.0f64..6.283) {
        let z = Complex64::from_polar(r, theta);
        let f = DecoherenceFactor::new(z).unwrap();
        prop_assert!((f.modulus() - r).abs() <= 1e-15);
        prop_assert!(DecoherenceFactor::new(Complex64::new(1.0 + 1e-6, 0.0)).is_err());
    }

    #[test]
    fn readout_distributions_conserve_probability(
        pair_idx in 0usize..TOY_PAIRS.len(),
        q_exp in 2u32..7,
        g in 0.0f64..0.6,
        t in 0.0f64..4.0,
    ) {
        let (n, x) = TOY_PAIRS[pair_idx];
        let inst = ShorInstance::new_diagnostic(n, x, 1u64 << q_exp).unwrap();
        let ideal = shor_distribution(&inst).unwrap();
        prop_assert!((ideal.total() - 1.0).abs() <= 1e-10);

        let modes = vec![BathMode::new(1.0, g).unwrap()];
        let kernel = DecoherenceKernel::two_level_uniform(&inst, modes, t).unwrap();
        let noisy = shor_distribution_decohered(&inst, &kernel).unwrap();
        prop_assert!((noisy.total() - 1.0).abs() <= 1e-9,
            "unit-diagonal kernel must conserve total probability, got {}", noisy.total());
        for c in 0..inst.q() {
            for k in 0..inst.order() {
                prop_assert!(noisy.p(c, k) >= 0.0);
            }
        }
    }

    #[test]
    fn subspace_decomposition_partitions_the_labels(
        assignment in proptest::collection::vec(0usize..4, 2..40),
    ) {
        // labels are assigned to at most 4 distinct rows by construction
        let base = [
            vec![0.0, 1.0],
            vec![1.0, 0.0],
            vec![0.5, -0.5],
            vec![-1.0, 2.0],
        ];
        let rows: Vec<Vec<f64>> = assignment.iter().map(|&i| base[i].clone()).collect();
        let cm = CouplingMatrix::new(rows).unwrap();
        let decomposition = decompose_subspaces(&cm);

        let mut seen = vec![0usize; assignment.len()];
        for group in &decomposition.groups {
            for &member in &group.members {
                seen[member] += 1;
            }
            // members really share the signature row
            for &member in &group.members {
                prop_assert_eq!(&base[assignment[member]], &group.signature);
            }
        }
        prop_assert!(seen.iter().all(|&count| count == 1), "each label in exactly one group");

        let distinct = {
            let mut ids: Vec<usize> = assignment.clone();
            ids.sort_unstable();
            ids.dedup();
            ids.len()
        };
        prop_assert_eq!(decomposition.n_groups(), distinct);
    }

    #[test]
    fn scaling_exponent_is_a_symmetric_square(
        lambdas in proptest::collection::vec(-2.0f64..2.0, 1..6),
        qa in 0usize..32,
        qb in 0usize..32,
    ) {
        let l = lambdas.len();
        let spec = RegisterSpec::new(lambdas, vec![0.0; l]).unwrap();
        let mask = (1usize << l) - 1;
        let a = BasisLabel::from_index(qa & mask, l).unwrap();
        let b = BasisLabel::from_index(qb & mask, l).unwrap();
        let sab = scaling_exponent(&spec, &a, &b).unwrap();
        let sba = scaling_exponent(&spec, &b, &a).unwrap();
        prop_assert_eq!(sab, sba);
        prop_assert!(sab >= 0.0);
        let d = net_coupling_of_index(qa & mask, &spec) - net_coupling_of_index(qb & mask, &spec);
        prop_assert!((sab - 0.5 * d * d).abs() <= 1e-12 * (1.0 + sab));
    }
}
