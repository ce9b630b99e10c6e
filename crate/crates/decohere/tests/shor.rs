//! Order-finding distribution checks against a literal state-vector
//! simulation, plus decoherence-kernel behavior and the efficiency
//! classifier on analytically solved inputs.

mod common;

use decohere::shor::{
    classify_efficiency, multiplicative_order, shor_distribution, shor_distribution_decohered,
    success_probability, totient, DecoherenceKernel, EfficiencySpec, Polynomial, ShorInstance,
    SuccessModel, Verdict,
};

/// Instances small enough for the brute simulation; all exercised through
/// the diagnostic constructor since q < n^2.
const BRUTE_CASES: &[(u64, u64, u64)] = &[
    (15, 7, 64),  // order 4 divides q
    (15, 2, 32),  // order 4 divides q
    (21, 2, 64),  // order 6 does not divide q
    (33, 10, 64), // order 2
    (9, 8, 4),    // tiny hand-checkable case
];

#[test]
fn distribution_matches_brute_state_vector_simulation() {
    for &(n, x, q) in BRUTE_CASES {
        let inst = ShorInstance::new_diagnostic(n, x, q).unwrap();
        let dist = shor_distribution(&inst).unwrap();
        let brute = common::brute_shor_distribution(n, x, q);
        assert_eq!(brute.residues.len() as u64, inst.order(), "n={n} x={x}");
        for c in 0..q {
            for k in 0..inst.order() {
                let fast = dist.p(c, k);
                let slow = brute.p[c as usize][k as usize];
                assert!(
                    (fast - slow).abs() <= 1e-10,
                    "n={n} x={x} q={q} (c={c}, k={k}): {fast} vs {slow}"
                );
            }
        }
    }
}

#[test]
fn brute_residue_walk_matches_modular_order() {
    for &(n, x, _) in BRUTE_CASES {
        let brute = common::brute_shor_distribution(n, x, 64);
        assert_eq!(
            brute.residues.len() as u64,
            multiplicative_order(x, n).unwrap()
        );
        assert_eq!(brute.residues[0], 1 % n);
    }
}

#[test]
fn isolated_kernel_through_the_grouped_sum_is_exact() {
    for &(n, x, q) in BRUTE_CASES {
        let inst = ShorInstance::new_diagnostic(n, x, q).unwrap();
        let direct = shor_distribution(&inst).unwrap();
        let grouped = shor_distribution_decohered(&inst, &DecoherenceKernel::Isolated).unwrap();
        for c in 0..q {
            for k in 0..inst.order() {
                assert!(
                    (direct.p(c, k) - grouped.p(c, k)).abs() <= 1e-12,
                    "n={n} x={x} q={q} (c={c}, k={k})"
                );
            }
        }
    }
}

#[test]
fn complete_decoherence_removes_all_readout_structure() {
    let inst = ShorInstance::new_diagnostic(21, 2, 64).unwrap();
    let dist = shor_distribution_decohered(&inst, &DecoherenceKernel::CompleteDelta).unwrap();
    let q = inst.q();
    let r = inst.order();
    for k in 0..r {
        let count = (q - 1 - k) / r + 1; // amplitudes with a = k (mod r)
        let expected = count as f64 / (q as f64 * q as f64);
        let p0 = dist.p(0, k);
        for c in 0..q {
            assert_eq!(dist.p(c, k), p0, "column k={k} must not depend on c");
        }
        assert!((p0 - expected).abs() <= 1e-15, "k={k}: {p0} vs {expected}");
    }
    assert!((dist.total() - 1.0).abs() <= 1e-12);
}

#[test]
fn bath_kernel_interpolates_between_the_extremes() {
    let inst = ShorInstance::new_diagnostic(15, 7, 64).unwrap();
    let ideal = shor_distribution(&inst).unwrap();
    let modes = vec![decohere::environment::BathMode::new(1.0, 0.35).unwrap()];

    let mut previous_peak = f64::INFINITY;
    for &t in &[0.0, 0.4, 0.9, 1.4] {
        let kernel = DecoherenceKernel::two_level_uniform(&inst, modes.clone(), t).unwrap();
        let dist = shor_distribution_decohered(&inst, &kernel).unwrap();
        assert!((dist.total() - 1.0).abs() <= 1e-10, "t={t}: leaked probability");
        // peak at the c = q/r multiple erodes monotonically on this window
        let peak = dist.marginal_c(16);
        assert!(
            peak <= previous_peak + 1e-12,
            "t={t}: peak {peak} above previous {previous_peak}"
        );
        previous_peak = peak;
        if t == 0.0 {
            for c in 0..inst.q() {
                for k in 0..inst.order() {
                    assert!((dist.p(c, k) - ideal.p(c, k)).abs() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn reference_success_probabilities() {
    // full-size reference instance: success 1/2 concentrated on c = 64, 192
    let inst = ShorInstance::new(15, 7, 256).unwrap();
    let dist = shor_distribution(&inst).unwrap();
    let report = success_probability(&dist, &inst).unwrap();
    assert_eq!(inst.order(), 4);
    assert_eq!(report.good_c, vec![64, 192]);
    assert!((report.success - 0.5).abs() <= 1e-12);
    assert!((report.lower_bound - 0.5).abs() <= 1e-12);
    assert!(report.q_at_least_n_squared);
    assert!(report.totient_at_most_n);

    // complete decoherence flattens success to phi(r)/q exactly
    let flat = shor_distribution_decohered(&inst, &DecoherenceKernel::CompleteDelta).unwrap();
    let degraded = success_probability(&flat, &inst).unwrap();
    let expected = totient(4) as f64 / 256.0;
    assert!((degraded.success - expected).abs() <= 1e-15);
}

#[test]
fn efficiency_classifier_reference_cases() {
    let grid = decohere::shor::octave_grid(16.0, 1e12).unwrap();

    // f = 1/(3 ln N) with 3 ln N repetitions: failure tends to 1/e < 1
    let es = EfficiencySpec::new(
        SuccessModel::ReciprocalLog { c: 3.0 },
        Polynomial::new(vec![0.0, 3.0]).unwrap(),
    )
    .unwrap();
    let out = classify_efficiency(&es, &grid).unwrap();
    assert_eq!(out.verdict, Verdict::Efficient);
    assert!(
        (out.limit - (-1.0f64).exp()).abs() <= 1e-3,
        "limit {} should be close to 1/e",
        out.limit
    );

    // f = 1/N cannot be rescued by any polynomial number of repetitions
    for coeffs in [
        vec![0.0, 1.0],
        vec![0.0, 0.0, 1.0],
        vec![2.0, 1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125],
    ] {
        let es = EfficiencySpec::new(SuccessModel::Reciprocal, Polynomial::new(coeffs).unwrap())
            .unwrap();
        let out = classify_efficiency(&es, &grid).unwrap();
        assert_eq!(out.verdict, Verdict::NotEfficient);
    }
}
