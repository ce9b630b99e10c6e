//! Cross-checks of the closed-form decohering factors against slow,
//! structure-free references: eigendecomposition propagators, literal Gibbs
//! averages, truncated-Fock oscillator evolution, and brute quadrature.

mod common;

use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use decohere::decoherence::{
    dephasing_exponent, discrete_dephasing_exponent, factor_oscillator, factor_two_level_exact,
    factor_two_level_thermal, oracle_factor_unitary,
};
use decohere::environment::{BathMode, OscillatorCoupling, SpectralDensity, ThermalState};

fn mode(omega: f64, g: f64) -> BathMode {
    BathMode::new(omega, g).unwrap()
}

/// Multiply two 2x2 complex matrices, the left one conjugate-transposed.
fn dagger_times(b: &[[Complex64; 2]; 2], a: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                m[i][j] += b[k][i].conj() * a[k][j];
            }
        }
    }
    m
}

#[test]
fn exact_vacuum_factor_agrees_with_eigendecomposition_route() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    for trial in 0..500 {
        let m = mode(rng.gen_range(0.1..5.0), rng.gen_range(0.0..3.0));
        let xi_a = rng.gen_range(-5.0..5.0);
        let xi_b = rng.gen_range(-5.0..5.0);
        let t = rng.gen_range(0.0..20.0);
        let fast = factor_two_level_exact(&m, xi_a, xi_b, t).value();
        // ground state is the second basis vector; overlap of the two columns
        let ua = oracle_factor_unitary(&m, xi_a, t).unwrap();
        let ub = oracle_factor_unitary(&m, xi_b, t).unwrap();
        let slow = ub[0][1].conj() * ua[0][1] + ub[1][1].conj() * ua[1][1];
        assert!(
            (fast - slow).norm() <= 1e-12,
            "trial {trial}: fast {fast} vs slow {slow}"
        );
    }
}

#[test]
fn thermal_factor_agrees_with_literal_gibbs_average() {
    let mut rng = StdRng::seed_from_u64(0x5eed_0002);
    for trial in 0..500 {
        let m = mode(rng.gen_range(0.1..4.0), rng.gen_range(0.0..2.0));
        let xi_a = rng.gen_range(-4.0..4.0);
        let xi_b = rng.gen_range(-4.0..4.0);
        let beta = rng.gen_range(0.0..8.0);
        let t = rng.gen_range(0.0..15.0);
        let th = ThermalState::with_beta(beta).unwrap();
        let fast = factor_two_level_thermal(&m, xi_a, xi_b, t, &th).value();

        // assemble the Gibbs-weighted trace from eigendecomposed propagators,
        // with the weights derived from scratch
        let ua = oracle_factor_unitary(&m, xi_a, t).unwrap();
        let ub = oracle_factor_unitary(&m, xi_b, t).unwrap();
        let overlap = dagger_times(&ub, &ua);
        let z = (beta * m.omega).exp() + (-beta * m.omega).exp();
        let w_ground = (beta * m.omega).exp() / z;
        let w_excited = (-beta * m.omega).exp() / z;
        let slow = overlap[1][1] * w_ground + overlap[0][0] * w_excited;
        assert!(
            (fast - slow).norm() <= 1e-12,
            "trial {trial}: fast {fast} vs slow {slow}"
        );
    }
}

#[test]
fn oscillator_factor_agrees_with_truncated_fock_evolution() {
    let couplings = [
        OscillatorCoupling::new(1.0, 0.0).unwrap(),
        OscillatorCoupling::new(1.0, -1.0).unwrap(),
        OscillatorCoupling::new(0.5, 0.3).unwrap(),
    ];
    for &omega in &[1.0, 2.3] {
        for &ratio in &[0.05, 0.2] {
            let m = mode(omega, ratio * omega);
            for cp in &couplings {
                for step in 0..25 {
                    let t = step as f64 * 0.4;
                    let fast = factor_oscillator(&m, cp, t).value();
                    let slow = common::fock_oracle_factor(&m, cp, t);
                    assert!(
                        (fast - slow).norm() <= 1e-8,
                        "omega={omega} g/omega={ratio} f=({}, {}) t={t}: {fast} vs {slow}",
                        cp.f_a,
                        cp.f_b
                    );
                }
            }
        }
    }
}

#[test]
fn continuum_exponent_is_the_limit_of_discrete_baths() {
    let sd = SpectralDensity::flat_gamma(0.3, 50.0).unwrap();
    for &t in &[0.5, 1.5] {
        let continuum = dephasing_exponent(&sd, t).unwrap();
        let coarse = discrete_dephasing_exponent(sd.discretize(2_000).unwrap().modes(), t);
        let fine = discrete_dephasing_exponent(sd.discretize(20_000).unwrap().modes(), t);
        let err_coarse = (coarse - continuum).abs();
        let err_fine = (fine - continuum).abs();
        assert!(
            err_fine < err_coarse,
            "t={t}: refinement should reduce error ({err_coarse} -> {err_fine})"
        );
        assert!(
            err_fine <= 1e-6 * continuum.abs(),
            "t={t}: fine discretization off by {err_fine} on {continuum}"
        );
    }
}

#[test]
fn tabulated_density_reproduces_the_band_it_samples() {
    let gamma = 0.4;
    let cutoff = 30.0;
    let flat = SpectralDensity::flat_gamma(gamma, cutoff).unwrap();
    let level = gamma / std::f64::consts::PI;
    let samples: Vec<(f64, f64)> = (0..=60)
        .map(|j| (cutoff * j as f64 / 60.0, level))
        .collect();
    let tab = SpectralDensity::tabulated(samples, cutoff).unwrap();
    for &t in &[0.2, 1.0, 3.0] {
        let a = dephasing_exponent(&flat, t).unwrap();
        let b = dephasing_exponent(&tab, t).unwrap();
        assert!(
            (a - b).abs() <= 1e-9 * a.abs(),
            "t={t}: flat {a} vs tabulated {b}"
        );
    }
}

#[test]
fn oscillator_modulus_equals_two_level_weak_modulus_at_half_frequency() {
    // identical dephasing exponents: 2 (f g / w)^2 sin^2(w t / 2) on the
    // oscillator side, (g^2/2 w'^2) (2f)^2 sin^2(w' t) at w' = w/2 on the
    // two-level side
    let omega = 1.3;
    let g = 0.01;
    let osc_mode = mode(omega, g);
    let half_mode = mode(omega / 2.0, g);
    let cp = OscillatorCoupling::new(1.0, -1.0).unwrap();
    for step in 1..40 {
        let t = step as f64 * 0.25;
        let osc = factor_oscillator(&osc_mode, &cp, t).modulus();
        let weak =
            decohere::decoherence::factor_weak_coupling(&half_mode, 1.0, -1.0, t, None)
                .modulus();
        // exp(-x) vs 1 - x with x <= 8 (g/w)^2 differ by at most 32 (g/w)^4
        let bound = 40.0 * (g / omega).powi(4);
        assert!(
            (osc - weak).abs() <= bound,
            "t={t}: oscillator {osc} vs weak two-level {weak} (bound {bound})"
        );
    }
}
