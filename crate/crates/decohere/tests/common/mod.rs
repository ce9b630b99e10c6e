//! Brute-force reference implementations shared by the integration tests.
//!
//! Everything here is deliberately slow and structure-free: dense matrix
//! exponentials over truncated Fock spaces and literal state-vector sums.
//! None of it shares formulas with the library routines it validates.

#![allow(dead_code)]

use ndarray::Array2;
use num_complex::Complex64;

use decohere::environment::{BathMode, OscillatorCoupling};
use decohere::linalg::hermitian_phase_exp;

/// Number of Fock levels kept by the truncated-oscillator oracle. Vacuum
/// evolution under the drives used in tests populates amplitudes ~ b^n/sqrt(n!)
/// with |b| < 1, so 40 levels leave truncation error far below 1e-10.
pub const FOCK_LEVELS: usize = 40;

/// Vacuum column of `exp(-i H t)` for the driven oscillator
/// `H = omega a^dag a + f g (a + a^dag)`, on a truncated Fock space.
fn driven_oscillator_vacuum_column(
    mode: &BathMode,
    f: f64,
    t: f64,
    levels: usize,
) -> Vec<Complex64> {
    let drive = f * mode.g;
    let mut h = Array2::<Complex64>::zeros((levels, levels));
    for n in 0..levels {
        h[(n, n)] = Complex64::new(mode.omega * n as f64, 0.0);
        if n + 1 < levels {
            let hop = Complex64::new(drive * ((n + 1) as f64).sqrt(), 0.0);
            h[(n, n + 1)] = hop;
            h[(n + 1, n)] = hop;
        }
    }
    let u = hermitian_phase_exp(&h, t).expect("truncated oscillator Hamiltonian is Hermitian");
    (0..levels).map(|n| u[(n, 0)]).collect()
}

/// Oscillator-bath decohering factor `<0| U_b(t)^dag U_a(t) |0>` computed by
/// numerically exponentiating the two driven-oscillator Hamiltonians on a
/// truncated Fock space — no displaced-state algebra involved.
pub fn fock_oracle_factor(mode: &BathMode, coupling: &OscillatorCoupling, t: f64) -> Complex64 {
    let col_a = driven_oscillator_vacuum_column(mode, coupling.f_a, t, FOCK_LEVELS);
    let col_b = driven_oscillator_vacuum_column(mode, coupling.f_b, t, FOCK_LEVELS);
    col_a
        .iter()
        .zip(&col_b)
        .map(|(a, b)| b.conj() * a)
        .sum()
}

/// Literal order-finding readout simulation.
///
/// Builds the post-modular-exponentiation state
/// `(1/q) sum_a exp(2 pi i a c / q) |c, x^a mod n>` residue by residue and
/// returns `p[c][k] = |amplitude(c, v_k)|^2`, where `v_k` is the k-th
/// *distinct* residue in order of first appearance (so `v_0 = 1` only when
/// `x^0` starts the walk, which it does). Never assumes periodicity.
pub struct BruteShor {
    /// `p[c][k]`, outer index the readout value `c`.
    pub p: Vec<Vec<f64>>,
    /// Distinct residues in order of first appearance.
    pub residues: Vec<u64>,
}

pub fn brute_shor_distribution(n: u64, x: u64, q: u64) -> BruteShor {
    assert!(q >= 2 && n >= 2 && x >= 1, "degenerate toy parameters");
    let mut residues: Vec<u64> = Vec::new();
    let mut class_of_a: Vec<usize> = Vec::with_capacity(q as usize);
    let mut power = 1u64 % n;
    for _ in 0..q {
        let k = match residues.iter().position(|&v| v == power) {
            Some(k) => k,
            None => {
                residues.push(power);
                residues.len() - 1
            }
        };
        class_of_a.push(k);
        power = power * x % n;
    }
    let n_classes = residues.len();
    let mut p = vec![vec![0.0f64; n_classes]; q as usize];
    let tau = 2.0 * std::f64::consts::PI;
    for c in 0..q {
        let mut amps = vec![Complex64::new(0.0, 0.0); n_classes];
        for a in 0..q {
            let angle = tau * ((a * c) % q) as f64 / q as f64;
            amps[class_of_a[a as usize]] += Complex64::from_polar(1.0, angle);
        }
        for (k, amp) in amps.iter().enumerate() {
            p[c as usize][k] = amp.norm_sqr() / (q as f64 * q as f64);
        }
    }
    BruteShor { p, residues }
}
