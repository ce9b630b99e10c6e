//! Decohering factors for pure-dephasing system-environment models.
//!
//! A register basis label with net coupling `xi` drags every environment mode
//! through the conditioned evolution
//!
//! ```text
//!     U(xi, t) = exp[-i (omega*sigma3 + xi*g*sigma2) t]
//!              = cos(W t) - i (sigma2 sin(theta) + sigma3 cos(theta)) sin(W t)
//! ```
//!
//! with `tan(theta) = xi*g/omega` and `W = sqrt((xi g)^2 + omega^2)`. The
//! overlap of two such conditioned environment states is the per-mode
//! *decohering factor*; the product over modes multiplies the off-diagonal
//! element of the reduced density matrix between the two labels. Moduli never
//! exceed one, and `-ln|F|` accumulates additively over modes, which is how
//! products are evaluated here (log-domain, immune to underflow).
//!
//! Matrix and state conventions: two-level mode bases are ordered
//! (excited, ground), so index 1 is the ground state.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::environment::{BathMode, OscillatorCoupling, SpectralDensity, ThermalState};
use crate::error::{Error, Result};
use crate::linalg;
use crate::registers::{net_coupling, BasisLabel, RegisterSpec};

/// Slack allowed above exact unit modulus before a factor is rejected.
pub const UNITARITY_TOL: f64 = 1e-12;

/// A single decohering factor: the complex overlap of two conditioned
/// environment evolutions. Modulus is at most `1 + UNITARITY_TOL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceFactor {
    value: Complex64,
}

impl DecoherenceFactor {
    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::numeric("decoherence factor must be finite"));
        }
        if value.norm() > 1.0 + UNITARITY_TOL {
            return Err(Error::numeric(format!(
                "decoherence factor modulus {} exceeds 1",
                value.norm()
            )));
        }
        Ok(DecoherenceFactor { value })
    }

    /// For perturbative formulas, which may drift slightly above unit modulus
    /// outside their validity regime. Crate-internal by design.
    fn approximate(value: Complex64) -> Self {
        DecoherenceFactor { value }
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }

    pub fn phase(&self) -> f64 {
        self.value.arg()
    }

    /// Dephasing exponent `-ln|F|` (infinite for a fully decohered factor).
    pub fn exponent(&self) -> f64 {
        -self.value.norm().ln()
    }
}

/// Mixing angle and effective precession frequency of one driven mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeAngles {
    /// `atan2(xi*g, omega)`, in (-pi/2, pi/2) since omega > 0.
    pub theta: f64,
    /// `sqrt((xi*g)^2 + omega^2)`.
    pub omega_eff: f64,
}

/// Mixing angle/frequency of `mode` when driven by net coupling `xi`.
pub fn mode_angles(mode: &BathMode, xi: f64) -> ModeAngles {
    let drive = xi * mode.g;
    ModeAngles {
        theta: drive.atan2(mode.omega),
        omega_eff: drive.hypot(mode.omega),
    }
}

/// Closed-form conditioned propagator `U(xi, t)` in the (excited, ground)
/// basis.
pub fn two_level_propagator(mode: &BathMode, xi: f64, t: f64) -> [[Complex64; 2]; 2] {
    let ModeAngles { theta, omega_eff } = mode_angles(mode, xi);
    let (st, ct) = theta.sin_cos();
    let (s, c) = (omega_eff * t).sin_cos();
    [
        [Complex64::new(c, -s * ct), Complex64::new(-s * st, 0.0)],
        [Complex64::new(s * st, 0.0), Complex64::new(c, s * ct)],
    ]
}

/// Reference propagator: numerically exponentiates the mode Hamiltonian
/// `omega*sigma3 + xi*g*sigma2` by eigendecomposition. Shares no code with
/// [`two_level_propagator`]; used to validate the closed forms.
pub fn oracle_factor_unitary(mode: &BathMode, xi: f64, t: f64) -> Result<[[Complex64; 2]; 2]> {
    let drive = xi * mode.g;
    let h = ndarray::array![
        [Complex64::new(mode.omega, 0.0), Complex64::new(0.0, -drive)],
        [Complex64::new(0.0, drive), Complex64::new(-mode.omega, 0.0)]
    ];
    let u = linalg::hermitian_phase_exp(&h, t)?;
    Ok([[u[(0, 0)], u[(0, 1)]], [u[(1, 0)], u[(1, 1)]]])
}

/// Column of the conditioned propagator applied to the mode ground state:
/// `(amplitude on excited, amplitude on ground)`.
fn ground_column(mode: &BathMode, xi: f64, t: f64) -> (Complex64, Complex64) {
    let u = two_level_propagator(mode, xi, t);
    (u[0][1], u[1][1])
}

/// Exact vacuum factor `<g| U(xi_b, t)^dagger U(xi_a, t) |g>` for one mode.
pub fn factor_two_level_exact(mode: &BathMode, xi_a: f64, xi_b: f64, t: f64) -> DecoherenceFactor {
    let (ae, ag) = ground_column(mode, xi_a, t);
    let (be, bg) = ground_column(mode, xi_b, t);
    let value = be.conj() * ae + bg.conj() * ag;
    DecoherenceFactor::new(value).expect("overlap of unit vectors has modulus <= 1")
}

/// Thermal factor: the exact two-level Gibbs trace
/// `w_g <g|U(xi_b)^dag U(xi_a)|g> + w_e <e|U(xi_b)^dag U(xi_a)|e>`
/// with `w_(g,e) = exp(+-beta*omega) / (2 cosh(beta*omega))`.
///
/// The real part is independent of temperature; the imaginary part scales by
/// `tanh(beta*omega)`. The vacuum state reproduces
/// [`factor_two_level_exact`].
pub fn factor_two_level_thermal(
    mode: &BathMode,
    xi_a: f64,
    xi_b: f64,
    t: f64,
    th: &ThermalState,
) -> DecoherenceFactor {
    let ua = two_level_propagator(mode, xi_a, t);
    let ub = two_level_propagator(mode, xi_b, t);
    // diagonal entries of U(xi_b)^dagger U(xi_a)
    let m_ee = ub[0][0].conj() * ua[0][0] + ub[1][0].conj() * ua[1][0];
    let m_gg = ub[0][1].conj() * ua[0][1] + ub[1][1].conj() * ua[1][1];
    let (w_g, w_e) = th.population_weights(mode.omega);
    let value = m_gg * w_g + m_ee * w_e;
    DecoherenceFactor::new(value).expect("convex combination of unit overlaps")
}

/// Second-order weak-coupling factor, valid for `g` much smaller than
/// `omega`:
///
/// ```text
///   F ~ 1 - (g^2 / 2 omega^2) (xi_a - xi_b)^2 sin^2(omega t)
///       - i (g^2 / 4 omega^2) (xi_a^2 - xi_b^2) tanh(beta*omega) sin(2 omega t)
/// ```
///
/// `beta = None` means the vacuum (`tanh -> 1`). The modulus is
/// temperature-independent at this order. Agreement with the exact factor is
/// O(g^4/omega^4) in modulus; the complex values additionally drift apart
/// through an O(g^2 t) secular phase whenever `xi_a^2 != xi_b^2`.
pub fn factor_weak_coupling(
    mode: &BathMode,
    xi_a: f64,
    xi_b: f64,
    t: f64,
    beta: Option<f64>,
) -> DecoherenceFactor {
    let r2 = (mode.g / mode.omega).powi(2);
    let polar = beta.map_or(1.0, |b| (b * mode.omega).tanh());
    let wt = mode.omega * t;
    let re = 1.0 - 0.5 * r2 * (xi_a - xi_b).powi(2) * wt.sin().powi(2);
    let im = -0.25 * r2 * (xi_a * xi_a - xi_b * xi_b) * polar * (2.0 * wt).sin();
    DecoherenceFactor::approximate(Complex64::new(re, im))
}

/// Exact factor for one oscillator mode driven by collective couplings
/// `f_a`, `f_b` (forced-oscillator model, environment in its ground state):
///
/// ```text
///   F = exp[-(f_a - f_b)^2 (2 g^2/omega^2) sin^2(omega t / 2)]
///       * exp[+i (f_a^2 - f_b^2) (g^2/omega) (t - sin(omega t)/omega)]
/// ```
///
/// The phase sign and the `t - sin(omega t)/omega` combination are pinned by
/// the truncated-Fock matrix-exponential oracle in the test suite.
pub fn factor_oscillator(mode: &BathMode, oc: &OscillatorCoupling, t: f64) -> DecoherenceFactor {
    let ratio = mode.g / mode.omega;
    let shift_a = oc.f_a * ratio;
    let shift_b = oc.f_b * ratio;
    let wt = mode.omega * t;
    let log_mod = -2.0 * (shift_a - shift_b).powi(2) * (0.5 * wt).sin().powi(2);
    let phase = (shift_a * shift_a - shift_b * shift_b) * (wt - wt.sin());
    DecoherenceFactor::new(Complex64::from_polar(log_mod.exp(), phase))
        .expect("damped phase factor has modulus <= 1")
}

/// Product of per-mode factors, accumulated in the log domain: exponents
/// `-ln|F_j|` and phases add, so deep products cannot underflow prematurely.
pub fn product_factor<F>(modes: &[BathMode], per_mode: F) -> DecoherenceFactor
where
    F: Fn(&BathMode) -> DecoherenceFactor,
{
    let mut log_mod = 0.0f64;
    let mut phase = 0.0f64;
    for mode in modes {
        let f = per_mode(mode).value();
        let r = f.norm();
        if r == 0.0 {
            return DecoherenceFactor::new(Complex64::new(0.0, 0.0)).unwrap();
        }
        log_mod += r.ln();
        phase += f.arg();
    }
    let value = Complex64::from_polar(log_mod.exp().min(1.0 + UNITARITY_TOL), phase);
    DecoherenceFactor::new(value).expect("clamped modulus")
}

/// Per-mode dephasing exponents `Delta_j = -ln|F_j|`; their sum is the
/// product's total exponent.
pub fn mode_exponents<F>(modes: &[BathMode], per_mode: F) -> Vec<f64>
where
    F: Fn(&BathMode) -> DecoherenceFactor,
{
    modes.iter().map(|m| per_mode(m).exponent()).collect()
}

/// Thermal factor product swept over a time grid. Times are evaluated in
/// parallel; the output order always matches the input grid, so repeated
/// runs are bit-identical regardless of scheduling.
pub fn sweep_thermal_product(
    modes: &[BathMode],
    xi_a: f64,
    xi_b: f64,
    th: &ThermalState,
    times: &[f64],
) -> Vec<DecoherenceFactor> {
    times
        .par_iter()
        .map(|&t| product_factor(modes, |m| factor_two_level_thermal(m, xi_a, xi_b, t, th)))
        .collect()
}

/// Weak-coupling dephasing sum `sum_j (g_j/omega_j)^2 sin^2(omega_j t)`.
///
/// Multiplied by [`scaling_exponent`] of a label pair this gives that pair's
/// `-ln|F|` in the exponentiated weak-coupling (Gaussian-decay) form.
pub fn weak_dephasing_sum(modes: &[BathMode], t: f64) -> f64 {
    modes
        .iter()
        .map(|m| ((m.g / m.omega) * (m.omega * t).sin()).powi(2))
        .sum()
}

/// Discrete dephasing exponent `S(t) = sum_j 8 (g_j/omega_j)^2
/// sin^2(omega_j t)`, the Riemann-sum counterpart of
/// [`dephasing_exponent`]. The prefactor 8 corresponds to the reference
/// label pair with net couplings +-2.
pub fn discrete_dephasing_exponent(modes: &[BathMode], t: f64) -> f64 {
    8.0 * weak_dephasing_sum(modes, t)
}

/// Multiplier `(xi(q) - xi(q'))^2 / 2` of the weak-coupling dephasing sum for
/// a pair of basis labels: quadratic growth of the dephasing exponent with
/// net-coupling separation.
pub fn scaling_exponent(spec: &RegisterSpec, q: &BasisLabel, q2: &BasisLabel) -> Result<f64> {
    let xa = net_coupling(q, spec)?;
    let xb = net_coupling(q2, spec)?;
    Ok(0.5 * (xa - xb).powi(2))
}

/// Continuum dephasing exponent
/// `S(t) = integral_0^cutoff (8/omega^2) * weight(omega) * sin^2(omega t) d omega`
/// for the reference +-2 label pair, by adaptive Simpson quadrature.
///
/// The integrand is continued to `8 * weight(0) * t^2` at `omega = 0`.
/// Returns a numeric error (with diagnostics) if the quadrature cannot reach
/// its tolerance within the evaluation budget.
pub fn dephasing_exponent(sd: &SpectralDensity, t: f64) -> Result<f64> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::invalid(format!("time must be finite and >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let cutoff = sd.cutoff();
    let f = |omega: f64| -> f64 {
        if omega == 0.0 {
            8.0 * sd.weight(0.0) * t * t
        } else {
            8.0 * sd.weight(omega) * ((omega * t).sin() / omega).powi(2)
        }
    };
    // Panel the band so each panel spans at most ~half an oscillation of
    // sin^2(omega t), then refine adaptively inside each panel.
    let panels = ((cutoff * t / std::f64::consts::PI).ceil() * 2.0)
        .max(8.0)
        .min(200_000.0) as usize;
    let width = cutoff / panels as f64;
    let mut budget = Budget {
        evals: 0,
        cap: 20_000_000,
    };
    let mut total = 0.0;
    for i in 0..panels {
        let a = i as f64 * width;
        let b = if i + 1 == panels { cutoff } else { a + width };
        total += adaptive_simpson(&f, a, b, &mut budget)?;
    }
    Ok(total)
}

struct Budget {
    evals: usize,
    cap: usize,
}

fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    budget: &mut Budget,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    budget.evals += 3;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, 28, budget)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    depth: usize,
    budget: &mut Budget,
) -> Result<f64> {
    if budget.evals > budget.cap {
        return Err(Error::numeric(format!(
            "quadrature evaluation budget ({}) exhausted on [{a}, {b}]",
            budget.cap
        )));
    }
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm), f(rm));
    budget.evals += 2;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let err = left + right - whole;
    let tol = 1e-10 * whole.abs().max(1e-13 * (b - a));
    if err.abs() <= 15.0 * tol || depth == 0 {
        if depth == 0 && err.abs() > 1e6 * 15.0 * tol {
            return Err(Error::numeric(format!(
                "quadrature failed to converge on [{a}, {b}]: residual {err:.3e}"
            )));
        }
        return Ok(left + right + err / 15.0);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, depth - 1, budget)?
        + simpson_step(f, m, b, fm, frm, fb, right, depth - 1, budget)?)
}

/// A dephasing exponent curve `S(t)` on a time grid, optionally with the
/// per-mode exponent breakdown at each time.
#[derive(Debug, Clone, PartialEq)]
pub struct DephasingCurve {
    pub times: Vec<f64>,
    pub exponents: Vec<f64>,
    pub per_mode: Option<Vec<Vec<f64>>>,
}

impl DephasingCurve {
    /// Continuum curve from a spectral density (times quadratured in
    /// parallel, output in grid order).
    pub fn from_spectral_density(sd: &SpectralDensity, times: &[f64]) -> Result<Self> {
        let exponents = times
            .par_iter()
            .map(|&t| dephasing_exponent(sd, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(DephasingCurve {
            times: times.to_vec(),
            exponents,
            per_mode: None,
        })
    }

    /// Exact-factor curve for a discrete bath and a pair of net couplings,
    /// with per-mode exponents retained.
    pub fn from_bath_factors(modes: &[BathMode], xi_a: f64, xi_b: f64, times: &[f64]) -> Self {
        let per_mode: Vec<Vec<f64>> = times
            .par_iter()
            .map(|&t| mode_exponents(modes, |m| factor_two_level_exact(m, xi_a, xi_b, t)))
            .collect();
        let exponents = per_mode.iter().map(|d| d.iter().sum()).collect();
        DephasingCurve {
            times: times.to_vec(),
            exponents,
            per_mode: Some(per_mode),
        }
    }
}

/// Result of fitting exponential decay `|F| = exp(-rate * t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    /// Fitted decay rate (slope of `-ln|F|` against `t` through the origin).
    pub rate: f64,
    /// `1 / rate`: time for the modulus to fall to `1/e`.
    pub decoherence_time: f64,
    /// Root-mean-square residual of `-ln|F|` around the fit.
    pub residual: f64,
}

/// Least-squares fit of a decay rate to `(t, |F|)` samples.
///
/// Needs at least three samples with `t > 0` and moduli in (0, 1]. Returns a
/// numeric error when no decay is detected (non-positive fitted rate).
pub fn estimate_decoherence_time(samples: &[(f64, f64)]) -> Result<DecayFit> {
    if samples.len() < 3 {
        return Err(Error::invalid(format!(
            "decay fit needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    for &(t, m) in samples {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::invalid(format!("sample times must be > 0, got {t}")));
        }
        if !(m.is_finite() && m > 0.0 && m <= 1.0 + UNITARITY_TOL) {
            return Err(Error::invalid(format!(
                "sample moduli must lie in (0, 1], got {m}"
            )));
        }
    }
    let mut st2 = 0.0;
    let mut sty = 0.0;
    for &(t, m) in samples {
        let y = -m.ln();
        st2 += t * t;
        sty += t * y;
    }
    let rate = sty / st2;
    if !(rate.is_finite() && rate > 0.0) {
        return Err(Error::numeric(format!(
            "no decay detected: fitted rate {rate}"
        )));
    }
    let ss: f64 = samples
        .iter()
        .map(|&(t, m)| (-m.ln() - rate * t).powi(2))
        .sum();
    Ok(DecayFit {
        rate,
        decoherence_time: 1.0 / rate,
        residual: (ss / samples.len() as f64).sqrt(),
    })
}

/// Inputs of the runtime-vs-decoherence feasibility comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityInput {
    /// Register width L; the dephasing exponent grows like L^2.
    pub qubits: usize,
    /// Single-gate duration tau > 0.
    pub gate_time: f64,
    /// Number of gates K >= 1.
    pub gate_count: u64,
    /// Available decoherence time.
    pub decoherence_time: f64,
}

impl FeasibilityInput {
    pub fn new(qubits: usize, gate_time: f64, gate_count: u64, decoherence_time: f64) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::invalid("qubit count must be >= 1"));
        }
        if !(gate_time.is_finite() && gate_time > 0.0) {
            return Err(Error::invalid(format!("gate time must be > 0, got {gate_time}")));
        }
        if gate_count == 0 {
            return Err(Error::invalid("gate count must be >= 1"));
        }
        if !(decoherence_time.is_finite() && decoherence_time > 0.0) {
            return Err(Error::invalid(format!(
                "decoherence time must be > 0, got {decoherence_time}"
            )));
        }
        Ok(FeasibilityInput {
            qubits,
            gate_time,
            gate_count,
            decoherence_time,
        })
    }
}

/// Outcome of the `L^2 * tau * K < t_d` comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// `t_d - L^2 * tau * K`; positive means feasible.
    pub margin: f64,
}

impl FeasibilityVerdict {
    pub fn report_line(&self) -> String {
        let tag = if self.feasible { "FEASIBLE" } else { "INFEASIBLE" };
        format!("{tag} margin={}", self.margin)
    }
}

/// Compare the scaled runtime `L^2 * tau * K` against the decoherence time.
pub fn feasibility(input: &FeasibilityInput) -> FeasibilityVerdict {
    let runtime = (input.qubits as f64).powi(2) * input.gate_time * input.gate_count as f64;
    let margin = input.decoherence_time - runtime;
    FeasibilityVerdict {
        feasible: margin > 0.0,
        margin,
    }
}

/// Geometric time grid with `points >= 2` samples from `t_min` to `t_max`
/// inclusive.
pub fn geometric_time_grid(t_min: f64, t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_min.is_finite() && t_min > 0.0 && t_max.is_finite() && t_max > t_min) {
        return Err(Error::invalid(format!(
            "need 0 < t_min < t_max, got [{t_min}, {t_max}]"
        )));
    }
    if points < 2 {
        return Err(Error::invalid("time grid needs at least 2 points"));
    }
    let ratio = (t_max / t_min).ln() / (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            if i + 1 == points {
                t_max
            } else {
                t_min * (ratio * i as f64).exp()
            }
        })
        .collect())
}

/// Default grid spanning the bath's frequency range: geometric from
/// `1e-3 / omega_max` to `10 / omega_min`, 200 points.
pub fn default_time_grid(modes: &[BathMode]) -> Result<Vec<f64>> {
    if modes.is_empty() {
        return Err(Error::invalid("default time grid needs at least one mode"));
    }
    let w_min = modes.iter().map(|m| m.omega).fold(f64::INFINITY, f64::min);
    let w_max = modes.iter().map(|m| m.omega).fold(0.0f64, f64::max);
    geometric_time_grid(1e-3 / w_max, 10.0 / w_min, 200)
}
