//! Dephasing against a continuum of modes described by a spectral density.
//!
//! The dephasing exponent S(t) is the integral over the band of the per-mode
//! weak-coupling exponents. A flat band of half-width gamma gives the
//! classic exponential law S(t) ~ 4*gamma*t, so the coherence decays like
//! exp(-4*gamma*t) and the decoherence time is 1/(4*gamma). An ohmic band
//! instead saturates at a cutoff-dominated plateau. Chopping the band into
//! finitely many discrete modes converges to the same exponent.
//!
//! Run with: cargo run --example spectral_density

use decohere::decoherence::{
    dephasing_exponent, discrete_dephasing_exponent, estimate_decoherence_time,
    geometric_time_grid,
};
use decohere::environment::SpectralDensity;

fn main() -> decohere::Result<()> {
    let gamma = 0.25;
    let flat = SpectralDensity::flat_gamma(gamma, 1e3)?;

    println!("flat band, gamma = {gamma}: S(t) grows linearly");
    println!("{:>8} {:>14} {:>14}", "t", "S(t)", "4*gamma*t");
    for &t in &[0.05, 0.2, 0.8, 2.0, 5.0] {
        let s = dephasing_exponent(&flat, t)?;
        println!("{t:>8} {s:>14.6} {:>14.6}", 4.0 * gamma * t);
    }

    // fit exp(-rate * t) through coherence samples |F(t)| = exp(-S(t))
    let grid = geometric_time_grid(0.01, 5.0, 60)?;
    let mut samples = Vec::with_capacity(grid.len());
    for &t in &grid {
        samples.push((t, (-dephasing_exponent(&flat, t)?).exp()));
    }
    let fit = estimate_decoherence_time(&samples)?;
    println!(
        "fitted decay rate {:.6} (expected {}), decoherence time {:.6} (expected {})",
        fit.rate,
        4.0 * gamma,
        fit.decoherence_time,
        1.0 / (4.0 * gamma)
    );

    println!();
    println!("ohmic band, eta = 0.05: S(1) is set by the cutoff, not by time");
    println!("{:>10} {:>14} {:>18}", "cutoff", "S(1)", "S / (8 eta wc / pi)");
    for &cutoff in &[1e2, 1e3, 1e4] {
        let ohmic = SpectralDensity::ohmic(0.05, cutoff)?;
        let s = dephasing_exponent(&ohmic, 1.0)?;
        let plateau = 8.0 * 0.05 * cutoff / std::f64::consts::PI;
        println!("{cutoff:>10} {s:>14.4} {:>18.6}", s / plateau);
    }

    println!();
    println!("discretizing a flat band (cutoff 40): finite baths converge to the continuum");
    let narrow = SpectralDensity::flat_gamma(gamma, 40.0)?;
    let t = 1.3;
    let s_exact = dephasing_exponent(&narrow, t)?;
    println!("{:>8} {:>16} {:>12}", "modes", "S_discrete(1.3)", "rel. error");
    for &n in &[40usize, 400, 4_000] {
        let bath = narrow.discretize(n)?;
        let s_n = discrete_dephasing_exponent(bath.modes(), t);
        println!("{n:>8} {s_n:>16.8} {:>12.2e}", (s_n - s_exact).abs() / s_exact);
    }
    println!("continuum value: {s_exact:.8}");
    Ok(())
}
