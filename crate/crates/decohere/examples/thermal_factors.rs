//! Temperature dependence of the dephasing factor for a single bath mode.
//!
//! Averaging the overlap over a Gibbs-populated mode leaves the real part
//! exactly where the vacuum put it; only the imaginary part shrinks, scaled
//! by the thermal polarization tanh(beta*omega). In particular a hot bath
//! (small beta) never dephases *more* strongly than the vacuum.
//!
//! Run with: cargo run --example thermal_factors

use decohere::decoherence::factor_two_level_thermal;
use decohere::environment::{BathMode, ThermalState};

fn main() -> decohere::Result<()> {
    let mode = BathMode::new(1.3, 0.4)?;
    let (xi_a, xi_b) = (1.0, -0.5);
    let t = 0.9;

    let vacuum = factor_two_level_thermal(&mode, xi_a, xi_b, t, &ThermalState::vacuum());
    println!("mode omega={} g={}   branch couplings ({xi_a}, {xi_b})   t={t}", mode.omega, mode.g);
    println!();
    println!(
        "{:>10} {:>14} {:>14} {:>12} {:>14}",
        "beta", "Re F", "Im F", "|F|", "Im / Im_vac"
    );

    for &beta in &[f64::INFINITY, 8.0, 2.0, 0.5, 0.1, 0.01] {
        let th = if beta.is_infinite() {
            ThermalState::vacuum()
        } else {
            ThermalState::with_beta(beta)?
        };
        let f = factor_two_level_thermal(&mode, xi_a, xi_b, t, &th);
        let v = f.value();
        let scale = v.im / vacuum.value().im;
        let label = if beta.is_infinite() { "vacuum".to_string() } else { format!("{beta}") };
        println!(
            "{label:>10} {:>14.10} {:>14.10} {:>12.10} {:>14.10}",
            v.re,
            v.im,
            f.modulus(),
            scale
        );
        // the imaginary part contracts by exactly the mode's polarization
        let expected = th.polarization(mode.omega);
        assert!((scale - expected).abs() < 1e-12);
    }

    println!();
    println!("Re F is pinned for all temperatures; Im F carries the tanh(beta*omega) factor.");
    println!("Hot baths blur the phase information already stored, they do not add dephasing.");
    Ok(())
}
