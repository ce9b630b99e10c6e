//! Why decoherence gets quadratically worse with register size, and what
//! that means for running a long computation on real hardware.
//!
//! For the most-separated label pair of an L-qubit register (all zeros vs
//! all ones, uniform couplings) the dephasing exponent is proportional to
//! L^2: doubling the register quadruples the decay rate of its widest
//! coherence. The feasibility check then compares a machine's decoherence
//! time against L^2 * (gate time) * (gate count).
//!
//! Run with: cargo run --example scaling_and_feasibility

use decohere::decoherence::{
    feasibility, scaling_exponent, weak_dephasing_sum, FeasibilityInput,
};
use decohere::environment::BathMode;
use decohere::registers::{BasisLabel, RegisterSpec};

fn main() -> decohere::Result<()> {
    // shared weak bath; the register size only enters through the prefactor
    let modes = vec![
        BathMode::new(0.8, 0.01)?,
        BathMode::new(1.1, 0.02)?,
        BathMode::new(1.9, 0.015)?,
    ];
    let t = 1.7;
    let bath_sum = weak_dephasing_sum(&modes, t);

    println!("widest coherence of an L-qubit register (|0...0> against |1...1>):");
    println!("{:>4} {:>14} {:>18} {:>12}", "L", "prefactor", "exponent at t=1.7", "ratio to L=1");
    let mut base = 0.0;
    for l in [1usize, 2, 4, 8, 16] {
        let spec = RegisterSpec::uniform_couplings(l)?;
        let zeros = BasisLabel::from_index(0, l)?;
        let ones = BasisLabel::from_index((1 << l) - 1, l)?;
        let pre = scaling_exponent(&spec, &zeros, &ones)?;
        let exponent = pre * bath_sum;
        if l == 1 {
            base = exponent;
        }
        println!("{l:>4} {pre:>14.1} {exponent:>18.10} {:>12.1}", exponent / base);
        // prefactor is (2L)^2 / 2: quadratic in the register size
        assert_eq!(pre, 2.0 * (l * l) as f64);
    }
    println!("the exponent scales like L^2: coherence lifetime shrinks as 1/L^2.");

    println!();
    println!("feasibility: does the computation finish before the coherence does?");
    println!("margin = (decoherence time) - L^2 * (gate time) * (gate count)");
    println!();
    let cases: [(&str, usize, f64, u64, f64); 3] = [
        ("small demo, slow gates", 10, 1e-3, 10_000, 2_000.0),
        ("RSA-size, optimistic gates", 2048, 1e-6, 100_000_000, 100_000.0),
        ("RSA-size, heroic machine", 2048, 1e-9, 100_000_000, 1_000_000.0),
    ];
    for (label, qubits, tau, gates, td) in cases {
        let verdict = feasibility(&FeasibilityInput::new(qubits, tau, gates, td)?);
        println!("  {label:<28} {}", verdict.report_line());
    }

    println!();
    println!("the L^2 penalty is what makes large registers so demanding: gate speed");
    println!("and coherence time must outrun the square of the problem size.");
    Ok(())
}
