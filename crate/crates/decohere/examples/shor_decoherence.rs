//! How environmental dephasing of the order-finding register degrades the
//! period-finding readout, from the isolated ideal down to the flat
//! no-information limit.
//!
//! Factoring n = 15 with base x = 7 (order r = 4) over a 256-point register:
//! the good readout peaks sit at c = 64 and c = 192. A bath coupled to the
//! register qubits suppresses interference between computational paths, so
//! the peaks melt as the interaction time grows; under complete decoherence
//! the readout flattens to phi(r)/q and period finding fails.
//!
//! Run with: cargo run --example shor_decoherence

use decohere::environment::BathMode;
use decohere::shor::{
    shor_distribution_decohered, success_probability, totient, DecoherenceKernel, ShorInstance,
};

fn main() -> decohere::Result<()> {
    let inst = ShorInstance::new(15, 7, 256)?;
    println!(
        "n = {}, x = {}, q = {}: multiplicative order r = {}",
        inst.n(),
        inst.x(),
        inst.q(),
        inst.order()
    );

    let ideal = shor_distribution_decohered(&inst, &DecoherenceKernel::Isolated)?;
    let report = success_probability(&ideal, &inst)?;
    println!("good readout values: {:?}", report.good_c);
    println!();

    println!("one bath mode (omega=1, g=0.35) on every register qubit:");
    println!(
        "{:>12} {:>12} {:>14} {:>14}",
        "time", "P(success)", "lower bound", "peak at c=64"
    );
    let modes = vec![BathMode::new(1.0, 0.35)?];
    for &t in &[0.0, 0.3, 0.6, 0.9, 1.2] {
        let kernel = DecoherenceKernel::two_level_uniform(&inst, modes.clone(), t)?;
        let dist = shor_distribution_decohered(&inst, &kernel)?;
        let rep = success_probability(&dist, &inst)?;
        println!(
            "{t:>12} {:>12.6} {:>14.6} {:>14.6}",
            rep.success,
            rep.lower_bound,
            dist.marginal_c(64)
        );
    }

    let flat = shor_distribution_decohered(&inst, &DecoherenceKernel::CompleteDelta)?;
    let rep_flat = success_probability(&flat, &inst)?;
    println!(
        "{:>12} {:>12.6} {:>14.6} {:>14.6}",
        "complete",
        rep_flat.success,
        rep_flat.lower_bound,
        flat.marginal_c(64)
    );

    let phi = totient(inst.order());
    println!();
    println!(
        "complete decoherence leaves P(success) = phi(r)/q = {}/{} = {:.7}: the",
        phi,
        inst.q(),
        phi as f64 / inst.q() as f64
    );
    println!("interference that concentrates weight on multiples of q/r is gone, and");
    println!("with it the quantum speedup. Intermediate times interpolate smoothly.");
    Ok(())
}
