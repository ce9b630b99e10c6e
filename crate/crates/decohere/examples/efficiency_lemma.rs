//! When does "retry until it works" stay efficient?
//!
//! A quantum factoring run succeeds once with probability f(N) and is
//! repeated p(ln N) times, polynomially many in the input size. The
//! all-failures probability is (1 - f(N))^{p(ln N)}. If f(N) decays only
//! like 1/ln N -- the decoherence-free situation -- that quantity stays
//! bounded away from 1 and polynomially many repetitions find a factor. If
//! decoherence pushes f(N) down to 1/N, no polynomial number of retries
//! helps: the failure probability tends to 1.
//!
//! Run with: cargo run --example efficiency_lemma

use decohere::shor::{
    classify_efficiency, octave_grid, EfficiencySpec, Polynomial, SuccessModel,
};

fn main() -> decohere::Result<()> {
    let grid = octave_grid(16.0, 1e12)?;

    // f(N) = 1/(3 ln N) retried p(u) = 3u times: failure^p -> e^{-1}
    let healthy = EfficiencySpec::new(
        SuccessModel::ReciprocalLog { c: 3.0 },
        Polynomial::new(vec![0.0, 3.0])?,
    )?;
    let verdict = classify_efficiency(&healthy, &grid)?;
    println!("f(N) = 1/(3 ln N), p(u) = 3u   [dephasing absent or harmless]");
    println!("{:>16} {:>14} {:>16}", "N", "Lambda(N)", "(1-f)^p");
    for &(n, lam) in verdict.lambda.iter().step_by(8) {
        println!("{n:>16.3e} {lam:>14.8} {:>16.10}", lam.exp());
    }
    println!(
        "verdict: {}   extrapolated limit {:.6} (1/e = {:.6})",
        verdict.verdict,
        verdict.limit,
        (-1.0f64).exp()
    );
    println!("note: {}", verdict.note);

    println!();

    // f(N) = 1/N: exponentially small success; even p(u) = u^3 cannot save it
    let broken = EfficiencySpec::new(
        SuccessModel::Reciprocal,
        Polynomial::new(vec![0.0, 0.0, 0.0, 1.0])?,
    )?;
    let verdict = classify_efficiency(&broken, &grid)?;
    println!("f(N) = 1/N, p(u) = u^3   [decoherence has killed the interference]");
    println!("{:>16} {:>14} {:>16}", "N", "Lambda(N)", "(1-f)^p");
    for &(n, lam) in verdict.lambda.iter().step_by(8) {
        println!("{n:>16.3e} {lam:>14.8} {:>16.10}", lam.exp());
    }
    println!("verdict: {}   extrapolated limit {:.6}", verdict.verdict, verdict.limit);
    println!("note: {}", verdict.note);

    println!();
    println!("a 1/poly(ln N) success rate keeps repeated trials efficient; a 1/N rate");
    println!("does not, for any polynomial retry budget.");
    Ok(())
}
