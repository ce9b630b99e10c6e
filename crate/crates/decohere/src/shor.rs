//! Order-finding output statistics with and without environmental dephasing.
//!
//! For a factoring run `(n, x, q)` the ideal measurement statistics over the
//! readout value `c` and the function-register residue class `k` are
//!
//! ```text
//!   p(c, k) = (1/q^2) | sum_{a < q, a = k mod r} exp(2 pi i a c / q) |^2
//! ```
//!
//! with `r` the multiplicative order of `x` mod `n`. Environmental
//! entanglement replaces the coherent square by a kernel-weighted double sum
//!
//! ```text
//!   p'(c, k) = (1/q^2) sum_{a, a'} exp(2 pi i (a - a') c / q) F(a, a')
//! ```
//!
//! over the same residue class. `F = 1` recovers the isolated statistics;
//! `F = delta(a, a')` flattens the peaks to `count_k / q^2`; a two-level
//! bath coupled to the binary digits of `a` interpolates between them.
//!
//! The efficiency lemma for repeated runs is also here: an algorithm with
//! one-try success `f(N)` is efficient if `(1 - f(N))^{p(ln N)}` stays
//! bounded away from 1 for some polynomial `p`, and [`classify_efficiency`]
//! estimates that limit from a geometric grid.

use num_complex::Complex64;

use crate::decoherence::{factor_two_level_exact, product_factor};
use crate::environment::BathMode;
use crate::error::{Error, Result};
use crate::registers::{net_coupling_of_index, RegisterSpec};

/// Largest readout register accepted when building distributions.
pub const MAX_REGISTER_SIZE: u64 = 1 << 16;

/// Default cap on the work estimate of a distribution evaluation.
pub const DEFAULT_WORK_CAP: u64 = 1 << 26;

const NEGATIVE_TOL: f64 = 1e-12;

/// Greatest common divisor (Euclid).
pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Least `r >= 1` with `x^r = 1 (mod n)`.
///
/// Errors if `gcd(x, n) != 1`; the message carries the gcd, since a shared
/// factor already answers the factoring problem.
pub fn multiplicative_order(x: u64, n: u64) -> Result<u64> {
    if n < 3 {
        return Err(Error::invalid(format!("modulus must be >= 3, got {n}")));
    }
    let x = x % n;
    let g = gcd(x, n);
    if g != 1 {
        return Err(Error::invalid(format!(
            "gcd({x}, {n}) = {g}; a nontrivial factor is already in hand"
        )));
    }
    let mut acc = x;
    for r in 1..=n {
        if acc == 1 {
            return Ok(r);
        }
        acc = acc * x % n;
    }
    // unreachable: the powers of a unit cycle through 1 within n steps
    Err(Error::numeric(format!("order of {x} mod {n} not found")))
}

/// Euler's totient: count of `j` in `[1, r]` coprime to `r`.
pub fn totient(r: u64) -> u64 {
    (1..=r).filter(|&j| gcd(j, r) == 1).count() as u64
}

/// A factoring run: odd composite `n`, base `x` coprime to `n`, readout
/// register size `q`, and the derived order `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShorInstance {
    n: u64,
    x: u64,
    q: u64,
    r: u64,
}

impl ShorInstance {
    /// Standard instance: `n` odd composite, `1 < x < n` coprime to `n`,
    /// `q >= n`.
    pub fn new(n: u64, x: u64, q: u64) -> Result<Self> {
        if n < 9 || n % 2 == 0 {
            return Err(Error::invalid(format!("n must be an odd composite >= 9, got {n}")));
        }
        let mut d = 3;
        let mut composite = false;
        while d * d <= n {
            if n % d == 0 {
                composite = true;
                break;
            }
            d += 2;
        }
        if !composite {
            return Err(Error::invalid(format!("n must be composite, {n} is prime")));
        }
        if !(1 < x && x < n) {
            return Err(Error::invalid(format!("need 1 < x < n, got x = {x}")));
        }
        if q < n {
            return Err(Error::invalid(format!("register size q = {q} must be >= n = {n}")));
        }
        Self::build(n, x, q)
    }

    /// Diagnostic instance for toy demonstrations: skips the compositeness
    /// and `q >= n` requirements (and allows `x = 1`, which has order 1).
    pub fn new_diagnostic(n: u64, x: u64, q: u64) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid(format!("n must be >= 3, got {n}")));
        }
        if !(1 <= x && x < n) {
            return Err(Error::invalid(format!("need 1 <= x < n, got x = {x}")));
        }
        if q == 0 {
            return Err(Error::invalid("register size q must be >= 1"));
        }
        Self::build(n, x, q)
    }

    fn build(n: u64, x: u64, q: u64) -> Result<Self> {
        if q > MAX_REGISTER_SIZE {
            return Err(Error::resource(format!(
                "register size q = {q} exceeds the supported maximum {MAX_REGISTER_SIZE}"
            )));
        }
        let r = multiplicative_order(x, n)?;
        Ok(ShorInstance { n, x, q, r })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn x(&self) -> u64 {
        self.x
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// Multiplicative order of `x` mod `n`.
    pub fn order(&self) -> u64 {
        self.r
    }

    /// Bits needed to hold a readout value `a < q`.
    pub fn register_width(&self) -> usize {
        if self.q <= 1 {
            1
        } else {
            (64 - (self.q - 1).leading_zeros()) as usize
        }
    }
}

/// Joint readout distribution over `(c, k)`, `c < q`, `k < r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShorDistribution {
    q: u64,
    r: u64,
    values: Vec<f64>,
    clipped_negative: usize,
}

impl ShorDistribution {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn r(&self) -> u64 {
        self.r
    }

    pub fn p(&self, c: u64, k: u64) -> f64 {
        assert!(c < self.q && k < self.r, "index ({c}, {k}) out of range");
        self.values[(c * self.r + k) as usize]
    }

    /// Probability of reading `c`, any residue class.
    pub fn marginal_c(&self, c: u64) -> f64 {
        (0..self.r).map(|k| self.p(c, k)).sum()
    }

    pub fn total(&self) -> f64 {
        self.values.iter().sum()
    }

    /// How many entries were rounded up to zero from tiny negative values
    /// (possible roundoff of a positive-semidefinite kernel sum).
    pub fn clipped_negative(&self) -> usize {
        self.clipped_negative
    }

    /// All entries in `(c, k, p)` order, row-major in `c`.
    pub fn entries(&self) -> impl Iterator<Item = (u64, u64, f64)> + '_ {
        let r = self.r;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &p)| (i as u64 / r, i as u64 % r, p))
    }
}

/// How many `a < q` fall in residue class `k` mod `r`.
fn class_count(q: u64, r: u64, k: u64) -> u64 {
    if k >= q {
        0
    } else {
        (q - 1 - k) / r + 1
    }
}

fn check_cap(work: u64, cap: u64, what: &str) -> Result<()> {
    if work > cap {
        return Err(Error::resource(format!(
            "{what} needs ~{work} work units, above the cap {cap}"
        )));
    }
    Ok(())
}

/// Ideal (isolated-register) distribution, via the closed geometric-series
/// magnitude `|sin(m theta / 2) / sin(theta / 2)| / q` per entry.
pub fn shor_distribution(inst: &ShorInstance) -> Result<ShorDistribution> {
    shor_distribution_with_cap(inst, DEFAULT_WORK_CAP)
}

/// [`shor_distribution`] with an explicit work cap (work here is `q * r`).
pub fn shor_distribution_with_cap(inst: &ShorInstance, cap: u64) -> Result<ShorDistribution> {
    let (q, r) = (inst.q, inst.r);
    check_cap(q.saturating_mul(r), cap, "ideal distribution")?;
    let mut values = vec![0.0f64; (q * r) as usize];
    for c in 0..q {
        // common phase step within a residue class: theta = 2 pi (r c mod q)/q
        let d = r * c % q;
        let theta = 2.0 * std::f64::consts::PI * d as f64 / q as f64;
        for k in 0..r {
            let m = class_count(q, r, k);
            let amp = if m == 0 {
                0.0
            } else if d == 0 {
                m as f64
            } else {
                (0.5 * m as f64 * theta).sin() / (0.5 * theta).sin()
            };
            values[(c * r + k) as usize] = (amp / q as f64).powi(2);
        }
    }
    Ok(ShorDistribution {
        q,
        r,
        values,
        clipped_negative: 0,
    })
}

/// Environment kernel `F(a, a')` weighting the decohered double sum.
#[derive(Debug, Clone, PartialEq)]
pub enum DecoherenceKernel {
    /// `F = 1`: no environment. Evaluated through the same double-sum
    /// machinery as the other kernels, so it cross-checks the closed form
    /// used by [`shor_distribution`].
    Isolated,
    /// `F(a, a') = delta(a, a')`: complete decoherence of the readout
    /// register.
    CompleteDelta,
    /// Each of the `register_width` qubits holding `a` couples to every
    /// mode of a two-level bath (vacuum start, evolved for time `t`);
    /// `F(a, a')` is the exact product factor of the two binary labels.
    TwoLevelBath {
        spec: RegisterSpec,
        modes: Vec<BathMode>,
        t: f64,
    },
}

impl DecoherenceKernel {
    /// Bath kernel with every readout qubit coupled at unit strength.
    pub fn two_level_uniform(inst: &ShorInstance, modes: Vec<BathMode>, t: f64) -> Result<Self> {
        let spec = RegisterSpec::uniform_couplings(inst.register_width())?;
        Ok(DecoherenceKernel::TwoLevelBath { spec, modes, t })
    }
}

/// Distribution under a decoherence kernel. See [`DecoherenceKernel`] for
/// the three supported forms.
pub fn shor_distribution_decohered(
    inst: &ShorInstance,
    kernel: &DecoherenceKernel,
) -> Result<ShorDistribution> {
    shor_distribution_decohered_with_cap(inst, kernel, DEFAULT_WORK_CAP)
}

/// [`shor_distribution_decohered`] with an explicit work cap.
pub fn shor_distribution_decohered_with_cap(
    inst: &ShorInstance,
    kernel: &DecoherenceKernel,
    cap: u64,
) -> Result<ShorDistribution> {
    let (q, r) = (inst.q, inst.r);
    match kernel {
        DecoherenceKernel::CompleteDelta => {
            check_cap(q.saturating_mul(r), cap, "complete-decoherence distribution")?;
            let q2 = (q as f64) * (q as f64);
            let mut values = vec![0.0f64; (q * r) as usize];
            for k in 0..r {
                let p = class_count(q, r, k) as f64 / q2;
                for c in 0..q {
                    values[(c * r + k) as usize] = p;
                }
            }
            Ok(ShorDistribution {
                q,
                r,
                values,
                clipped_negative: 0,
            })
        }
        DecoherenceKernel::Isolated => {
            // single net-coupling class with F = 1
            let table = vec![vec![Complex64::new(1.0, 0.0)]];
            grouped_double_sum(inst, &vec![0u32; q as usize], &table, cap)
        }
        DecoherenceKernel::TwoLevelBath { spec, modes, t } => {
            if spec.len() != inst.register_width() {
                return Err(Error::invalid(format!(
                    "kernel couples {} qubits but a < q = {} needs {}",
                    spec.len(),
                    q,
                    inst.register_width()
                )));
            }
            if !t.is_finite() {
                return Err(Error::invalid(format!("time must be finite, got {t}")));
            }
            // group readout values by exact net coupling
            let mut class = vec![0u32; q as usize];
            let mut reps: Vec<f64> = Vec::new();
            for a in 0..q as usize {
                let xi = net_coupling_of_index(a, spec);
                let idx = reps
                    .iter()
                    .position(|&v| v == xi)
                    .unwrap_or_else(|| {
                        reps.push(xi);
                        reps.len() - 1
                    });
                class[a] = idx as u32;
            }
            let n_cls = reps.len();
            let mut f_table = vec![vec![Complex64::new(0.0, 0.0); n_cls]; n_cls];
            for u in 0..n_cls {
                for v in u..n_cls {
                    let f = product_factor(modes, |m| {
                        factor_two_level_exact(m, reps[u], reps[v], *t)
                    })
                    .value();
                    // F(a, a') pairs the bra of a' with the ket of a
                    f_table[u][v] = f;
                    f_table[v][u] = f.conj();
                }
            }
            grouped_double_sum(inst, &class, &f_table, cap)
        }
    }
}

/// Shared double-sum evaluator: amplitudes within each residue class are
/// accumulated per net-coupling class, then contracted with the kernel
/// table. Exact for any kernel constant on coupling classes.
fn grouped_double_sum(
    inst: &ShorInstance,
    class: &[u32],
    f_table: &[Vec<Complex64>],
    cap: u64,
) -> Result<ShorDistribution> {
    let (q, r) = (inst.q, inst.r);
    let n_cls = f_table.len() as u64;
    let work = q
        .saturating_mul(q)
        .saturating_add(q.saturating_mul(r).saturating_mul(n_cls * n_cls));
    check_cap(work, cap, "decohered distribution")?;

    let roots: Vec<Complex64> = (0..q)
        .map(|m| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * m as f64 / q as f64))
        .collect();
    let q2 = (q as f64) * (q as f64);
    let mut values = vec![0.0f64; (q * r) as usize];
    let mut clipped = 0usize;
    let mut amp = vec![Complex64::new(0.0, 0.0); (r * n_cls) as usize];
    for c in 0..q {
        amp.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for a in 0..q {
            let k = a % r;
            let u = class[a as usize] as u64;
            amp[(k * n_cls + u) as usize] += roots[(a * c % q) as usize];
        }
        for k in 0..r {
            let row = &amp[(k * n_cls) as usize..((k + 1) * n_cls) as usize];
            let mut acc = Complex64::new(0.0, 0.0);
            for (u, &au) in row.iter().enumerate() {
                for (v, &av) in row.iter().enumerate() {
                    acc += f_table[u][v] * au * av.conj();
                }
            }
            let mut p = acc.re / q2;
            if p < 0.0 {
                if p < -NEGATIVE_TOL {
                    return Err(Error::numeric(format!(
                        "kernel produced probability {p:.3e} at (c={c}, k={k}); \
                         not positive semidefinite"
                    )));
                }
                p = 0.0;
                clipped += 1;
            }
            values[(c * r + k) as usize] = p;
        }
    }
    Ok(ShorDistribution {
        q,
        r,
        values,
        clipped_negative: clipped,
    })
}

/// Success analysis of a distribution against its instance.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessReport {
    /// Total probability of reading a good `c` (any residue class).
    pub success: f64,
    /// The lower-bound quantity `r * phi(r) * min_good(p)`.
    pub lower_bound: f64,
    /// Smallest entry over good `(c, k)` pairs.
    pub min_good: f64,
    /// The good readout values, ascending.
    pub good_c: Vec<u64>,
    /// Whether `q >= n^2`, assumed by the textbook chain of success bounds.
    pub q_at_least_n_squared: bool,
    /// Whether `phi(r) <= n`, the other assumption in that chain.
    pub totient_at_most_n: bool,
}

/// Sum the distribution over the good readout region: `c` within 1/2 of
/// `j q / r` for some `j` in `[1, r)` coprime to `r` (the values from which
/// continued fractions recover `r`).
pub fn success_probability(dist: &ShorDistribution, inst: &ShorInstance) -> Result<SuccessReport> {
    if dist.q() != inst.q || dist.r() != inst.r {
        return Err(Error::invalid(format!(
            "distribution is over (q={}, r={}) but the instance has (q={}, r={})",
            dist.q(),
            dist.r(),
            inst.q,
            inst.r
        )));
    }
    let r = inst.r;
    if r == 1 {
        return Err(Error::invalid(
            "success region is undefined for order r = 1 (x = 1 reveals nothing)",
        ));
    }
    let q = inst.q;
    let coprime: Vec<u64> = (1..r).filter(|&j| gcd(j, r) == 1).collect();
    let mut good_c = Vec::new();
    for c in 0..q {
        // |c - j q / r| <= 1/2  <=>  2 |c r - j q| <= r, in exact integers
        let good = coprime.iter().any(|&j| {
            let diff = (c * r) as i128 - (j * q) as i128;
            2 * diff.abs() <= r as i128
        });
        if good {
            good_c.push(c);
        }
    }
    let mut success = 0.0;
    let mut min_good = f64::INFINITY;
    for &c in &good_c {
        for k in 0..r {
            let p = dist.p(c, k);
            success += p;
            min_good = min_good.min(p);
        }
    }
    if good_c.is_empty() {
        min_good = 0.0;
    }
    let phi = totient(r);
    let lower_bound = r as f64 * phi as f64 * min_good;
    Ok(SuccessReport {
        success,
        lower_bound,
        min_good,
        good_c,
        q_at_least_n_squared: q >= inst.n * inst.n,
        totient_at_most_n: phi <= inst.n,
    })
}

/// Real polynomial in ascending coefficient order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<f64>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("polynomial needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("polynomial coefficients must be finite"));
        }
        Ok(Polynomial { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// One-try success probability model `f(N)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SuccessModel {
    /// `f(N) = 1 / (c ln N)`.
    ReciprocalLog { c: f64 },
    /// `f(N) = 1 / N`.
    Reciprocal,
    /// Sampled values, one per grid point.
    Custom { values: Vec<f64> },
}

/// Efficiency question: does `(1 - f(N))^{p(ln N)}` stay below 1 as N grows?
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencySpec {
    pub model: SuccessModel,
    pub poly: Polynomial,
}

impl EfficiencySpec {
    pub fn new(model: SuccessModel, poly: Polynomial) -> Result<Self> {
        if let SuccessModel::ReciprocalLog { c } = &model {
            if !(c.is_finite() && *c > 0.0) {
                return Err(Error::invalid(format!(
                    "reciprocal-log coefficient must be > 0, got {c}"
                )));
            }
        }
        Ok(EfficiencySpec { model, poly })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Efficient,
    NotEfficient,
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Efficient => write!(f, "Efficient"),
            Verdict::NotEfficient => write!(f, "NotEfficient"),
            Verdict::Inconclusive => write!(f, "Inconclusive"),
        }
    }
}

/// Classifier output: the verdict, the estimated limit of
/// `(1 - f(N))^{p(ln N)}`, the sampled exponent trace `(N, Lambda(N))`
/// with `Lambda = p(ln N) * ln(1 - f(N))`, and a note on how the verdict
/// was reached.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyVerdict {
    pub verdict: Verdict,
    pub limit: f64,
    pub lambda: Vec<(f64, f64)>,
    pub note: String,
}

/// Doubling grid from `n_min` to at most `n_max` (at least 5 points).
pub fn octave_grid(n_min: f64, n_max: f64) -> Result<Vec<f64>> {
    if !(n_min.is_finite() && n_min > 1.0 && n_max.is_finite() && n_max > n_min) {
        return Err(Error::invalid(format!(
            "need 1 < n_min < n_max, got [{n_min}, {n_max}]"
        )));
    }
    let mut grid = Vec::new();
    let mut n = n_min;
    while n <= n_max {
        grid.push(n);
        n *= 2.0;
    }
    if grid.len() < 5 {
        return Err(Error::invalid(format!(
            "grid from {n_min} to {n_max} has only {} octaves; need at least 5",
            grid.len()
        )));
    }
    Ok(grid)
}

/// Default margin separating "limit below 1" from "limit at 1".
pub const EFFICIENCY_MARGIN: f64 = 1e-3;

/// Classify with the default margin. See
/// [`classify_efficiency_with_margin`].
pub fn classify_efficiency(es: &EfficiencySpec, n_grid: &[f64]) -> Result<EfficiencyVerdict> {
    classify_efficiency_with_margin(es, n_grid, EFFICIENCY_MARGIN)
}

/// Evaluate `Lambda(N) = p(ln N) ln(1 - f(N))` over the grid and extrapolate
/// it to `N -> infinity` in the variable `h = 1/ln N` (Richardson-style,
/// polynomial through the last four octaves). Verdicts:
///
/// * `Efficient` when the extrapolated limit `exp(Lambda)` falls below
///   `1 - margin` and the extrapolation step is commensurate with the local
///   trend;
/// * `NotEfficient` when the exponent trace has collapsed toward zero
///   (nonincreasing, already inside the margin), forcing the limit to 1;
/// * `Inconclusive` when the data cannot be trusted either way.
///
/// A model with `f(N) >= 1` anywhere on the grid succeeds in one try there;
/// that degenerate case returns `Efficient` with limit 0 immediately.
pub fn classify_efficiency_with_margin(
    es: &EfficiencySpec,
    n_grid: &[f64],
    margin: f64,
) -> Result<EfficiencyVerdict> {
    if n_grid.len() < 5 {
        return Err(Error::invalid(format!(
            "efficiency grid needs at least 5 points, got {}",
            n_grid.len()
        )));
    }
    if !(margin.is_finite() && margin > 0.0 && margin < 1.0) {
        return Err(Error::invalid(format!("margin must be in (0, 1), got {margin}")));
    }
    if n_grid
        .windows(2)
        .any(|w| !(w[0].is_finite() && w[1].is_finite() && w[1] > w[0]))
        || n_grid[0] <= 1.0
    {
        return Err(Error::invalid(
            "efficiency grid must be finite, strictly increasing, and > 1",
        ));
    }
    let f_vals: Vec<f64> = match &es.model {
        SuccessModel::ReciprocalLog { c } => n_grid.iter().map(|&n| 1.0 / (c * n.ln())).collect(),
        SuccessModel::Reciprocal => n_grid.iter().map(|&n| 1.0 / n).collect(),
        SuccessModel::Custom { values } => {
            if values.len() != n_grid.len() {
                return Err(Error::invalid(format!(
                    "custom model has {} samples for {} grid points",
                    values.len(),
                    n_grid.len()
                )));
            }
            values.clone()
        }
    };
    for (&n, &f) in n_grid.iter().zip(&f_vals) {
        if !(f.is_finite() && f > 0.0) {
            return Err(Error::invalid(format!(
                "success probability must be in (0, 1], got f({n}) = {f}"
            )));
        }
    }
    if let Some(i) = f_vals.iter().position(|&f| f >= 1.0) {
        return Ok(EfficiencyVerdict {
            verdict: Verdict::Efficient,
            limit: 0.0,
            lambda: vec![(n_grid[i], f64::NEG_INFINITY)],
            note: format!("degenerate: f(N) >= 1 at N = {}", n_grid[i]),
        });
    }
    let mut lambda = Vec::with_capacity(n_grid.len());
    for (&n, &f) in n_grid.iter().zip(&f_vals) {
        let p = es.poly.eval(n.ln());
        if !(p.is_finite() && p > 0.0) {
            return Err(Error::invalid(format!(
                "polynomial must be positive on the grid, got p(ln {n}) = {p}"
            )));
        }
        lambda.push((n, p * (-f).ln_1p()));
    }

    let tail: Vec<(f64, f64)> = lambda[lambda.len() - 4..]
        .iter()
        .map(|&(n, l)| (1.0 / n.ln(), l))
        .collect();
    let l_last = tail[3].1;
    let l_prev = tail[2].1;

    // Collapsed exponent: |Lambda| already inside the margin and shrinking,
    // so the limit of exp(Lambda) is 1 for any smooth continuation.
    let magnitudes: Vec<f64> = tail.iter().map(|&(_, l)| l.abs()).collect();
    if magnitudes[3] <= margin && magnitudes.windows(2).all(|w| w[1] <= w[0]) {
        return Ok(EfficiencyVerdict {
            verdict: Verdict::NotEfficient,
            limit: 1.0,
            lambda,
            note: format!(
                "exponent collapsed: |Lambda| nonincreasing and {:.3e} <= margin at the last octave",
                magnitudes[3]
            ),
        });
    }

    let l_inf = neville_at_zero(&tail);
    let h_last = tail[3].0;
    let h_prev = tail[2].0;
    // The extrapolation step should match the local slope; a polynomial fit
    // through an essential singularity violates this wildly.
    let allowed = 3.0 * (l_last - l_prev).abs() * h_last / (h_prev - h_last) + 1e-12;
    let step = (l_inf - l_last).abs();
    if step > allowed {
        return Ok(EfficiencyVerdict {
            verdict: Verdict::Inconclusive,
            limit: l_inf.exp(),
            lambda,
            note: format!(
                "extrapolation distrusted: step {step:.3e} exceeds trend-allowed {allowed:.3e}"
            ),
        });
    }
    let limit = l_inf.exp();
    if limit < 1.0 - margin {
        Ok(EfficiencyVerdict {
            verdict: Verdict::Efficient,
            limit,
            lambda,
            note: format!("extrapolated exponent {l_inf:.6} stays below the margin"),
        })
    } else {
        Ok(EfficiencyVerdict {
            verdict: Verdict::Inconclusive,
            limit,
            lambda,
            note: format!(
                "extrapolated limit {limit:.6} within margin of 1 but the exponent has not collapsed"
            ),
        })
    }
}

/// Polynomial extrapolation of `(h, value)` pairs to `h = 0` (Neville).
fn neville_at_zero(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len();
    let x: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let mut v: Vec<f64> = pts.iter().map(|p| p.1).collect();
    for j in 1..n {
        for i in 0..n - j {
            v[i] = (-x[i + j] * v[i] + x[i] * v[i + 1]) / (x[i] - x[i + j]);
        }
    }
    v[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_examples() {
        assert_eq!(multiplicative_order(7, 15).unwrap(), 4);
        assert_eq!(multiplicative_order(1, 15).unwrap(), 1);
        assert_eq!(multiplicative_order(2, 21).unwrap(), 6);
        let err = multiplicative_order(6, 15).unwrap_err().to_string();
        assert!(err.contains("3"), "gcd should be named: {err}");
    }

    #[test]
    fn totient_examples() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(4), 2);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(7), 6);
    }

    #[test]
    fn instance_validation() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        assert_eq!(inst.order(), 4);
        assert_eq!(inst.register_width(), 8);
        assert!(ShorInstance::new(15, 7, 8).is_err()); // q < n
        assert!(ShorInstance::new(16, 3, 256).is_err()); // even
        assert!(ShorInstance::new(7, 3, 49).is_err()); // prime
        assert!(ShorInstance::new(15, 5, 256).is_err()); // shared factor
        assert!(ShorInstance::new(15, 1, 256).is_err()); // x = 1
        assert!(ShorInstance::new(9, 2, 1 << 17).is_err()); // q too large
        let toy = ShorInstance::new_diagnostic(9, 8, 4).unwrap();
        assert_eq!(toy.order(), 2);
    }

    #[test]
    fn ideal_distribution_peaks_at_multiples_of_q_over_r() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        let dist = shor_distribution(&inst).unwrap();
        assert!((dist.total() - 1.0).abs() < 1e-9);
        for c in (0..256).step_by(64) {
            for k in 0..4 {
                assert!((dist.p(c, k) - 1.0 / 16.0).abs() < 1e-12, "peak at ({c}, {k})");
            }
        }
        for c in 0..256u64 {
            if c % 64 != 0 {
                assert!(dist.marginal_c(c) < 1e-24, "off-peak c = {c}");
            }
        }
    }

    #[test]
    fn degenerate_single_entry() {
        let inst = ShorInstance::new_diagnostic(3, 1, 1).unwrap();
        let dist = shor_distribution(&inst).unwrap();
        assert_eq!(dist.q(), 1);
        assert_eq!(dist.r(), 1);
        assert_eq!(dist.p(0, 0), 1.0);
    }

    #[test]
    fn toy_distribution_by_hand() {
        // q = 4, r = 2: class sums are 1 + (-1)^c within each parity class
        let inst = ShorInstance::new_diagnostic(9, 8, 4).unwrap();
        let dist = shor_distribution(&inst).unwrap();
        for k in 0..2 {
            assert!((dist.p(0, k) - 0.25).abs() < 1e-15);
            assert!((dist.p(2, k) - 0.25).abs() < 1e-15);
            assert!(dist.p(1, k).abs() < 1e-30);
            assert!(dist.p(3, k).abs() < 1e-30);
        }
        let report = success_probability(&dist, &inst).unwrap();
        assert_eq!(report.good_c, vec![2]);
        assert!((report.success - 0.5).abs() < 1e-15);
        assert!((report.lower_bound - 0.5).abs() < 1e-15);
    }

    #[test]
    fn work_cap_is_enforced() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        assert!(matches!(
            shor_distribution_with_cap(&inst, 10),
            Err(Error::Resource(_))
        ));
        assert!(matches!(
            shor_distribution_decohered_with_cap(&inst, &DecoherenceKernel::Isolated, 1000),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn isolated_kernel_reproduces_ideal_distribution() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        let plain = shor_distribution(&inst).unwrap();
        let decohered =
            shor_distribution_decohered(&inst, &DecoherenceKernel::Isolated).unwrap();
        for (c, k, p) in plain.entries() {
            assert!(
                (p - decohered.p(c, k)).abs() <= 1e-12,
                "mismatch at ({c}, {k})"
            );
        }
        assert_eq!(decohered.clipped_negative(), 0);
    }

    #[test]
    fn complete_delta_flattens_to_class_counts() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        let dist =
            shor_distribution_decohered(&inst, &DecoherenceKernel::CompleteDelta).unwrap();
        let bound = 1.0 / (256.0 * 4.0);
        for (c, k, p) in dist.entries() {
            assert!((p - 64.0 / 65536.0).abs() < 1e-18, "({c}, {k})");
            assert!(p <= bound + 1e-12);
        }
        assert!((dist.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn success_region_for_reference_instance() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        let dist = shor_distribution(&inst).unwrap();
        let report = success_probability(&dist, &inst).unwrap();
        assert_eq!(report.good_c, vec![64, 192]);
        assert!((report.success - 0.5).abs() < 1e-12);
        assert!(report.success >= 1.0 / (3.0 * 15.0f64.ln()));
        assert!((report.lower_bound - 0.5).abs() < 1e-12);
        assert!(report.q_at_least_n_squared); // 256 >= 225
        assert!(report.totient_at_most_n);
        // complete decoherence kills the success probability down to phi(r)/q
        let flat =
            shor_distribution_decohered(&inst, &DecoherenceKernel::CompleteDelta).unwrap();
        let flat_report = success_probability(&flat, &inst).unwrap();
        assert!(flat_report.success <= totient(4) as f64 / 256.0 + 1e-15);
    }

    #[test]
    fn success_rejects_order_one_and_mismatch() {
        let toy = ShorInstance::new_diagnostic(3, 1, 4).unwrap();
        let dist = shor_distribution(&toy).unwrap();
        assert!(success_probability(&dist, &toy).is_err());
        let other = ShorInstance::new(15, 7, 256).unwrap();
        assert!(success_probability(&dist, &other).is_err());
    }

    #[test]
    fn bath_kernel_at_time_zero_is_isolated() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        let modes = vec![BathMode::new(1.0, 0.4).unwrap(), BathMode::new(2.3, 0.2).unwrap()];
        let kernel = DecoherenceKernel::two_level_uniform(&inst, modes, 0.0).unwrap();
        let dist = shor_distribution_decohered(&inst, &kernel).unwrap();
        let plain = shor_distribution(&inst).unwrap();
        for (c, k, p) in plain.entries() {
            assert!((p - dist.p(c, k)).abs() <= 1e-12);
        }
    }

    #[test]
    fn bath_kernel_normalization_and_positivity() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        let modes: Vec<BathMode> = (0..4)
            .map(|i| BathMode::new(0.8 + 0.37 * i as f64, 0.5).unwrap())
            .collect();
        for &t in &[0.4, 1.1, 3.7] {
            let kernel =
                DecoherenceKernel::two_level_uniform(&inst, modes.clone(), t).unwrap();
            let dist = shor_distribution_decohered(&inst, &kernel).unwrap();
            assert!((dist.total() - 1.0).abs() < 1e-9, "t = {t}");
            assert!(dist.entries().all(|(_, _, p)| p >= 0.0));
        }
    }

    #[test]
    fn kernel_width_mismatch_is_rejected() {
        let inst = ShorInstance::new(15, 7, 256).unwrap();
        let kernel = DecoherenceKernel::TwoLevelBath {
            spec: RegisterSpec::uniform_couplings(4).unwrap(),
            modes: vec![BathMode::new(1.0, 0.1).unwrap()],
            t: 1.0,
        };
        assert!(shor_distribution_decohered(&inst, &kernel).is_err());
    }

    #[test]
    fn polynomial_eval() {
        let p = Polynomial::new(vec![1.0, -2.0, 0.5]).unwrap();
        assert_eq!(p.eval(0.0), 1.0);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 2.0);
        assert!(Polynomial::new(vec![]).is_err());
        assert!(Polynomial::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn octave_grid_shape() {
        let grid = octave_grid(16.0, 1e12).unwrap();
        assert_eq!(grid[0], 16.0);
        assert!(grid.len() >= 30);
        assert!(*grid.last().unwrap() <= 1e12);
        assert!(grid.last().unwrap() * 2.0 > 1e12);
        assert!(octave_grid(16.0, 100.0).is_err()); // too few octaves
        assert!(octave_grid(0.5, 1e6).is_err());
    }

    #[test]
    fn classifier_finds_the_reciprocal_log_limit() {
        let es = EfficiencySpec::new(
            SuccessModel::ReciprocalLog { c: 3.0 },
            Polynomial::new(vec![0.0, 3.0]).unwrap(),
        )
        .unwrap();
        let grid = octave_grid(16.0, 1e12).unwrap();
        let out = classify_efficiency(&es, &grid).unwrap();
        assert_eq!(out.verdict, Verdict::Efficient);
        assert!(
            (out.limit - (-1.0f64).exp()).abs() < 1e-3,
            "limit {} vs 1/e",
            out.limit
        );
    }

    #[test]
    fn classifier_rejects_reciprocal_success() {
        let grid = octave_grid(16.0, 1e12).unwrap();
        for degree in 1..=6usize {
            let mut coeffs = vec![0.0; degree + 1];
            coeffs[degree] = 1.0;
            let es = EfficiencySpec::new(
                SuccessModel::Reciprocal,
                Polynomial::new(coeffs).unwrap(),
            )
            .unwrap();
            let out = classify_efficiency(&es, &grid).unwrap();
            assert_eq!(out.verdict, Verdict::NotEfficient, "degree {degree}");
            assert_eq!(out.limit, 1.0);
        }
    }

    #[test]
    fn classifier_degenerate_certain_success() {
        let grid = octave_grid(16.0, 1e12).unwrap();
        let es = EfficiencySpec::new(
            SuccessModel::Custom {
                values: vec![1.0; grid.len()],
            },
            Polynomial::new(vec![0.0, 1.0]).unwrap(),
        )
        .unwrap();
        let out = classify_efficiency(&es, &grid).unwrap();
        assert_eq!(out.verdict, Verdict::Efficient);
        assert_eq!(out.limit, 0.0);
    }

    #[test]
    fn classifier_scaled_polynomial_still_efficient() {
        // doubling the polynomial squares the limit but keeps it below 1
        let es = EfficiencySpec::new(
            SuccessModel::ReciprocalLog { c: 3.0 },
            Polynomial::new(vec![0.0, 6.0]).unwrap(),
        )
        .unwrap();
        let grid = octave_grid(16.0, 1e12).unwrap();
        let out = classify_efficiency(&es, &grid).unwrap();
        assert_eq!(out.verdict, Verdict::Efficient);
        assert!((out.limit - (-2.0f64).exp()).abs() < 1e-3);
    }

    #[test]
    fn classifier_input_validation() {
        let es = EfficiencySpec::new(
            SuccessModel::Reciprocal,
            Polynomial::new(vec![0.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert!(classify_efficiency(&es, &[2.0, 4.0, 8.0]).is_err());
        let bad_poly = EfficiencySpec::new(
            SuccessModel::Reciprocal,
            Polynomial::new(vec![-5.0]).unwrap(),
        )
        .unwrap();
        let grid = octave_grid(16.0, 1e12).unwrap();
        assert!(classify_efficiency(&bad_poly, &grid).is_err());
        let short = EfficiencySpec::new(
            SuccessModel::Custom { values: vec![0.5] },
            Polynomial::new(vec![0.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert!(classify_efficiency(&short, &grid).is_err());
    }
}
