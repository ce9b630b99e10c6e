//! Scenario runner: every engine capability behind one binary.
//!
//! Each subcommand accepts `--config FILE`, a JSON document whose
//! `"scenario"` tag names the scenario kind and whose remaining keys mirror
//! the long flag names (kebab-case). Command-line flags always win over
//! config values. Table output (CSV) goes to `--output` or stdout;
//! human-readable reports go to stderr, except for `feasibility` and
//! `inspect`, whose report is the whole output.
//!
//! Exit codes: 0 success, 2 invalid input, 3 resource cap, 4 numeric
//! failure, 1 I/O trouble. `DECOHERE_THREADS` caps internal parallelism.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Deserialize;

use crate::csvio;
use crate::decoherence::{
    estimate_decoherence_time, feasibility, geometric_time_grid, sweep_thermal_product,
    DephasingCurve, FeasibilityInput,
};
use crate::density::{evolve_reduced, oracle_full_evolution, SystemState};
use crate::environment::{
    parse_two_columns, BathMode, DiscreteBath, SpectralDensity, ThermalState,
};
use crate::error::{Error, Result};
use crate::registers::{decompose_subspaces_with_tol, register_coupling_matrix, RegisterSpec,
    DEFAULT_ROW_TOL};
use crate::shor::{
    classify_efficiency_with_margin, octave_grid, shor_distribution,
    shor_distribution_decohered, success_probability, DecoherenceKernel, EfficiencySpec,
    Polynomial, ShorInstance, SuccessModel, EFFICIENCY_MARGIN,
};

/// A parsed scenario configuration (one JSON document).
#[derive(Debug, Clone, PartialEq)]
pub enum ScenarioConfig {
    FactorSweep(FactorSweepParams),
    Spectrum(SpectrumParams),
    Dfs(DfsParams),
    Density(DensityParams),
    Shor(ShorParams),
    Efficiency(EfficiencyParams),
    Feasibility(FeasibilityParams),
}

impl ScenarioConfig {
    /// The `"scenario"` tag naming this kind.
    pub fn scenario(&self) -> &'static str {
        match self {
            ScenarioConfig::FactorSweep(_) => "factor-sweep",
            ScenarioConfig::Spectrum(_) => "spectrum",
            ScenarioConfig::Dfs(_) => "dfs",
            ScenarioConfig::Density(_) => "density",
            ScenarioConfig::Shor(_) => "shor",
            ScenarioConfig::Efficiency(_) => "efficiency",
            ScenarioConfig::Feasibility(_) => "feasibility",
        }
    }

    /// Parse a config document, dispatching on its `"scenario"` tag.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::invalid(format!("config is not valid JSON: {e}")))?;
        let tag = value
            .get("scenario")
            .and_then(|v| v.as_str())
            .ok_or_else(|| Error::invalid("config must carry a string 'scenario' field"))?
            .to_string();
        let parsed = match tag.as_str() {
            "factor-sweep" => ScenarioConfig::FactorSweep(from_value(value)?),
            "spectrum" => ScenarioConfig::Spectrum(from_value(value)?),
            "dfs" => ScenarioConfig::Dfs(from_value(value)?),
            "density" => ScenarioConfig::Density(from_value(value)?),
            "shor" => ScenarioConfig::Shor(from_value(value)?),
            "efficiency" => ScenarioConfig::Efficiency(from_value(value)?),
            "feasibility" => ScenarioConfig::Feasibility(from_value(value)?),
            other => {
                return Err(Error::invalid(format!(
                    "unknown scenario '{other}' (expected factor-sweep, spectrum, dfs, \
                     density, shor, efficiency, or feasibility)"
                )))
            }
        };
        Ok(parsed)
    }
}

fn from_value<T: serde::de::DeserializeOwned>(value: serde_json::Value) -> Result<T> {
    serde_json::from_value(value).map_err(|e| Error::invalid(format!("config: {e}")))
}

/// Execute one scenario: validate, compute, emit files. See the module doc
/// for output routing.
pub fn run(config: &ScenarioConfig) -> Result<()> {
    match config {
        ScenarioConfig::FactorSweep(p) => run_factor(p),
        ScenarioConfig::Spectrum(p) => run_spectrum(p),
        ScenarioConfig::Dfs(p) => run_dfs(p),
        ScenarioConfig::Density(p) => run_density(p),
        ScenarioConfig::Shor(p) => run_shor(p),
        ScenarioConfig::Efficiency(p) => run_efficiency(p),
        ScenarioConfig::Feasibility(p) => run_feasibility(p),
    }
}

// ---------------------------------------------------------------------------
// scenario parameter sets (JSON keys = kebab-case of the field names)
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FactorSweepParams {
    pub scenario: Option<String>,
    pub omega: Option<f64>,
    pub g: Option<f64>,
    pub n_modes: Option<usize>,
    pub bath: Option<PathBuf>,
    pub xi_a: Option<f64>,
    pub xi_b: Option<f64>,
    pub beta: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct SpectrumParams {
    pub scenario: Option<String>,
    pub kind: Option<String>,
    pub gamma: Option<f64>,
    pub eta: Option<f64>,
    pub samples: Option<PathBuf>,
    pub cutoff: Option<f64>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub fit: Option<bool>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DfsParams {
    pub scenario: Option<String>,
    pub lambdas: Option<Vec<f64>>,
    pub etas: Option<Vec<f64>>,
    pub matrix: Option<PathBuf>,
    pub tol: Option<f64>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DensityParams {
    pub scenario: Option<String>,
    pub lambdas: Option<Vec<f64>>,
    pub etas: Option<Vec<f64>>,
    pub state: Option<PathBuf>,
    pub omega: Option<f64>,
    pub g: Option<f64>,
    pub n_modes: Option<usize>,
    pub bath: Option<PathBuf>,
    pub beta: Option<f64>,
    pub t: Option<f64>,
    pub oracle: Option<bool>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ShorParams {
    pub scenario: Option<String>,
    pub n: Option<u64>,
    pub x: Option<u64>,
    pub q: Option<u64>,
    pub kernel: Option<String>,
    pub omega: Option<f64>,
    pub g: Option<f64>,
    pub n_modes: Option<usize>,
    pub bath: Option<PathBuf>,
    pub t: Option<f64>,
    pub diagnostic: Option<bool>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct EfficiencyParams {
    pub scenario: Option<String>,
    pub model: Option<String>,
    pub c: Option<f64>,
    pub poly: Option<Vec<f64>>,
    pub values: Option<PathBuf>,
    pub n_min: Option<f64>,
    pub n_max: Option<f64>,
    pub margin: Option<f64>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct FeasibilityParams {
    pub scenario: Option<String>,
    pub qubits: Option<usize>,
    pub tau: Option<f64>,
    pub gates: Option<u64>,
    pub td: Option<f64>,
}

// ---------------------------------------------------------------------------
// shared plumbing
// ---------------------------------------------------------------------------

fn require<T>(value: Option<T>, name: &str) -> Result<T> {
    value.ok_or_else(|| Error::invalid(format!("missing required parameter: {name}")))
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(fs::File::create(p)?)),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

/// A bath comes either from a two-column file or from uniform parameters.
fn resolve_bath(
    bath: Option<&Path>,
    omega: Option<f64>,
    g: Option<f64>,
    n_modes: Option<usize>,
) -> Result<Vec<BathMode>> {
    if let Some(path) = bath {
        let text = fs::read_to_string(path)?;
        return Ok(DiscreteBath::from_text(&text)?.modes().to_vec());
    }
    let omega = require(omega, "omega (or a bath file)")?;
    let g = require(g, "g (or a bath file)")?;
    Ok(DiscreteBath::uniform(n_modes.unwrap_or(1), omega, g)?
        .modes()
        .to_vec())
}

fn resolve_thermal(beta: Option<f64>) -> Result<ThermalState> {
    match beta {
        Some(b) => ThermalState::with_beta(b),
        None => Ok(ThermalState::vacuum()),
    }
}

fn load_state(path: &Path) -> Result<SystemState> {
    let pairs = parse_two_columns(&fs::read_to_string(path)?)?;
    let amps: Vec<Complex64> = pairs
        .into_iter()
        .map(|(re, im)| Complex64::new(re, im))
        .collect();
    SystemState::new(amps)
}

fn linear_grid(t_max: f64, points: usize) -> Result<Vec<f64>> {
    if !(t_max.is_finite() && t_max > 0.0) {
        return Err(Error::invalid(format!("t-max must be > 0, got {t_max}")));
    }
    if points < 2 {
        return Err(Error::invalid("points must be at least 2"));
    }
    Ok((0..points)
        .map(|i| t_max * i as f64 / (points - 1) as f64)
        .collect())
}

// ---------------------------------------------------------------------------
// scenario executors
// ---------------------------------------------------------------------------

fn run_factor(p: &FactorSweepParams) -> Result<()> {
    let modes = resolve_bath(p.bath.as_deref(), p.omega, p.g, p.n_modes)?;
    let xi_a = require(p.xi_a, "xi-a")?;
    let xi_b = require(p.xi_b, "xi-b")?;
    let th = resolve_thermal(p.beta)?;
    let times = linear_grid(p.t_max.unwrap_or(10.0), p.points.unwrap_or(200))?;
    let factors = sweep_thermal_product(&modes, xi_a, xi_b, &th, &times);
    let mut out = open_output(p.output.as_deref())?;
    csvio::write_factor_sweep(&mut out, &times, &factors)?;
    out.flush()?;
    Ok(())
}

fn run_spectrum(p: &SpectrumParams) -> Result<()> {
    let cutoff = require(p.cutoff, "cutoff")?;
    let kind = require(p.kind.as_deref(), "kind")?;
    let sd = match kind {
        "flat" => SpectralDensity::flat_gamma(require(p.gamma, "gamma")?, cutoff)?,
        "ohmic" => SpectralDensity::ohmic(require(p.eta, "eta")?, cutoff)?,
        "tabulated" => {
            let path = require(p.samples.as_deref(), "samples")?;
            SpectralDensity::tabulated_from_text(&fs::read_to_string(path)?, cutoff)?
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown spectral kind '{other}' (expected flat, ohmic, or tabulated)"
            )))
        }
    };
    let times = geometric_time_grid(
        p.t_min.unwrap_or(1e-3),
        p.t_max.unwrap_or(5.0),
        p.points.unwrap_or(200),
    )?;
    let curve = DephasingCurve::from_spectral_density(&sd, &times)?;
    let mut out = open_output(p.output.as_deref())?;
    csvio::write_exponent_curve(&mut out, &curve)?;
    out.flush()?;
    if p.fit.unwrap_or(false) {
        let samples: Vec<(f64, f64)> = curve
            .times
            .iter()
            .zip(&curve.exponents)
            .map(|(&t, &s)| (t, (-s).exp()))
            .collect();
        let fit = estimate_decoherence_time(&samples)?;
        eprintln!(
            "fit: rate={} decoherence_time={} residual={}",
            csvio::fmt_f64(fit.rate),
            csvio::fmt_f64(fit.decoherence_time),
            csvio::fmt_f64(fit.residual)
        );
    }
    Ok(())
}

fn run_dfs(p: &DfsParams) -> Result<()> {
    let tol = p.tol.unwrap_or(DEFAULT_ROW_TOL);
    let mut out = open_output(p.output.as_deref())?;
    let n_groups = if let Some(path) = &p.matrix {
        let cm = crate::registers::CouplingMatrix::from_text(&fs::read_to_string(path)?)?;
        let decomposition = decompose_subspaces_with_tol(&cm, tol)?;
        csvio::write_subspace_groups(&mut out, &decomposition)?;
        decomposition.n_groups()
    } else {
        let lambdas = require(p.lambdas.clone(), "lambdas (or a matrix file)")?;
        let etas = p.etas.clone().unwrap_or_else(|| vec![0.0; lambdas.len()]);
        let spec = RegisterSpec::new(lambdas, etas)?;
        let cm = register_coupling_matrix(&spec)?;
        let decomposition = decompose_subspaces_with_tol(&cm, tol)?;
        csvio::write_subspaces(&mut out, &decomposition, &spec)?;
        decomposition.n_groups()
    };
    out.flush()?;
    eprintln!("groups: {n_groups}");
    Ok(())
}

fn run_density(p: &DensityParams) -> Result<()> {
    let lambdas = require(p.lambdas.clone(), "lambdas")?;
    let etas = p.etas.clone().unwrap_or_else(|| vec![0.0; lambdas.len()]);
    let spec = RegisterSpec::new(lambdas, etas)?;
    let state = match &p.state {
        Some(path) => load_state(path)?,
        None => SystemState::uniform(spec.len())?,
    };
    let modes = resolve_bath(p.bath.as_deref(), p.omega, p.g, p.n_modes)?;
    let th = resolve_thermal(p.beta)?;
    let t = p.t.unwrap_or(1.0);
    let rho = evolve_reduced(&state, &spec, &modes, &th, t)?;
    let mut out = open_output(p.output.as_deref())?;
    csvio::write_density(&mut out, &rho)?;
    out.flush()?;
    eprintln!("purity={}", csvio::fmt_f64(rho.purity()));
    if p.oracle.unwrap_or(false) {
        if !th.is_vacuum() {
            return Err(Error::invalid(
                "the full-evolution oracle only covers the vacuum state (omit beta)",
            ));
        }
        let slow = oracle_full_evolution(&state, &spec, &modes, t)?;
        let mut worst = 0.0f64;
        for i in 0..rho.dim() {
            for j in 0..rho.dim() {
                worst = worst.max((rho.element(i, j) - slow.element(i, j)).norm());
            }
        }
        eprintln!("oracle_max_diff={}", csvio::fmt_f64(worst));
    }
    Ok(())
}

fn run_shor(p: &ShorParams) -> Result<()> {
    let n = require(p.n, "n")?;
    let x = require(p.x, "x")?;
    let q = require(p.q, "q")?;
    let inst = if p.diagnostic.unwrap_or(false) {
        ShorInstance::new_diagnostic(n, x, q)?
    } else {
        ShorInstance::new(n, x, q)?
    };
    let kernel_name = p.kernel.as_deref().unwrap_or("isolated");
    let dist = match kernel_name {
        "isolated" => shor_distribution(&inst)?,
        "complete-delta" => shor_distribution_decohered(&inst, &DecoherenceKernel::CompleteDelta)?,
        "two-level" => {
            let modes = resolve_bath(p.bath.as_deref(), p.omega, p.g, p.n_modes)?;
            let t = require(p.t, "t")?;
            let kernel = DecoherenceKernel::two_level_uniform(&inst, modes, t)?;
            shor_distribution_decohered(&inst, &kernel)?
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown kernel '{other}' (expected isolated, complete-delta, or two-level)"
            )))
        }
    };
    let mut out = open_output(p.output.as_deref())?;
    csvio::write_distribution(&mut out, &dist)?;
    out.flush()?;
    eprintln!("order r={}", inst.order());
    eprintln!("clipped_negative={}", dist.clipped_negative());
    if inst.order() == 1 {
        eprintln!("success undefined for order r = 1");
        return Ok(());
    }
    let report = success_probability(&dist, &inst)?;
    eprintln!("success={}", csvio::fmt_f64(report.success));
    eprintln!("lower_bound={}", csvio::fmt_f64(report.lower_bound));
    eprintln!("min_good={}", csvio::fmt_f64(report.min_good));
    let good: Vec<String> = report.good_c.iter().map(|c| c.to_string()).collect();
    eprintln!("good_c={}", good.join(","));
    eprintln!("q_at_least_n_squared={}", report.q_at_least_n_squared);
    eprintln!("totient_at_most_n={}", report.totient_at_most_n);
    Ok(())
}

fn run_efficiency(p: &EfficiencyParams) -> Result<()> {
    let poly = Polynomial::new(p.poly.clone().unwrap_or_else(|| vec![0.0, 3.0]))?;
    let model_name = p.model.as_deref().unwrap_or("reciprocal-log");
    let (model, grid) = match model_name {
        "reciprocal-log" => {
            let model = SuccessModel::ReciprocalLog {
                c: p.c.unwrap_or(3.0),
            };
            (model, default_grid(p)?)
        }
        "reciprocal" => (SuccessModel::Reciprocal, default_grid(p)?),
        "custom" => {
            let path = require(p.values.as_deref(), "values")?;
            let pairs = parse_two_columns(&fs::read_to_string(path)?)?;
            let grid: Vec<f64> = pairs.iter().map(|&(n, _)| n).collect();
            let values: Vec<f64> = pairs.iter().map(|&(_, f)| f).collect();
            (SuccessModel::Custom { values }, grid)
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown model '{other}' (expected reciprocal-log, reciprocal, or custom)"
            )))
        }
    };
    let es = EfficiencySpec::new(model, poly)?;
    let margin = p.margin.unwrap_or(EFFICIENCY_MARGIN);
    let verdict = classify_efficiency_with_margin(&es, &grid, margin)?;
    let mut out = open_output(p.output.as_deref())?;
    csvio::write_lambda_trace(&mut out, &verdict.lambda)?;
    out.flush()?;
    eprintln!(
        "verdict={} limit={} note={}",
        verdict.verdict,
        csvio::fmt_f64(verdict.limit),
        verdict.note
    );
    Ok(())
}

fn default_grid(p: &EfficiencyParams) -> Result<Vec<f64>> {
    octave_grid(p.n_min.unwrap_or(16.0), p.n_max.unwrap_or(1e12))
}

fn run_feasibility(p: &FeasibilityParams) -> Result<()> {
    let input = FeasibilityInput::new(
        require(p.qubits, "L (qubits)")?,
        require(p.tau, "tau")?,
        require(p.gates, "K (gates)")?,
        require(p.td, "td")?,
    )?;
    println!("{}", feasibility(&input).report_line());
    Ok(())
}

fn run_inspect(path: &Path) -> Result<()> {
    let file = fs::File::open(path)?;
    let table = csvio::read_csv(BufReader::new(file))?;
    print!("{}", csvio::summarize(&table));
    Ok(())
}

// ---------------------------------------------------------------------------
// command line
// ---------------------------------------------------------------------------

#[derive(Debug, Parser)]
#[command(
    name = "decohere",
    version,
    about = "Dephasing decoherence models: factors, density matrices, subspaces, \
             order-finding statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the decohering factor of a coupling pair over time
    Factor(FactorArgs),
    /// Dephasing exponent S(t) of a continuum spectral density
    Spectrum(SpectrumArgs),
    /// Decoherence-free subspace decomposition of a register
    Dfs(DfsArgs),
    /// Reduced density matrix after dephasing for a time t
    Density(DensityArgs),
    /// Order-finding readout distribution, with optional decoherence kernel
    Shor(ShorArgs),
    /// Efficiency-lemma classification of a success-probability model
    Efficiency(EfficiencyArgs),
    /// Compare runtime L^2*tau*K against a decoherence time
    Feasibility(FeasibilityArgs),
    /// Summarize a CSV file written by this tool
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
struct FactorArgs {
    /// JSON scenario config (flags override its values)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Mode frequency for a uniform bath
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    /// Coupling strength for a uniform bath
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    /// Number of identical modes in the uniform bath
    #[arg(long)]
    n_modes: Option<usize>,
    /// Bath file: one "omega g" pair per line (overrides omega/g/n-modes)
    #[arg(long)]
    bath: Option<PathBuf>,
    /// Net coupling of the first label
    #[arg(long, allow_negative_numbers = true)]
    xi_a: Option<f64>,
    /// Net coupling of the second label
    #[arg(long, allow_negative_numbers = true)]
    xi_b: Option<f64>,
    /// Inverse temperature (omit for the vacuum)
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// End of the linear time grid
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    /// Number of grid points
    #[arg(long)]
    points: Option<usize>,
    /// CSV destination (stdout when omitted)
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spectral kind: flat, ohmic, or tabulated
    #[arg(long)]
    kind: Option<String>,
    /// Band weight for kind=flat
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    /// Slope parameter for kind=ohmic
    #[arg(long, allow_negative_numbers = true)]
    eta: Option<f64>,
    /// Sample file for kind=tabulated: "omega weight" per line
    #[arg(long)]
    samples: Option<PathBuf>,
    /// Band cutoff frequency
    #[arg(long, allow_negative_numbers = true)]
    cutoff: Option<f64>,
    /// Start of the geometric time grid
    #[arg(long, allow_negative_numbers = true)]
    t_min: Option<f64>,
    /// End of the geometric time grid
    #[arg(long, allow_negative_numbers = true)]
    t_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Also fit an exponential decay rate to the curve (report on stderr)
    #[arg(long)]
    fit: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DfsArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Per-qubit couplings, comma separated (e.g. 1,1,0.5)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambdas: Option<Vec<f64>>,
    /// Per-qubit level splittings (defaults to zeros)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    etas: Option<Vec<f64>>,
    /// Coupling matrix file (one row of numbers per label) instead of lambdas
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Entrywise tolerance for grouping coupling rows
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DensityArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    lambdas: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    etas: Option<Vec<f64>>,
    /// Initial amplitudes file: "re im" per line (default: uniform state)
    #[arg(long)]
    state: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    bath: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// Evolution time
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Cross-check against the full system+bath simulation (vacuum only)
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ShorArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Odd composite to factor
    #[arg(long)]
    n: Option<u64>,
    /// Base coprime to n
    #[arg(long)]
    x: Option<u64>,
    /// Readout register size
    #[arg(long)]
    q: Option<u64>,
    /// Kernel: isolated, complete-delta, or two-level
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    g: Option<f64>,
    #[arg(long)]
    n_modes: Option<usize>,
    #[arg(long)]
    bath: Option<PathBuf>,
    /// Bath evolution time for the two-level kernel
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
    /// Allow toy instances (skips the composite and q >= n checks)
    #[arg(long)]
    diagnostic: bool,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EfficiencyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Success model: reciprocal-log, reciprocal, or custom
    #[arg(long)]
    model: Option<String>,
    /// Coefficient in f(N) = 1/(c ln N) for model=reciprocal-log
    #[arg(long, allow_negative_numbers = true)]
    c: Option<f64>,
    /// Polynomial coefficients, ascending (e.g. 0,3 for 3x)
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    poly: Option<Vec<f64>>,
    /// Sample file for model=custom: "N f(N)" per line (defines the grid)
    #[arg(long)]
    values: Option<PathBuf>,
    /// Smallest N of the doubling grid
    #[arg(long, allow_negative_numbers = true)]
    n_min: Option<f64>,
    /// Largest N of the doubling grid
    #[arg(long, allow_negative_numbers = true)]
    n_max: Option<f64>,
    /// Margin separating "limit below 1" from "limit at 1"
    #[arg(long, allow_negative_numbers = true)]
    margin: Option<f64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FeasibilityArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Register width
    #[arg(long = "L", visible_alias = "qubits")]
    qubits: Option<usize>,
    /// Single-gate duration
    #[arg(long, allow_negative_numbers = true)]
    tau: Option<f64>,
    /// Gate count
    #[arg(long = "K", visible_alias = "gates")]
    gates: Option<u64>,
    /// Available decoherence time
    #[arg(long, allow_negative_numbers = true)]
    td: Option<f64>,
}

#[derive(Debug, Args)]
struct InspectArgs {
    /// CSV file written by this tool
    file: PathBuf,
}

fn load_config<T: serde::de::DeserializeOwned + Default>(
    path: Option<&Path>,
    scenario: &str,
) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::invalid(format!("config {}: not valid JSON: {e}", path.display())))?;
    match value.get("scenario").and_then(|v| v.as_str()) {
        Some(tag) if tag == scenario => {}
        Some(tag) => {
            return Err(Error::invalid(format!(
                "config is for scenario '{tag}' but this subcommand runs '{scenario}'"
            )))
        }
        None => return Err(Error::invalid("config must carry a string 'scenario' field")),
    }
    from_value(value)
}

fn init_threads() -> Result<()> {
    match std::env::var("DECOHERE_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                Error::invalid(format!("DECOHERE_THREADS must be a positive integer, got '{raw}'"))
            })?;
            if n == 0 {
                return Err(Error::invalid("DECOHERE_THREADS must be at least 1"));
            }
            // a second initialization (e.g. in-process reuse) keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(())
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Factor(a) => {
            let mut p: FactorSweepParams = load_config(a.config.as_deref(), "factor-sweep")?;
            p.omega = a.omega.or(p.omega);
            p.g = a.g.or(p.g);
            p.n_modes = a.n_modes.or(p.n_modes);
            p.bath = a.bath.or(p.bath);
            p.xi_a = a.xi_a.or(p.xi_a);
            p.xi_b = a.xi_b.or(p.xi_b);
            p.beta = a.beta.or(p.beta);
            p.t_max = a.t_max.or(p.t_max);
            p.points = a.points.or(p.points);
            p.output = a.output.or(p.output);
            run(&ScenarioConfig::FactorSweep(p))
        }
        Command::Spectrum(a) => {
            let mut p: SpectrumParams = load_config(a.config.as_deref(), "spectrum")?;
            p.kind = a.kind.or(p.kind);
            p.gamma = a.gamma.or(p.gamma);
            p.eta = a.eta.or(p.eta);
            p.samples = a.samples.or(p.samples);
            p.cutoff = a.cutoff.or(p.cutoff);
            p.t_min = a.t_min.or(p.t_min);
            p.t_max = a.t_max.or(p.t_max);
            p.points = a.points.or(p.points);
            if a.fit {
                p.fit = Some(true);
            }
            p.output = a.output.or(p.output);
            run(&ScenarioConfig::Spectrum(p))
        }
        Command::Dfs(a) => {
            let mut p: DfsParams = load_config(a.config.as_deref(), "dfs")?;
            p.lambdas = a.lambdas.or(p.lambdas);
            p.etas = a.etas.or(p.etas);
            p.matrix = a.matrix.or(p.matrix);
            p.tol = a.tol.or(p.tol);
            p.output = a.output.or(p.output);
            run(&ScenarioConfig::Dfs(p))
        }
        Command::Density(a) => {
            let mut p: DensityParams = load_config(a.config.as_deref(), "density")?;
            p.lambdas = a.lambdas.or(p.lambdas);
            p.etas = a.etas.or(p.etas);
            p.state = a.state.or(p.state);
            p.omega = a.omega.or(p.omega);
            p.g = a.g.or(p.g);
            p.n_modes = a.n_modes.or(p.n_modes);
            p.bath = a.bath.or(p.bath);
            p.beta = a.beta.or(p.beta);
            p.t = a.t.or(p.t);
            if a.oracle {
                p.oracle = Some(true);
            }
            p.output = a.output.or(p.output);
            run(&ScenarioConfig::Density(p))
        }
        Command::Shor(a) => {
            let mut p: ShorParams = load_config(a.config.as_deref(), "shor")?;
            p.n = a.n.or(p.n);
            p.x = a.x.or(p.x);
            p.q = a.q.or(p.q);
            p.kernel = a.kernel.or(p.kernel);
            p.omega = a.omega.or(p.omega);
            p.g = a.g.or(p.g);
            p.n_modes = a.n_modes.or(p.n_modes);
            p.bath = a.bath.or(p.bath);
            p.t = a.t.or(p.t);
            if a.diagnostic {
                p.diagnostic = Some(true);
            }
            p.output = a.output.or(p.output);
            run(&ScenarioConfig::Shor(p))
        }
        Command::Efficiency(a) => {
            let mut p: EfficiencyParams = load_config(a.config.as_deref(), "efficiency")?;
            p.model = a.model.or(p.model);
            p.c = a.c.or(p.c);
            p.poly = a.poly.or(p.poly);
            p.values = a.values.or(p.values);
            p.n_min = a.n_min.or(p.n_min);
            p.n_max = a.n_max.or(p.n_max);
            p.margin = a.margin.or(p.margin);
            p.output = a.output.or(p.output);
            run(&ScenarioConfig::Efficiency(p))
        }
        Command::Feasibility(a) => {
            let mut p: FeasibilityParams = load_config(a.config.as_deref(), "feasibility")?;
            p.qubits = a.qubits.or(p.qubits);
            p.tau = a.tau.or(p.tau);
            p.gates = a.gates.or(p.gates);
            p.td = a.td.or(p.td);
            run(&ScenarioConfig::Feasibility(p))
        }
        Command::Inspect(a) => run_inspect(&a.file),
    }
}

/// Binary entry point: parse, run, map errors to exit codes.
pub fn main() -> i32 {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return e.exit_code();
    }
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
