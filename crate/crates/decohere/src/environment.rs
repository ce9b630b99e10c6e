//! Environment descriptions: collections of two-level (or oscillator) modes,
//! their thermal occupation, and continuous spectral densities.
//!
//! A continuous environment enters every formula only through the combination
//! `rho(omega) * g(omega)^2` (mode density times squared coupling). That
//! product is what [`SpectralDensity::weight`] returns and what the tabulated
//! file format stores, so discretization reduces to midpoint sampling:
//! mode j sits at `omega_j = (j - 1/2) * cutoff / n` and carries
//! `g_j^2 = weight(omega_j) * cutoff / n`.

use crate::error::{Error, Result};

/// One environment mode: level splitting `omega > 0` and coupling `g >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathMode {
    pub omega: f64,
    pub g: f64,
}

impl BathMode {
    pub fn new(omega: f64, g: f64) -> Result<Self> {
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::invalid(format!("mode frequency must be > 0, got {omega}")));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::invalid(format!("mode coupling must be >= 0, got {g}")));
        }
        Ok(BathMode { omega, g })
    }
}

/// A finite, validated collection of environment modes (at least one).
///
/// Evolution routines take `&[BathMode]` slices so that the free-evolution
/// case (no modes at all) stays expressible; this container is the validated
/// form used for configuration and file exchange.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBath {
    modes: Vec<BathMode>,
}

impl DiscreteBath {
    pub fn new(modes: Vec<BathMode>) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::invalid("a discrete bath needs at least one mode"));
        }
        Ok(DiscreteBath { modes })
    }

    /// `n` identical modes, all at frequency `omega` with coupling `g`.
    pub fn uniform(n: usize, omega: f64, g: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("a uniform bath needs at least one mode"));
        }
        let mode = BathMode::new(omega, g)?;
        Ok(DiscreteBath {
            modes: vec![mode; n],
        })
    }

    pub fn modes(&self) -> &[BathMode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one mode
    }

    pub fn omega_min(&self) -> f64 {
        self.modes.iter().map(|m| m.omega).fold(f64::INFINITY, f64::min)
    }

    pub fn omega_max(&self) -> f64 {
        self.modes.iter().map(|m| m.omega).fold(0.0, f64::max)
    }

    /// Two-column plain text, one `omega g` pair per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for m in &self.modes {
            out.push_str(&format!("{} {}\n", m.omega, m.g));
        }
        out
    }

    /// Parse the format written by [`DiscreteBath::to_text`]; `#` lines and
    /// blank lines are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let pairs = parse_two_columns(text)?;
        let modes = pairs
            .into_iter()
            .map(|(omega, g)| BathMode::new(omega, g))
            .collect::<Result<Vec<_>>>()?;
        DiscreteBath::new(modes)
    }
}

/// Thermal occupation of the environment modes: inverse temperature
/// `beta >= 0`, or the vacuum (zero-temperature ground state).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalState {
    beta: f64,
    vacuum: bool,
}

impl ThermalState {
    pub fn with_beta(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::invalid(format!(
                "inverse temperature must be finite and >= 0, got {beta}"
            )));
        }
        Ok(ThermalState { beta, vacuum: false })
    }

    pub const fn vacuum() -> Self {
        ThermalState {
            beta: f64::INFINITY,
            vacuum: true,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        self.vacuum
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Gibbs weights `(w_ground, w_excited)` of a two-level mode with
    /// splitting `omega`. Computed via exp(-2*beta*omega) so large `beta`
    /// cannot overflow; the vacuum returns exactly (1, 0).
    pub fn population_weights(&self, omega: f64) -> (f64, f64) {
        if self.vacuum {
            return (1.0, 0.0);
        }
        let r = (-2.0 * self.beta * omega).exp();
        (1.0 / (1.0 + r), r / (1.0 + r))
    }

    /// Ground/excited population difference `tanh(beta * omega)`; 1 for the
    /// vacuum.
    pub fn polarization(&self, omega: f64) -> f64 {
        if self.vacuum {
            1.0
        } else {
            (self.beta * omega).tanh()
        }
    }
}

/// Pair of collective coupling eigenvalues driving one oscillator mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorCoupling {
    pub f_a: f64,
    pub f_b: f64,
}

impl OscillatorCoupling {
    pub fn new(f_a: f64, f_b: f64) -> Result<Self> {
        if !(f_a.is_finite() && f_b.is_finite()) {
            return Err(Error::invalid("oscillator couplings must be finite"));
        }
        Ok(OscillatorCoupling { f_a, f_b })
    }
}

/// Analytic families for `rho(omega) * g(omega)^2`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpectralKind {
    /// Constant weight `gamma / pi`; yields a dephasing exponent linear in t.
    FlatGamma { gamma: f64 },
    /// Quadratic weight `2 * eta * omega^2 / pi`; dephasing grows with the cutoff.
    Ohmic { eta: f64 },
    /// Piecewise-linear interpolation of `(omega, weight)` samples, constant
    /// beyond the sampled range.
    Tabulated { samples: Vec<(f64, f64)> },
}

/// A spectral density with a hard frequency cutoff; integrations and
/// discretizations run over `[0, cutoff]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDensity {
    kind: SpectralKind,
    cutoff: f64,
}

impl SpectralDensity {
    pub fn new(kind: SpectralKind, cutoff: f64) -> Result<Self> {
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::invalid(format!("cutoff must be > 0, got {cutoff}")));
        }
        match &kind {
            SpectralKind::FlatGamma { gamma } => {
                if !(gamma.is_finite() && *gamma > 0.0) {
                    return Err(Error::invalid(format!("gamma must be > 0, got {gamma}")));
                }
            }
            SpectralKind::Ohmic { eta } => {
                if !(eta.is_finite() && *eta > 0.0) {
                    return Err(Error::invalid(format!("eta must be > 0, got {eta}")));
                }
            }
            SpectralKind::Tabulated { samples } => {
                if samples.is_empty() {
                    return Err(Error::invalid("tabulated density needs at least one sample"));
                }
                for &(w, v) in samples {
                    if !(w.is_finite() && w >= 0.0 && v.is_finite() && v >= 0.0) {
                        return Err(Error::invalid(format!(
                            "tabulated sample ({w}, {v}) must be finite with omega >= 0, weight >= 0"
                        )));
                    }
                }
                if samples.windows(2).any(|p| p[1].0 <= p[0].0) {
                    return Err(Error::invalid(
                        "tabulated sample frequencies must be strictly increasing",
                    ));
                }
            }
        }
        Ok(SpectralDensity { kind, cutoff })
    }

    pub fn flat_gamma(gamma: f64, cutoff: f64) -> Result<Self> {
        SpectralDensity::new(SpectralKind::FlatGamma { gamma }, cutoff)
    }

    pub fn ohmic(eta: f64, cutoff: f64) -> Result<Self> {
        SpectralDensity::new(SpectralKind::Ohmic { eta }, cutoff)
    }

    pub fn tabulated(samples: Vec<(f64, f64)>, cutoff: f64) -> Result<Self> {
        SpectralDensity::new(SpectralKind::Tabulated { samples }, cutoff)
    }

    /// Parse two-column `omega weight` text into a tabulated density.
    pub fn tabulated_from_text(text: &str, cutoff: f64) -> Result<Self> {
        SpectralDensity::tabulated(parse_two_columns(text)?, cutoff)
    }

    pub fn kind(&self) -> &SpectralKind {
        &self.kind
    }

    pub fn cutoff(&self) -> f64 {
        self.cutoff
    }

    /// `rho(omega) * g(omega)^2` at one frequency.
    pub fn weight(&self, omega: f64) -> f64 {
        match &self.kind {
            SpectralKind::FlatGamma { gamma } => gamma / std::f64::consts::PI,
            SpectralKind::Ohmic { eta } => 2.0 * eta * omega * omega / std::f64::consts::PI,
            SpectralKind::Tabulated { samples } => {
                if omega <= samples[0].0 {
                    return samples[0].1;
                }
                let last = samples[samples.len() - 1];
                if omega >= last.0 {
                    return last.1;
                }
                let hi = samples.partition_point(|&(w, _)| w < omega);
                let (w0, v0) = samples[hi - 1];
                let (w1, v1) = samples[hi];
                v0 + (v1 - v0) * (omega - w0) / (w1 - w0)
            }
        }
    }

    /// Deterministic midpoint discretization into `n` modes over `[0, cutoff]`.
    pub fn discretize(&self, n: usize) -> Result<DiscreteBath> {
        if n == 0 {
            return Err(Error::invalid("discretization needs at least one mode"));
        }
        let dw = self.cutoff / n as f64;
        let modes = (1..=n)
            .map(|j| {
                let omega = (j as f64 - 0.5) * dw;
                BathMode::new(omega, (self.weight(omega) * dw).sqrt())
            })
            .collect::<Result<Vec<_>>>()?;
        DiscreteBath::new(modes)
    }
}

pub(crate) fn parse_two_columns(text: &str) -> Result<Vec<(f64, f64)>> {
    let mut pairs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 2 {
            return Err(Error::invalid(format!(
                "line {}: expected two columns, got {}",
                lineno + 1,
                toks.len()
            )));
        }
        let a = toks[0]
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("line {}: bad number {:?}", lineno + 1, toks[0])))?;
        let b = toks[1]
            .parse::<f64>()
            .map_err(|_| Error::invalid(format!("line {}: bad number {:?}", lineno + 1, toks[1])))?;
        pairs.push((a, b));
    }
    if pairs.is_empty() {
        return Err(Error::invalid("no data rows found"));
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uniform_bath_replicates_mode() {
        let bath = DiscreteBath::uniform(3, 1.0, 0.1).unwrap();
        assert_eq!(bath.len(), 3);
        assert!(bath.modes().iter().all(|m| m.omega == 1.0 && m.g == 0.1));
    }

    #[test]
    fn uniform_bath_rejects_bad_inputs() {
        assert!(DiscreteBath::uniform(0, 1.0, 0.1).is_err());
        assert!(DiscreteBath::uniform(1, 0.0, 0.1).is_err());
        assert!(DiscreteBath::uniform(1, -1.0, 0.1).is_err());
        assert!(DiscreteBath::uniform(1, 1.0, -0.1).is_err());
        assert!(DiscreteBath::uniform(1, f64::NAN, 0.1).is_err());
    }

    #[test]
    fn midpoint_discretization_single_mode() {
        // One flat-weight mode carries the whole band: omega at cutoff/2,
        // g^2 = (gamma/pi) * cutoff.
        let gamma = 0.5;
        let cutoff = 10.0;
        let sd = SpectralDensity::flat_gamma(gamma, cutoff).unwrap();
        let bath = sd.discretize(1).unwrap();
        assert_eq!(bath.len(), 1);
        let m = bath.modes()[0];
        assert!((m.omega - cutoff / 2.0).abs() < 1e-15);
        assert!((m.g * m.g - gamma / PI * cutoff).abs() < 1e-15);
    }

    #[test]
    fn midpoint_discretization_is_deterministic() {
        let sd = SpectralDensity::ohmic(0.3, 25.0).unwrap();
        let a = sd.discretize(64).unwrap();
        let b = sd.discretize(64).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_tabulated_weight_gives_silent_bath() {
        let sd = SpectralDensity::tabulated(vec![(0.0, 0.0), (5.0, 0.0)], 5.0).unwrap();
        let bath = sd.discretize(8).unwrap();
        assert!(bath.modes().iter().all(|m| m.g == 0.0));
    }

    #[test]
    fn tabulated_interpolation_and_extension() {
        let sd = SpectralDensity::tabulated(vec![(1.0, 2.0), (3.0, 4.0)], 10.0).unwrap();
        assert_eq!(sd.weight(0.5), 2.0); // below range: constant extension
        assert_eq!(sd.weight(2.0), 3.0); // midpoint
        assert_eq!(sd.weight(9.0), 4.0); // above range
    }

    #[test]
    fn tabulated_rejects_disorder_and_negatives() {
        assert!(SpectralDensity::tabulated(vec![(1.0, 1.0), (1.0, 2.0)], 5.0).is_err());
        assert!(SpectralDensity::tabulated(vec![(0.0, -1.0)], 5.0).is_err());
        assert!(SpectralDensity::flat_gamma(-0.5, 5.0).is_err());
        assert!(SpectralDensity::ohmic(0.5, 0.0).is_err());
    }

    #[test]
    fn thermal_weights_are_normalized_and_stable() {
        let th = ThermalState::with_beta(0.0).unwrap();
        assert_eq!(th.population_weights(3.0), (0.5, 0.5));
        let hot = ThermalState::with_beta(1e6).unwrap();
        let (wg, we) = hot.population_weights(1.0);
        assert_eq!((wg, we), (1.0, 0.0)); // underflow, no NaN
        let vac = ThermalState::vacuum();
        assert_eq!(vac.population_weights(0.1), (1.0, 0.0));
        assert_eq!(vac.polarization(0.1), 1.0);
        assert!(ThermalState::with_beta(-1.0).is_err());
        assert!(ThermalState::with_beta(f64::INFINITY).is_err());
    }

    #[test]
    fn bath_text_round_trip() {
        let bath = DiscreteBath::uniform(2, 1.5, 0.25).unwrap();
        let text = bath.to_text();
        assert_eq!(DiscreteBath::from_text(&text).unwrap(), bath);
        assert!(DiscreteBath::from_text("1 2 3\n").is_err());
        assert!(DiscreteBath::from_text("").is_err());
    }
}
