//! Reduced density matrices of a register dephasing in a mode bath.
//!
//! For a register prepared in `sum_q C_q |q>` with diagonal system energies
//! `E_q` and every bath mode starting in a thermal (or vacuum) state, the
//! reduced density matrix stays diagonal-preserving:
//!
//! ```text
//!   rho[q, q'](t) = C_q * conj(C_q') * exp(-i (E_q - E_q') t)
//!                   * prod_j F_j(xi_q, xi_q', t)
//! ```
//!
//! Populations never move; off-diagonal elements are multiplied by the
//! decohering factor of their label pair. Labels with equal net coupling
//! keep their coherence exactly (decoherence-free subspaces).
//!
//! [`evolve_reduced`] evaluates this closed form, caching factor products
//! per net-coupling class. [`oracle_full_evolution`] instead builds the full
//! system+environment state vector with numerically exponentiated mode
//! propagators and traces the environment out literally; the two must agree,
//! and the test suite holds them to that.

use std::collections::HashMap;

use ndarray::Array2;
use num_complex::Complex64;

use crate::decoherence::{factor_two_level_thermal, oracle_factor_unitary, product_factor};
use crate::environment::{BathMode, ThermalState};
use crate::error::{Error, Result};
use crate::linalg;
use crate::registers::{net_coupling_of_index, RegisterSpec};

/// Largest register width accepted by the dense density-matrix routines
/// (dimension `2^12 = 4096`; the matrix alone is ~270 MB there).
pub const MAX_DENSITY_QUBITS: usize = 12;

/// Widest register and bath accepted by [`oracle_full_evolution`].
pub const MAX_ORACLE_QUBITS: usize = 6;
pub const MAX_ORACLE_MODES: usize = 14;

const HERMITICITY_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const NORM_TOL: f64 = 1e-6;

/// A validated density matrix: square, Hermitian, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: Array2<Complex64>,
}

impl DensityMatrix {
    pub fn new(data: Array2<Complex64>) -> Result<Self> {
        let (n, m) = data.dim();
        if n != m || n == 0 {
            return Err(Error::invalid(format!(
                "density matrix must be square and non-empty, got {n}x{m}"
            )));
        }
        let mut scale = 0.0f64;
        for z in data.iter() {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::invalid("density matrix entries must be finite"));
            }
            scale = scale.max(z.norm());
        }
        for i in 0..n {
            for j in i..n {
                let d = (data[(i, j)] - data[(j, i)].conj()).norm();
                if d > HERMITICITY_TOL * scale.max(1.0) {
                    return Err(Error::invalid(format!(
                        "density matrix is not Hermitian at ({i}, {j}): asymmetry {d:.3e}"
                    )));
                }
            }
        }
        let trace: Complex64 = (0..n).map(|i| data[(i, i)]).sum();
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::invalid(format!(
                "density matrix trace must be 1, got {} + {}i",
                trace.re, trace.im
            )));
        }
        Ok(DensityMatrix { data })
    }

    /// Projector onto a pure state.
    pub fn from_pure(state: &SystemState) -> Self {
        let dim = state.dim();
        let mut data = Array2::zeros((dim, dim));
        for (i, &a) in state.amplitudes().iter().enumerate() {
            for (j, &b) in state.amplitudes().iter().enumerate() {
                data[(i, j)] = a * b.conj();
            }
        }
        DensityMatrix::new(data).expect("pure projector is Hermitian with unit trace")
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    /// Entry `rho[i, j]`; panics if out of range, like slice indexing.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    /// `Tr rho^2 = sum |rho_ij|^2`; 1 for pure states, `1/dim` at the
    /// maximally mixed floor.
    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Smallest eigenvalue, for positivity checks. Dense eigensolve, so the
    /// dimension is capped at 128.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        if self.dim() > 128 {
            return Err(Error::resource(format!(
                "eigenvalue check supports dimension <= 128, got {}",
                self.dim()
            )));
        }
        linalg::min_eigenvalue(&self.data)
    }
}

/// A normalized pure state of the register, `2^L` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemState {
    amplitudes: Vec<Complex64>,
    n_qubits: usize,
}

impl SystemState {
    /// Validates the length is a power of two and the norm is within 1e-6 of
    /// one, then normalizes exactly.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "state length must be a power of two >= 2, got {dim}"
            )));
        }
        if amplitudes.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::invalid("state amplitudes must be finite"));
        }
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::invalid(format!(
                "state norm must be 1 (within {NORM_TOL}), got {norm}"
            )));
        }
        let amplitudes = amplitudes.into_iter().map(|z| z / norm).collect();
        Ok(SystemState {
            amplitudes,
            n_qubits: dim.trailing_zeros() as usize,
        })
    }

    /// Uniform superposition over all `2^l` labels.
    pub fn uniform(l: usize) -> Result<Self> {
        if l == 0 || l > MAX_DENSITY_QUBITS {
            return Err(Error::invalid(format!(
                "uniform state supports 1..={MAX_DENSITY_QUBITS} qubits, got {l}"
            )));
        }
        let dim = 1usize << l;
        let amp = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        SystemState::new(vec![amp; dim])
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Diagonal system energies indexed by basis label.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyTable {
    energies: Vec<f64>,
}

impl EnergyTable {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        let dim = energies.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::invalid(format!(
                "energy table length must be a power of two >= 2, got {dim}"
            )));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::invalid("energies must be finite"));
        }
        Ok(EnergyTable { energies })
    }

    /// Non-interacting register energies `E_q = sum_k eta_k * (+-1)`, sign
    /// set by bit `k` of the label (set bit contributes `+eta_k`).
    pub fn from_register(spec: &RegisterSpec) -> Result<Self> {
        let l = spec.len();
        if l > MAX_DENSITY_QUBITS {
            return Err(Error::resource(format!(
                "energy enumeration supports up to {MAX_DENSITY_QUBITS} qubits, got {l}"
            )));
        }
        let dim = 1usize << l;
        let energies = (0..dim)
            .map(|q| {
                (0..l)
                    .map(|k| {
                        let sign = if (q >> k) & 1 == 1 { 1.0 } else { -1.0 };
                        sign * spec.etas()[k]
                    })
                    .sum()
            })
            .collect();
        Ok(EnergyTable { energies })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energy(&self, q: usize) -> f64 {
        self.energies[q]
    }
}

/// Evolve the reduced density matrix with register energies derived from the
/// coupling spec. See [`evolve_reduced_with_energies`].
pub fn evolve_reduced(
    state: &SystemState,
    spec: &RegisterSpec,
    modes: &[BathMode],
    th: &ThermalState,
    t: f64,
) -> Result<DensityMatrix> {
    let energies = EnergyTable::from_register(spec)?;
    evolve_reduced_with_energies(state, spec, &energies, modes, th, t)
}

/// Closed-form reduced evolution: populations exactly frozen, each
/// off-diagonal element multiplied by the thermal decohering factor product
/// of its net-coupling pair and the free phase of its energy splitting.
pub fn evolve_reduced_with_energies(
    state: &SystemState,
    spec: &RegisterSpec,
    energies: &EnergyTable,
    modes: &[BathMode],
    th: &ThermalState,
    t: f64,
) -> Result<DensityMatrix> {
    let l = state.n_qubits();
    if spec.len() != l {
        return Err(Error::invalid(format!(
            "coupling spec covers {} qubits but the state has {l}",
            spec.len()
        )));
    }
    if l > MAX_DENSITY_QUBITS {
        return Err(Error::resource(format!(
            "reduced evolution supports up to {MAX_DENSITY_QUBITS} qubits, got {l}"
        )));
    }
    if energies.dim() != state.dim() {
        return Err(Error::invalid(format!(
            "energy table covers {} labels but the state has {}",
            energies.dim(),
            state.dim()
        )));
    }
    if !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite, got {t}")));
    }
    let dim = state.dim();
    let xi: Vec<f64> = (0..dim).map(|q| net_coupling_of_index(q, spec)).collect();
    let mut factors = FactorCache::new(&xi, modes, th, t);

    let c = state.amplitudes();
    let mut data = Array2::zeros((dim, dim));
    for q in 0..dim {
        data[(q, q)] = Complex64::new(c[q].norm_sqr(), 0.0);
        for p in (q + 1)..dim {
            let phase = Complex64::from_polar(1.0, (energies.energy(p) - energies.energy(q)) * t);
            let entry = c[q] * c[p].conj() * phase * factors.get(xi[q], xi[p]);
            data[(q, p)] = entry;
            data[(p, q)] = entry.conj();
        }
    }
    DensityMatrix::new(data)
}

/// Decohering-factor products keyed by exact net-coupling value pairs, so a
/// register with few distinct couplings pays for each pair once.
struct FactorCache<'a> {
    classes: Vec<f64>,
    class_of: HashMap<u64, usize>,
    table: Vec<Option<Complex64>>,
    modes: &'a [BathMode],
    th: &'a ThermalState,
    t: f64,
    dense: bool,
}

impl<'a> FactorCache<'a> {
    fn new(xi: &[f64], modes: &'a [BathMode], th: &'a ThermalState, t: f64) -> Self {
        let mut class_of = HashMap::new();
        let mut classes = Vec::new();
        for &x in xi {
            class_of.entry(x.to_bits()).or_insert_with(|| {
                classes.push(x);
                classes.len() - 1
            });
        }
        let k = classes.len();
        // a dense k*k memo only when it stays comfortably small
        let dense = k * k <= 1 << 20;
        let table = if dense { vec![None; k * k] } else { Vec::new() };
        FactorCache {
            classes,
            class_of,
            table,
            modes,
            th,
            t,
            dense,
        }
    }

    fn compute(&self, xa: f64, xb: f64) -> Complex64 {
        product_factor(self.modes, |m| {
            factor_two_level_thermal(m, xa, xb, self.t, self.th)
        })
        .value()
    }

    fn get(&mut self, xa: f64, xb: f64) -> Complex64 {
        if !self.dense {
            return self.compute(xa, xb);
        }
        let ca = self.class_of[&xa.to_bits()];
        let cb = self.class_of[&xb.to_bits()];
        let k = self.classes.len();
        if let Some(v) = self.table[ca * k + cb] {
            return v;
        }
        let v = self.compute(self.classes[ca], self.classes[cb]);
        self.table[ca * k + cb] = Some(v);
        self.table[cb * k + ca] = Some(v.conj());
        v
    }
}

/// Reference evolution: build the joint register+bath state vector with
/// numerically exponentiated mode propagators (vacuum start), then trace the
/// bath out entry by entry. Exponential cost, so both widths are capped.
pub fn oracle_full_evolution(
    state: &SystemState,
    spec: &RegisterSpec,
    modes: &[BathMode],
    t: f64,
) -> Result<DensityMatrix> {
    let l = state.n_qubits();
    let n = modes.len();
    if spec.len() != l {
        return Err(Error::invalid(format!(
            "coupling spec covers {} qubits but the state has {l}",
            spec.len()
        )));
    }
    if l > MAX_ORACLE_QUBITS || n > MAX_ORACLE_MODES {
        return Err(Error::resource(format!(
            "full-evolution oracle supports {MAX_ORACLE_QUBITS} qubits and {MAX_ORACLE_MODES} modes, got {l} and {n}"
        )));
    }
    if !t.is_finite() {
        return Err(Error::invalid(format!("time must be finite, got {t}")));
    }
    let energies = EnergyTable::from_register(spec)?;
    let dim = state.dim();
    let env_dim = 1usize << n;

    // Joint amplitudes psi[q * env_dim + e]; bath bit 0 means that mode is
    // still in its ground state.
    let mut psi = vec![Complex64::new(0.0, 0.0); dim * env_dim];
    for q in 0..dim {
        let xi = net_coupling_of_index(q, spec);
        let mut excited = Vec::with_capacity(n);
        let mut ground = Vec::with_capacity(n);
        for m in modes {
            let u = oracle_factor_unitary(m, xi, t)?;
            excited.push(u[0][1]);
            ground.push(u[1][1]);
        }
        let base = state.amplitudes()[q] * Complex64::from_polar(1.0, -energies.energy(q) * t);
        for e in 0..env_dim {
            let mut amp = base;
            for (j, (&ae, &ag)) in excited.iter().zip(&ground).enumerate() {
                amp *= if (e >> j) & 1 == 1 { ae } else { ag };
            }
            psi[q * env_dim + e] = amp;
        }
    }

    let mut data = Array2::zeros((dim, dim));
    for q in 0..dim {
        for p in 0..dim {
            let mut acc = Complex64::new(0.0, 0.0);
            for e in 0..env_dim {
                acc += psi[q * env_dim + e] * psi[p * env_dim + e].conj();
            }
            data[(q, p)] = acc;
        }
    }
    DensityMatrix::new(data)
}
