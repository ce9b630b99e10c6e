//! Qubit-register bookkeeping: basis labels, per-qubit coupling constants,
//! and the grouping of labels into equal-coupling subspaces.
//!
//! Each register qubit couples to the environment through a signed constant:
//! bit value 1 contributes `+lambda_k`, bit value 0 contributes `-lambda_k`.
//! The signed sum over all qubits (the *net coupling* of a basis label) is
//! the only quantity the dephasing environment sees, so labels sharing one
//! net-coupling value span a decoherence-free subspace (DFS).

use crate::error::{Error, Result};

/// Largest register length for which whole-basis enumeration (2^L labels) is
/// permitted by this crate's helpers.
pub const MAX_ENUMERATED_QUBITS: usize = 24;

/// Static description of a register: per-qubit coupling constants `lambdas`
/// and per-qubit level splittings `etas`, both of length L >= 1.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterSpec {
    lambdas: Vec<f64>,
    etas: Vec<f64>,
}

impl RegisterSpec {
    pub fn new(lambdas: Vec<f64>, etas: Vec<f64>) -> Result<Self> {
        if lambdas.is_empty() {
            return Err(Error::invalid("register needs at least one qubit"));
        }
        if lambdas.len() != etas.len() {
            return Err(Error::invalid(format!(
                "coupling/splitting length mismatch: {} lambdas vs {} etas",
                lambdas.len(),
                etas.len()
            )));
        }
        if !lambdas.iter().chain(etas.iter()).all(|v| v.is_finite()) {
            return Err(Error::invalid("register constants must be finite"));
        }
        Ok(RegisterSpec { lambdas, etas })
    }

    /// Register of `l` qubits with unit couplings and zero splittings.
    pub fn uniform_couplings(l: usize) -> Result<Self> {
        RegisterSpec::new(vec![1.0; l], vec![0.0; l])
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: L >= 1
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }
}

/// A computational basis label of an L-qubit register.
///
/// `bits[k]` is the value of qubit k; bit 0 is the least significant bit of
/// `index`, so `index = sum_k bits[k] * 2^k` always holds.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct BasisLabel {
    index: usize,
    bits: Vec<u8>,
}

impl BasisLabel {
    pub fn from_bits(bits: Vec<u8>) -> Result<Self> {
        if bits.is_empty() || bits.len() >= usize::BITS as usize {
            return Err(Error::invalid(format!(
                "label length {} out of range",
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::invalid("label bits must be 0 or 1"));
        }
        let index = bits
            .iter()
            .enumerate()
            .map(|(k, &b)| (b as usize) << k)
            .sum();
        Ok(BasisLabel { index, bits })
    }

    pub fn from_index(index: usize, l: usize) -> Result<Self> {
        if l == 0 || l >= usize::BITS as usize {
            return Err(Error::invalid(format!("register length {l} out of range")));
        }
        if index >> l != 0 {
            return Err(Error::invalid(format!(
                "index {index} does not fit in {l} qubits"
            )));
        }
        let bits = (0..l).map(|k| ((index >> k) & 1) as u8).collect();
        Ok(BasisLabel { index, bits })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least one qubit
    }

    /// Bit string in qubit order, e.g. index 5 over 3 qubits -> "101"
    /// (qubit 0 first).
    pub fn bit_string(&self) -> String {
        self.bits.iter().map(|b| char::from(b'0' + b)).collect()
    }
}

/// Round-trip helper mirroring `BasisLabel::from_index`.
pub fn label_from_index(index: usize, l: usize) -> Result<BasisLabel> {
    BasisLabel::from_index(index, l)
}

/// Net environment coupling of one basis label: `sum_k lambda_k * s_k` with
/// `s_k = +1` for bit 1 and `-1` for bit 0.
pub fn net_coupling(label: &BasisLabel, spec: &RegisterSpec) -> Result<f64> {
    if label.len() != spec.len() {
        return Err(Error::invalid(format!(
            "label has {} qubits but register has {}",
            label.len(),
            spec.len()
        )));
    }
    Ok(net_coupling_of_index(label.index(), spec))
}

/// Same as [`net_coupling`] but straight from the label's integer index.
/// The index is masked to the register length.
pub fn net_coupling_of_index(index: usize, spec: &RegisterSpec) -> f64 {
    spec.lambdas()
        .iter()
        .enumerate()
        .map(|(k, &lam)| if (index >> k) & 1 == 1 { lam } else { -lam })
        .sum()
}

/// All labels whose net coupling lies within `tol` of `value`.
///
/// Enumerates the whole basis, so the register is capped at
/// [`MAX_ENUMERATED_QUBITS`] qubits.
pub fn dfs_members(spec: &RegisterSpec, value: f64, tol: f64) -> Result<Vec<BasisLabel>> {
    if !(value.is_finite() && tol.is_finite() && tol >= 0.0) {
        return Err(Error::invalid("dfs target and tolerance must be finite, tol >= 0"));
    }
    let l = spec.len();
    if l > MAX_ENUMERATED_QUBITS {
        return Err(Error::resource(format!(
            "basis enumeration over {l} qubits exceeds the {MAX_ENUMERATED_QUBITS}-qubit cap"
        )));
    }
    let mut members = Vec::new();
    for index in 0..1usize << l {
        if (net_coupling_of_index(index, spec) - value).abs() <= tol {
            members.push(BasisLabel::from_index(index, l)?);
        }
    }
    Ok(members)
}

/// Maximum register width for materializing the full coupling table
/// (2^16 rows); larger registers should be queried label-by-label.
pub const MAX_TABLE_QUBITS: usize = 16;

/// The coupling table of a register under a common bath: one row per basis
/// label, holding that label's net coupling. Feeding this to
/// [`decompose_subspaces`] groups the labels into invariant subspaces.
pub fn register_coupling_matrix(spec: &RegisterSpec) -> Result<CouplingMatrix> {
    let l = spec.len();
    if l > MAX_TABLE_QUBITS {
        return Err(Error::resource(format!(
            "coupling table over {l} qubits exceeds the {MAX_TABLE_QUBITS}-qubit cap"
        )));
    }
    let rows = (0..1usize << l)
        .map(|index| vec![net_coupling_of_index(index, spec)])
        .collect();
    CouplingMatrix::new(rows)
}

/// Rectangular matrix of coupling constants: one row per system label, one
/// column per environment mode. Two labels belong to the same invariant
/// subspace exactly when their rows agree.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    rows: Vec<Vec<f64>>,
}

impl CouplingMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::invalid("coupling matrix must be non-empty"));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(Error::invalid("coupling matrix rows must have equal length"));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("coupling matrix entries must be finite"));
        }
        Ok(CouplingMatrix { rows })
    }

    /// Parse a plain-text matrix: one row per line, whitespace-separated
    /// numbers, `#` lines and blank lines skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<f64>().map_err(|_| {
                        Error::invalid(format!(
                            "line {}: cannot parse {tok:?} as a number",
                            lineno + 1
                        ))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(row);
        }
        CouplingMatrix::new(rows)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn n_labels(&self) -> usize {
        self.rows.len()
    }

    pub fn n_modes(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i]
    }
}

/// One group of labels sharing a coupling row.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceGroup {
    /// Coupling row shared by every member (the first member's row verbatim).
    pub signature: Vec<f64>,
    /// Member label indices, ascending.
    pub members: Vec<usize>,
}

impl SubspaceGroup {
    pub fn dimension(&self) -> usize {
        self.members.len()
    }
}

/// Partition of all labels into equal-coupling-row groups, ordered by each
/// group's smallest member label.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceDecomposition {
    pub groups: Vec<SubspaceGroup>,
}

impl SubspaceDecomposition {
    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    /// Group index of a given label.
    pub fn group_of(&self, label: usize) -> Option<usize> {
        self.groups
            .iter()
            .position(|g| g.members.binary_search(&label).is_ok())
    }
}

pub const DEFAULT_ROW_TOL: f64 = 1e-12;

/// Group labels by coupling row with the default entrywise tolerance.
pub fn decompose_subspaces(cm: &CouplingMatrix) -> SubspaceDecomposition {
    decompose_subspaces_with_tol(cm, DEFAULT_ROW_TOL).expect("default tolerance is valid")
}

/// Group labels by coupling row; rows match when every entry differs by at
/// most `tol` from the group's signature row (tol = 0 gives exact matching).
///
/// Labels are scanned in ascending order and attached to the first matching
/// group, so the result is deterministic and groups come out sorted by their
/// smallest member.
pub fn decompose_subspaces_with_tol(
    cm: &CouplingMatrix,
    tol: f64,
) -> Result<SubspaceDecomposition> {
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(Error::invalid("row tolerance must be finite and >= 0"));
    }
    let mut groups: Vec<SubspaceGroup> = Vec::new();
    for label in 0..cm.n_labels() {
        let row = cm.row(label);
        let hit = groups.iter_mut().find(|g| {
            g.signature
                .iter()
                .zip(row)
                .all(|(a, b)| (a - b).abs() <= tol)
        });
        match hit {
            Some(g) => g.members.push(label),
            None => groups.push(SubspaceGroup {
                signature: row.to_vec(),
                members: vec![label],
            }),
        }
    }
    Ok(SubspaceDecomposition { groups })
}
