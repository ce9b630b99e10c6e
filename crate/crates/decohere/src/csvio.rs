//! CSV emission and re-parsing.
//!
//! Every table starts with a single comment line
//!
//! ```text
//! # decohere <version> | columns: a,b,c
//! ```
//!
//! followed by comma-separated data rows. Numbers carry 17 significant
//! digits, so a written value parses back to the identical double; that is
//! what makes repeated runs byte-comparable and the `inspect` subcommand
//! lossless.

use std::io::{BufRead, Write};

use crate::decoherence::{DecoherenceFactor, DephasingCurve};
use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::registers::{RegisterSpec, SubspaceDecomposition};
use crate::shor::ShorDistribution;

/// Full-precision rendering: round-trips every finite f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// The one-line table header.
pub fn header(columns: &[&str]) -> String {
    format!(
        "# decohere {} | columns: {}",
        env!("CARGO_PKG_VERSION"),
        columns.join(",")
    )
}

/// Decohering-factor sweep: one row per time.
pub fn write_factor_sweep<W: Write>(
    w: &mut W,
    times: &[f64],
    factors: &[DecoherenceFactor],
) -> Result<()> {
    if times.len() != factors.len() {
        return Err(Error::invalid(format!(
            "sweep has {} times but {} factors",
            times.len(),
            factors.len()
        )));
    }
    writeln!(w, "{}", header(&["t", "re_f", "im_f", "abs_f", "exponent"]))?;
    for (&t, f) in times.iter().zip(factors) {
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_f64(t),
            fmt_f64(f.value().re),
            fmt_f64(f.value().im),
            fmt_f64(f.modulus()),
            fmt_f64(f.exponent())
        )?;
    }
    Ok(())
}

/// Dephasing exponent curve `(t, S)`.
pub fn write_exponent_curve<W: Write>(w: &mut W, curve: &DephasingCurve) -> Result<()> {
    writeln!(w, "{}", header(&["t", "exponent"]))?;
    for (&t, &s) in curve.times.iter().zip(&curve.exponents) {
        writeln!(w, "{},{}", fmt_f64(t), fmt_f64(s))?;
    }
    Ok(())
}

/// Subspace decomposition: one row per basis label, grouped.
pub fn write_subspaces<W: Write>(
    w: &mut W,
    decomposition: &SubspaceDecomposition,
    spec: &RegisterSpec,
) -> Result<()> {
    writeln!(w, "{}", header(&["group", "index", "bits", "net_coupling"]))?;
    for (gi, group) in decomposition.groups.iter().enumerate() {
        for &idx in &group.members {
            let label = crate::registers::label_from_index(idx, spec.len())?;
            writeln!(
                w,
                "{},{},{},{}",
                gi,
                idx,
                label.bit_string(),
                fmt_f64(crate::registers::net_coupling_of_index(idx, spec))
            )?;
        }
    }
    Ok(())
}

/// Subspace decomposition of a bare coupling matrix, where labels are plain
/// row indices with no register structure attached.
pub fn write_subspace_groups<W: Write>(
    w: &mut W,
    decomposition: &SubspaceDecomposition,
) -> Result<()> {
    writeln!(w, "{}", header(&["group", "index"]))?;
    for (gi, group) in decomposition.groups.iter().enumerate() {
        for &idx in &group.members {
            writeln!(w, "{gi},{idx}")?;
        }
    }
    Ok(())
}

/// Density matrix entries, row-major.
pub fn write_density<W: Write>(w: &mut W, rho: &DensityMatrix) -> Result<()> {
    writeln!(w, "{}", header(&["row", "col", "re", "im"]))?;
    for i in 0..rho.dim() {
        for j in 0..rho.dim() {
            let z = rho.element(i, j);
            writeln!(w, "{},{},{},{}", i, j, fmt_f64(z.re), fmt_f64(z.im))?;
        }
    }
    Ok(())
}

/// Readout distribution entries `(c, k, p)`.
pub fn write_distribution<W: Write>(w: &mut W, dist: &ShorDistribution) -> Result<()> {
    writeln!(w, "{}", header(&["c", "k", "p"]))?;
    for (c, k, p) in dist.entries() {
        writeln!(w, "{},{},{}", c, k, fmt_f64(p))?;
    }
    Ok(())
}

/// Efficiency exponent trace `(N, Lambda(N))`.
pub fn write_lambda_trace<W: Write>(w: &mut W, trace: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "{}", header(&["n", "lambda"]))?;
    for &(n, l) in trace {
        writeln!(w, "{},{}", fmt_f64(n), fmt_f64(l))?;
    }
    Ok(())
}

/// A parsed table: the tool version from the header, column names, and all
/// rows as doubles.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub version: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Parse a table written by any of the writers above. Blank lines and later
/// `#` lines are skipped; every data row must match the column count.
pub fn read_csv<R: BufRead>(reader: R) -> Result<CsvTable> {
    let mut version = None;
    let mut columns: Vec<String> = Vec::new();
    let mut rows = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if version.is_none() {
                let rest = rest.trim();
                let (tool, tail) = rest
                    .split_once('|')
                    .ok_or_else(|| Error::invalid("header must be '# decohere <version> | columns: ...'"))?;
                let mut tool_parts = tool.split_whitespace();
                if tool_parts.next() != Some("decohere") {
                    return Err(Error::invalid("not a decohere table: header names a different tool"));
                }
                let ver = tool_parts
                    .next()
                    .ok_or_else(|| Error::invalid("header is missing the tool version"))?;
                let cols = tail
                    .trim()
                    .strip_prefix("columns:")
                    .ok_or_else(|| Error::invalid("header is missing the column list"))?;
                columns = cols.split(',').map(|c| c.trim().to_string()).collect();
                if columns.iter().any(|c| c.is_empty()) {
                    return Err(Error::invalid("header has an empty column name"));
                }
                version = Some(ver.to_string());
            }
            continue;
        }
        if version.is_none() {
            return Err(Error::invalid(format!(
                "line {}: data before the '# decohere' header",
                idx + 1
            )));
        }
        let row = line
            .split(',')
            .map(|field| {
                field.trim().parse::<f64>().map_err(|_| {
                    Error::invalid(format!("line {}: '{}' is not a number", idx + 1, field.trim()))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != columns.len() {
            return Err(Error::invalid(format!(
                "line {}: {} fields for {} columns",
                idx + 1,
                row.len(),
                columns.len()
            )));
        }
        rows.push(row);
    }
    match version {
        Some(version) => Ok(CsvTable {
            version,
            columns,
            rows,
        }),
        None => Err(Error::invalid("empty input: no '# decohere' header found")),
    }
}

/// Human summary of a parsed table: header facts plus per-column ranges.
pub fn summarize(table: &CsvTable) -> String {
    let mut out = String::new();
    out.push_str(&format!("version: {}\n", table.version));
    out.push_str(&format!("columns: {}\n", table.columns.join(",")));
    out.push_str(&format!("rows: {}\n", table.rows.len()));
    for (j, name) in table.columns.iter().enumerate() {
        if table.rows.is_empty() {
            out.push_str(&format!("col {name}: empty\n"));
            continue;
        }
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for row in &table.rows {
            min = min.min(row[j]);
            max = max.max(row[j]);
            sum += row[j];
        }
        out.push_str(&format!(
            "col {name}: min={} max={} mean={}\n",
            fmt_f64(min),
            fmt_f64(max),
            fmt_f64(sum / table.rows.len() as f64)
        ));
    }
    out
}
