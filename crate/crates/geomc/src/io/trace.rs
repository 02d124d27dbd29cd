//! Chain traces as CSV.
//!
//! Layout: `step,<coordinate columns>,accepted,delta_H,log_density` with one
//! row per recorded state. Floats are printed in Rust's shortest round-trip
//! decimal form, so a written file reloads to the exact in-memory doubles.

use std::path::Path;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::sampler::ChainTrace;

/// Default coordinate labels `x1..xn`.
pub fn default_names(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("x{i}")).collect()
}

/// Render a non-empty trace as CSV text.
pub fn format_trace(names: &[String], trace: &ChainTrace) -> Result<String> {
    if trace.is_empty() {
        return Err(Error::Domain("refusing to write an empty trace".into()));
    }
    let dim = trace.samples()[0].len();
    if names.len() != dim {
        return Err(Error::Dimension(format!(
            "{} column names for dimension {dim}",
            names.len()
        )));
    }
    for name in names {
        if name.contains(',') || name.contains('\n') {
            return Err(Error::Domain(format!("invalid column name {name:?}")));
        }
    }

    let mut out = String::new();
    out.push_str("step,");
    out.push_str(&names.join(","));
    out.push_str(",accepted,delta_H,log_density\n");
    for (i, sample) in trace.samples().iter().enumerate() {
        out.push_str(&(i + 1).to_string());
        for value in sample.iter() {
            out.push(',');
            out.push_str(&value.to_string());
        }
        out.push(',');
        out.push_str(if trace.accepted()[i] { "1" } else { "0" });
        out.push(',');
        out.push_str(&trace.delta_h()[i].to_string());
        out.push(',');
        out.push_str(&trace.log_density()[i].to_string());
        out.push('\n');
    }
    Ok(out)
}

/// Write a trace CSV to `path`.
pub fn write_trace(path: impl AsRef<Path>, names: &[String], trace: &ChainTrace) -> Result<()> {
    let text = format_trace(names, trace)?;
    std::fs::write(path, text)?;
    Ok(())
}

fn parse_float(token: &str, line: usize) -> Result<f64> {
    token.parse::<f64>().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid float {token:?}"),
    })
}

/// Parse CSV text back into coordinate names and a trace.
pub fn parse_trace(text: &str) -> Result<(Vec<String>, ChainTrace)> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty trace file".into(),
    })?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.len() < 5 || cols[0] != "step" {
        return Err(Error::Parse {
            line: 1,
            msg: "expected header step,<coords...>,accepted,delta_H,log_density".into(),
        });
    }
    let tail = &cols[cols.len() - 3..];
    if tail != ["accepted", "delta_H", "log_density"] {
        return Err(Error::Parse {
            line: 1,
            msg: "trailing columns must be accepted,delta_H,log_density".into(),
        });
    }
    let names: Vec<String> = cols[1..cols.len() - 3].iter().map(|s| s.to_string()).collect();
    let dim = names.len();

    let mut samples = Vec::new();
    let mut accepted = Vec::new();
    let mut delta_h = Vec::new();
    let mut log_density = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 4 {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {} fields, found {}", dim + 4, fields.len()),
            });
        }
        let coords: Vec<f64> = fields[1..=dim]
            .iter()
            .map(|t| parse_float(t, lineno))
            .collect::<Result<_>>()?;
        samples.push(DVector::from_vec(coords));
        accepted.push(match fields[dim + 1] {
            "1" => true,
            "0" => false,
            other => {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("accepted flag must be 0 or 1, found {other:?}"),
                })
            }
        });
        delta_h.push(parse_float(fields[dim + 2], lineno)?);
        log_density.push(parse_float(fields[dim + 3], lineno)?);
    }
    Ok((names, ChainTrace::from_parts(samples, accepted, delta_h, log_density)?))
}

/// Load a trace CSV from `path`.
pub fn read_trace(path: impl AsRef<Path>) -> Result<(Vec<String>, ChainTrace)> {
    let text = std::fs::read_to_string(path)?;
    parse_trace(&text)
}
