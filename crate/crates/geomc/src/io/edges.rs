//! Network observation files for the eigenmodel.
//!
//! Format: a header line with the node count `m`, then one observed pair per
//! line as `i j y` with 1-based `i < j` and `y` in {0, 1}. Pairs that never
//! appear stay unobserved. Blank lines and `#` comments are skipped.

use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};
use crate::targets::EigenmodelData;

/// Parse edge text; errors carry 1-based line numbers.
pub fn parse_edges(text: &str) -> Result<EigenmodelData> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(idx, raw)| (idx + 1, raw.split('#').next().unwrap_or("").trim()))
        .filter(|(_, content)| !content.is_empty());

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing node-count header".into(),
    })?;
    let m: usize = header.parse().map_err(|_| Error::Parse {
        line: header_line,
        msg: format!("invalid node count {header:?}"),
    })?;

    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (line, content) in lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 'i j y', found {content:?}"),
            });
        }
        let parse_idx = |t: &str| -> Result<usize> {
            t.parse().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid node index {t:?}"),
            })
        };
        let i = parse_idx(fields[0])?;
        let j = parse_idx(fields[1])?;
        let y = match fields[2] {
            "0" => false,
            "1" => true,
            other => {
                return Err(Error::Parse {
                    line,
                    msg: format!("observation must be 0 or 1, found {other:?}"),
                })
            }
        };
        if i >= j {
            return Err(Error::Parse {
                line,
                msg: format!("pairs must satisfy i < j, found ({i}, {j})"),
            });
        }
        if j > m {
            return Err(Error::Parse {
                line,
                msg: format!("node {j} out of range for {m} nodes"),
            });
        }
        if !seen.insert((i, j)) {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate pair ({i}, {j})"),
            });
        }
        edges.push((i, j, y));
    }
    EigenmodelData::from_edges(m, &edges)
}

/// Load an edge file.
pub fn load_edges(path: impl AsRef<Path>) -> Result<EigenmodelData> {
    parse_edges(&std::fs::read_to_string(path)?)
}

/// Render observations in the loadable text format (header plus sorted pairs).
pub fn format_edges(data: &EigenmodelData) -> String {
    let mut out = format!("{}\n", data.node_count());
    for (i, j, y) in data.edges() {
        out.push_str(&format!("{i} {j} {}\n", y as u8));
    }
    out
}

/// Write observations to a file.
pub fn save_edges(path: impl AsRef<Path>, data: &EigenmodelData) -> Result<()> {
    std::fs::write(path, format_edges(data))?;
    Ok(())
}
