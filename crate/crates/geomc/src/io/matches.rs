//! Match-record text files.
//!
//! One match per line, winners before the bar: `1 2 3 | 4 5 6` with 1-based
//! player indices. Blank lines and `#` comments are skipped.

use std::path::Path;

use crate::error::{Error, Result};
use crate::targets::MatchRecord;

fn parse_side(tokens: &str, line: usize) -> Result<Vec<usize>> {
    tokens
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("invalid player index {t:?}"),
            })
        })
        .collect()
}

/// Parse match text; errors carry 1-based line numbers.
pub fn parse_matches(text: &str) -> Result<Vec<MatchRecord>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut sides = content.split('|');
        let (winners, losers) = match (sides.next(), sides.next(), sides.next()) {
            (Some(w), Some(l), None) => (w, l),
            _ => {
                return Err(Error::Parse {
                    line,
                    msg: "expected exactly one '|' between winners and losers".into(),
                })
            }
        };
        let record = MatchRecord::new(parse_side(winners, line)?, parse_side(losers, line)?)
            .map_err(|e| Error::Parse {
                line,
                msg: e.to_string(),
            })?;
        out.push(record);
    }
    Ok(out)
}

/// Load match records from a file.
pub fn load_matches(path: impl AsRef<Path>) -> Result<Vec<MatchRecord>> {
    parse_matches(&std::fs::read_to_string(path)?)
}

/// Player count implied by a match list (the largest index seen).
pub fn player_count(matches: &[MatchRecord]) -> usize {
    matches.iter().map(|m| m.max_index()).max().unwrap_or(0)
}

/// Render match records in the loadable text format.
pub fn format_matches(matches: &[MatchRecord]) -> String {
    let side = |ids: &[usize]| {
        ids.iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    let mut out = String::new();
    for m in matches {
        out.push_str(&side(m.winners()));
        out.push_str(" | ");
        out.push_str(&side(m.losers()));
        out.push('\n');
    }
    out
}

/// Write match records to a file.
pub fn save_matches(path: impl AsRef<Path>, matches: &[MatchRecord]) -> Result<()> {
    std::fs::write(path, format_matches(matches))?;
    Ok(())
}
