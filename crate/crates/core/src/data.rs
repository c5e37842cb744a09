//! Plain-text data files and bundled datasets.

use crate::error::{Error, Result};

/// Welding-gap measurements (cm), 50 assemblies; log-normal in the original study.
pub const WELDING_GAP: &str = include_str!("../data/welding_gap.txt");

pub fn welding_gap() -> Vec<f64> {
    parse_values(WELDING_GAP, None).expect("bundled dataset parses")
}

/// Parses one value per line; `#` starts a comment and blank lines are skipped.
///
/// With `column = Some(k)` each line is split on commas and the 1-based
/// field `k` is read; a non-numeric first data line is treated as a header.
pub fn parse_values(text: &str, column: Option<usize>) -> Result<Vec<f64>> {
    if column == Some(0) {
        return Err(Error::Config("column index is 1-based".into()));
    }
    let mut values = Vec::new();
    let mut seen_data = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let field = match column {
            None => line,
            Some(k) => line.split(',').nth(k - 1).map(str::trim).ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("no column {k}"),
            })?,
        };
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if column.is_some() && !seen_data => {}
            Err(_) => {
                return Err(Error::Parse { line: line_no, message: format!("cannot parse {field:?} as a number") })
            }
        }
        seen_data = true;
    }
    Ok(values)
}
