use std::fmt::Write as _;
use std::path::Path;

use super::{CliError, Result};
use crate::trace::Trace;

/// Header `t,<names>` then one row per record. Floats use the shortest
/// representation that parses back to the same value; lines end in `\n`.
pub fn format_trace(trace: &Trace) -> String {
    let mut out = String::from("t");
    for name in trace.names() {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for r in trace.records() {
        write!(out, "{:?}", r.t).expect("writing to a String");
        for v in &r.values {
            write!(out, ",{v:?}").expect("writing to a String");
        }
        out.push('\n');
    }
    out
}

pub fn write_trace(trace: &Trace, path: &Path) -> Result<()> {
    std::fs::write(path, format_trace(trace)).map_err(|e| CliError::io(path, e))
}

pub fn parse_trace(text: &str) -> Result<Trace> {
    let mut lines = text.split('\n');
    let header = lines.next().unwrap_or_default();
    let mut cols = header.split(',');
    if cols.next() != Some("t") {
        return Err(CliError::MalformedTrace { line: 1, message: "header must start with `t`".into() });
    }
    let mut trace = Trace::new(cols)?;
    let width = trace.names().len();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let lineno = i + 2;
        let fields: std::result::Result<Vec<f64>, _> = line.split(',').map(str::parse::<f64>).collect();
        let fields = fields.map_err(|e| CliError::MalformedTrace { line: lineno, message: e.to_string() })?;
        if fields.len() != width + 1 {
            return Err(CliError::MalformedTrace {
                line: lineno,
                message: format!("expected {} fields, found {}", width + 1, fields.len()),
            });
        }
        trace.push(fields[0], fields[1..].to_vec())?;
    }
    Ok(trace)
}

pub fn read_trace(path: &Path) -> Result<Trace> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_trace(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_only_and_line_count() {
        let mut tr = Trace::new(["a", "b"]).unwrap();
        assert_eq!(format_trace(&tr), "t,a,b\n");
        for i in 0..3 {
            tr.push(i as f64 * 0.1, vec![1.0 / 3.0, 1e-300]).unwrap();
        }
        let text = format_trace(&tr);
        assert_eq!(text.lines().count(), 4);
        assert!(!text.contains('\r'));
        assert_eq!(parse_trace(&text).unwrap(), tr);
    }

    #[test]
    fn malformed_rows() {
        assert!(parse_trace("x,a\n").is_err());
        assert!(parse_trace("t,a\n0.0,1.0,2.0\n").is_err());
        assert!(parse_trace("t,a\n0.0,abc\n").is_err());
    }
}
