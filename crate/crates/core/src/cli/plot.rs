use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{CliError, Result};
use crate::trace::Trace;

/// Two-column data files, one per observable, plus a gnuplot script that plots them.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotData {
    /// `(file name, contents)`.
    pub files: Vec<(String, String)>,
    pub script_name: String,
    pub script: String,
}

/// Files are named `<stem>_<observable>.dat`; the script is `<stem>.gp`.
pub fn emit_plot_data(trace: &Trace, observables: &[&str], stem: &str, title: &str) -> Result<PlotData> {
    let mut files = Vec::with_capacity(observables.len());
    for name in observables {
        let Some(col) = trace.index_of(name) else {
            return Err(CliError::UnknownObservable { name: name.to_string(), available: trace.names().join(", ") });
        };
        let mut body = format!("# t {name}\n");
        for r in trace.records() {
            writeln!(body, "{:?} {:?}", r.t, r.values[col]).expect("writing to a String");
        }
        files.push((format!("{stem}_{name}.dat"), body));
    }
    let mut script = String::new();
    writeln!(script, "set title '{title}'").unwrap();
    writeln!(script, "set xlabel 't'").unwrap();
    writeln!(script, "set key outside").unwrap();
    let curves: Vec<String> = files
        .iter()
        .zip(observables)
        .map(|((file, _), name)| format!("'{file}' using 1:2 with lines title '{}'", name.replace('_', "\\_")))
        .collect();
    writeln!(script, "plot {}", curves.join(", \\\n     ")).unwrap();
    Ok(PlotData { files, script_name: format!("{stem}.gp"), script })
}

/// Write every file of `plot` into `dir`, returning the paths written.
pub fn write_plot_data(plot: &PlotData, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for (name, body) in plot.files.iter().chain(std::iter::once(&(plot.script_name.clone(), plot.script.clone()))) {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
