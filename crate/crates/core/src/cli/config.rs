use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::{CliError, Result};
use crate::experiments::{ExperimentConfig, ExperimentError, ExperimentName};

/// On-disk config; everything but the experiment name is optional.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: String,
    #[serde(default)]
    parameters: BTreeMap<String, f64>,
    seed: Option<u64>,
    sample_interval: Option<usize>,
}

/// Parse JSON text (`origin` names it in error messages) and resolve defaults.
pub fn parse_config_str(text: &str, origin: &str) -> Result<ExperimentConfig> {
    let raw: RawConfig = serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let name: ExperimentName = raw.experiment.parse().map_err(|e: ExperimentError| CliError::Usage(e.to_string()))?;
    let mut config = ExperimentConfig::new(name);
    for (k, v) in &raw.parameters {
        config.set(k, *v)?;
    }
    if let Some(seed) = raw.seed {
        config.seed = seed;
    }
    if let Some(every) = raw.sample_interval {
        config.sample_interval = every;
    }
    config.validate()?;
    Ok(config)
}

/// Read `path`, then apply each `key=value` override in order.
pub fn parse_config(path: &Path, overrides: &[String]) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut config = parse_config_str(&text, &path.display().to_string())?;
    for o in overrides {
        apply_override(&mut config, o)?;
    }
    config.validate()?;
    Ok(config)
}

/// `seed=N`, `sample_interval=N` or `<parameter>=<number>`.
pub fn apply_override(config: &mut ExperimentConfig, assignment: &str) -> Result<()> {
    let (key, value) = assignment
        .split_once('=')
        .map(|(k, v)| (k.trim(), v.trim()))
        .ok_or_else(|| CliError::Usage(format!("--set expects key=value, got `{assignment}`")))?;
    let bad = |what: &str| CliError::Usage(format!("--set {key}: `{value}` is not {what}"));
    match key {
        "seed" => config.seed = value.parse().map_err(|_| bad("an unsigned integer"))?,
        "sample_interval" => config.sample_interval = value.parse().map_err(|_| bad("a positive integer"))?,
        _ => {
            let v: f64 = value.parse().map_err(|_| bad("a number"))?;
            config.set(key, v)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_resolves_defaults() {
        let c = parse_config_str(r#"{"experiment":"fermi_decay"}"#, "inline").unwrap();
        assert_eq!(c, ExperimentConfig::new(ExperimentName::FermiDecay));
    }

    #[test]
    fn errors_carry_position() {
        let err = parse_config_str("{\n  \"experiment\": \"fermi_decay\",\n  oops\n}", "f.json").unwrap_err();
        match err {
            CliError::Parse { line, column, .. } => assert_eq!((line, column), (3, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_config_str(r#"{"experiment":"bogus"}"#, "x"), Err(CliError::Usage(_))));
        assert!(matches!(parse_config_str(r#"{"experiment":"fermi_decay","extra":1}"#, "x"), Err(CliError::Parse { .. })));
        assert!(matches!(
            parse_config_str(r#"{"experiment":"fermi_decay","parameters":{"B":1}}"#, "x"),
            Err(CliError::Experiment(ExperimentError::UnknownParameter { .. }))
        ));
    }

    #[test]
    fn overrides() {
        let mut c = ExperimentConfig::new(ExperimentName::FermiDecay);
        apply_override(&mut c, "A=2.0").unwrap();
        apply_override(&mut c, "seed=7").unwrap();
        apply_override(&mut c, "sample_interval = 3").unwrap();
        assert_eq!((c.get("A"), c.seed, c.sample_interval), (2.0, 7, 3));
        assert!(apply_override(&mut c, "A").is_err());
        assert!(apply_override(&mut c, "A=x").is_err());
        assert!(apply_override(&mut c, "Z=1").is_err());
    }
}
