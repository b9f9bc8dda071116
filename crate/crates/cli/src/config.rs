use std::ffi::OsString;
use std::path::Path;

use crate::output::read_to_string;
use crate::CliError;

/// Rewrites `argv` so that values from the subcommand's table in the config
/// file come before the user's own flags. With `args_override_self`, the
/// later user flags win.
pub fn merge_config(argv: &[OsString], config: &Path, subcommand: &str) -> Result<Vec<OsString>, CliError> {
    let table: toml::Table = toml::from_str(&read_to_string(config)?)?;
    let section = match table.get(subcommand) {
        None => return Ok(argv.to_vec()),
        Some(toml::Value::Table(t)) => t,
        Some(_) => return Err(CliError::new("config", format!("[{subcommand}] must be a table"))),
    };
    let mut extra = Vec::new();
    for (key, value) in section {
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => extra.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::Array(items) => {
                extra.push(flag);
                extra.push(items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?.join(","));
            }
            v => {
                extra.push(flag);
                extra.push(scalar(v)?);
            }
        }
    }
    let at = argv
        .iter()
        .position(|a| a == subcommand)
        .ok_or_else(|| CliError::new("config", format!("subcommand {subcommand} not found in arguments")))?;
    let mut out = argv[..=at].to_vec();
    out.extend(extra.into_iter().map(OsString::from));
    out.extend_from_slice(&argv[at + 1..]);
    Ok(out)
}

fn scalar(v: &toml::Value) -> Result<String, CliError> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        other => Err(CliError::new("config", format!("unsupported config value {other}"))),
    }
}
