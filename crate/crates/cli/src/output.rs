use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::CliError;

pub const TOOL_NAME: &str = "lexshift";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: ToolInfo,
    run_config: &'a RunConfig,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the tool version and run configuration merged into `body`'s keys.
pub fn json_artifact<T: Serialize>(config: &RunConfig, body: &T) -> Result<String, CliError> {
    let env = Envelope {
        tool: ToolInfo {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        run_config: config,
        body,
    };
    let mut s =
        serde_json::to_string_pretty(&env).map_err(|e| CliError::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// `#`-prefixed provenance lines that open every CSV artifact.
pub fn csv_preamble(config: &RunConfig) -> Result<String, CliError> {
    let cfg = serde_json::to_string(config).map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(format!(
        "# {TOOL_NAME} {TOOL_VERSION}\n# run_config: {cfg}\n"
    ))
}

/// Renders CSV rows into a string after the provenance preamble.
pub fn csv_artifact<F>(config: &RunConfig, write_rows: F) -> Result<String, CliError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<(), CliError>,
{
    let mut body = Vec::new();
    {
        let mut w = csv::Writer::from_writer(&mut body);
        write_rows(&mut w)?;
        w.flush().map_err(|e| CliError::Internal(e.to_string()))?;
    }
    let mut out = csv_preamble(config)?;
    out.push_str(&String::from_utf8(body).map_err(|e| CliError::Internal(e.to_string()))?);
    Ok(out)
}

/// Sends the artifact to `--out` when set, otherwise to `stdout`.
pub fn emit(text: &str, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(format!("stdout: {e}"))),
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)
            .map_err(|e| CliError::Internal(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}

pub fn fmt2(v: f64) -> String {
    format!("{v:.2}")
}

pub fn percent(gamma: f64) -> String {
    format!("{:.2}%", gamma * 100.0)
}
