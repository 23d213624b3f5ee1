//! Run manifests: a `key=value` record of what a command read, how it was
//! parameterized and what it wrote.
//!
//! Repeated keys (`arg`, `input`, `output`) keep their order. The `arg`
//! lines are the exact command line after the program name; `rerun` replays
//! them from the recorded working directory.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub cwd: PathBuf,
    pub argv: Vec<String>,
    pub inputs: Vec<PathBuf>,
    /// Parameters as executed, defaults included.
    pub params: Vec<(String, String)>,
    pub outputs: Vec<PathBuf>,
    pub results: Vec<(String, String)>,
    pub duration: Duration,
}

impl RunManifest {
    pub fn new(command: &str, argv: &[String]) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            cwd: std::env::current_dir().unwrap_or_default(),
            argv: argv.to_vec(),
            inputs: Vec::new(),
            params: Vec::new(),
            outputs: Vec::new(),
            results: Vec::new(),
            duration: Duration::ZERO,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn result(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.results.push((key.to_string(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command={}", self.command);
        let _ = writeln!(s, "version={}", self.version);
        let _ = writeln!(s, "cwd={}", self.cwd.display());
        for a in &self.argv {
            let _ = writeln!(s, "arg={a}");
        }
        for p in &self.inputs {
            let _ = writeln!(s, "input={}", p.display());
        }
        for (k, v) in &self.params {
            let _ = writeln!(s, "param.{k}={v}");
        }
        for p in &self.outputs {
            let _ = writeln!(s, "output={}", p.display());
        }
        for (k, v) in &self.results {
            let _ = writeln!(s, "result.{k}={v}");
        }
        let _ = writeln!(s, "duration_ms={}", self.duration.as_millis());
        s
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut m = RunManifest {
            command: String::new(),
            version: String::new(),
            cwd: PathBuf::new(),
            argv: Vec::new(),
            inputs: Vec::new(),
            params: Vec::new(),
            outputs: Vec::new(),
            results: Vec::new(),
            duration: Duration::ZERO,
        };
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key=value", i + 1))?;
            match key {
                "command" => m.command = value.to_string(),
                "version" => m.version = value.to_string(),
                "cwd" => m.cwd = PathBuf::from(value),
                "arg" => m.argv.push(value.to_string()),
                "input" => m.inputs.push(PathBuf::from(value)),
                "output" => m.outputs.push(PathBuf::from(value)),
                "duration_ms" => {
                    let ms = value
                        .parse()
                        .map_err(|_| format!("line {}: invalid duration {value:?}", i + 1))?;
                    m.duration = Duration::from_millis(ms);
                }
                _ => {
                    if let Some(k) = key.strip_prefix("param.") {
                        m.params.push((k.to_string(), value.to_string()));
                    } else if let Some(k) = key.strip_prefix("result.") {
                        m.results.push((k.to_string(), value.to_string()));
                    } else {
                        return Err(format!("line {}: unknown key {key:?}", i + 1));
                    }
                }
            }
        }
        if m.command.is_empty() || m.argv.is_empty() {
            return Err("manifest records no command line".into());
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.render()).map_err(|e| CliError::io(path, e))
    }
}

/// `<out>.manifest`, next to the primary output.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest");
    PathBuf::from(name)
}
