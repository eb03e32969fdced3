use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};
use tmdyn_core::{make_config, parse_machine, Configuration, Symbol, TuringMachine};

use crate::UsageError;

/// Where a machine came from, for report headers.
#[derive(Debug, Clone, Serialize)]
pub struct MachineInfo {
    pub source: &'static str,
    pub name: String,
    /// sha256 of the canonical text form.
    pub fingerprint: String,
    pub states: usize,
    pub symbols: usize,
}

pub fn load(machine: Option<&str>, file: Option<&Path>) -> Result<(TuringMachine, MachineInfo), UsageError> {
    let (m, source, name) = match (machine, file) {
        (Some(name), None) => {
            let m = tmdyn_core::builtin_machine(name).map_err(|e| UsageError(e.to_string()))?;
            (m, "corpus", name.to_string())
        }
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
            let m = parse_machine(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
            (m, "file", path.display().to_string())
        }
        (None, None) => return Err(UsageError("no machine given: use --machine NAME or --file PATH".into())),
        (Some(_), Some(_)) => return Err(UsageError("--machine and --file are mutually exclusive".into())),
    };
    let fingerprint = format!("{:x}", Sha256::digest(m.to_text().as_bytes()));
    let info = MachineInfo { source, name, fingerprint, states: m.num_states(), symbols: m.num_symbols() };
    Ok((m, info))
}

/// Parses a tape description. Tokens are separated by spaces or commas; a
/// token that is not a symbol name is read character by character. A lone
/// `.` puts the head on the next cell; without one the head is on the
/// first symbol.
pub fn parse_tape(m: &TuringMachine, spec: &str) -> Result<(Vec<Symbol>, i64), UsageError> {
    let mut symbols = Vec::new();
    let mut head = None;
    for token in spec.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()) {
        if token == "." {
            if head.is_some() {
                return Err(UsageError("tape has more than one `.`".into()));
            }
            head = Some(symbols.len());
            continue;
        }
        if let Ok(s) = m.symbol_by_name(token) {
            symbols.push(s);
            continue;
        }
        for c in token.chars() {
            let s =
                m.symbol_by_name(&c.to_string()).map_err(|_| UsageError(format!("unknown tape symbol `{token}`")))?;
            symbols.push(s);
        }
    }
    Ok((symbols, -(head.unwrap_or(0) as i64)))
}

pub fn start_configuration(m: &TuringMachine, state: Option<&str>, tape: &str) -> Result<Configuration, UsageError> {
    let q = match state {
        Some(name) => m.state_by_name(name).map_err(|e| UsageError(e.to_string()))?,
        None => m.initial(),
    };
    let (window, offset) = parse_tape(m, tape)?;
    make_config(m, q, &window, offset).map_err(|e| UsageError(e.to_string()))
}
