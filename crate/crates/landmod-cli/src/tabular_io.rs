//! The tabular model file format.
//!
//! UTF-8 text. `#` starts a comment (whole line or trailing). Grammar:
//!
//! ```text
//! states N
//! state <idx> <energy>        one line per state, 0 <= idx < N
//! edge <i> <j> <rate>         one line per undirected proposal edge
//! ```
//!
//! Every state index must be declared exactly once; edges are validated
//! for range, positivity, duplicates and conflicting reverse rates, and
//! the proposal graph must be connected.

use std::path::Path;

use landmod::models::TabularModel;

use crate::error::CliError;

pub fn load_tabular(path: &Path) -> Result<TabularModel, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "tabular".into());
    parse_tabular(&name, &text)
}

pub fn parse_tabular(name: &str, text: &str) -> Result<TabularModel, CliError> {
    let mut count: Option<usize> = None;
    let mut energies: Vec<Option<f64>> = Vec::new();
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();

    let fail = |line_no: usize, msg: String| {
        Err(CliError::config(format!("line {line_no}: {msg}")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut tokens = line.split_whitespace();
        let Some(keyword) = tokens.next() else { continue };
        let rest: Vec<&str> = tokens.collect();
        match keyword {
            "states" => {
                if count.is_some() {
                    return fail(line_no, "duplicate `states` line".into());
                }
                let [n] = rest[..] else {
                    return fail(line_no, "expected `states N`".into());
                };
                let n: usize = match n.parse() {
                    Ok(v) => v,
                    Err(e) => return fail(line_no, format!("bad state count `{n}`: {e}")),
                };
                if n == 0 {
                    return fail(line_no, "state count must be positive".into());
                }
                energies = vec![None; n];
                count = Some(n);
            }
            "state" => {
                let Some(n) = count else {
                    return fail(line_no, "`state` before `states N`".into());
                };
                let [i, e] = rest[..] else {
                    return fail(line_no, "expected `state <idx> <energy>`".into());
                };
                let i: usize = match i.parse() {
                    Ok(v) => v,
                    Err(err) => return fail(line_no, format!("bad state index `{i}`: {err}")),
                };
                let e: f64 = match e.parse() {
                    Ok(v) => v,
                    Err(err) => return fail(line_no, format!("bad energy `{e}`: {err}")),
                };
                if i >= n {
                    return fail(line_no, format!("state index {i} out of range 0..{n}"));
                }
                if energies[i].is_some() {
                    return fail(line_no, format!("state {i} declared twice"));
                }
                energies[i] = Some(e);
            }
            "edge" => {
                if count.is_none() {
                    return fail(line_no, "`edge` before `states N`".into());
                }
                let [i, j, r] = rest[..] else {
                    return fail(line_no, "expected `edge <i> <j> <rate>`".into());
                };
                let parse_idx = |s: &str| s.parse::<usize>();
                let (i, j) = match (parse_idx(i), parse_idx(j)) {
                    (Ok(a), Ok(b)) => (a, b),
                    _ => return fail(line_no, format!("bad edge endpoints `{i} {j}`")),
                };
                let r: f64 = match r.parse() {
                    Ok(v) => v,
                    Err(err) => return fail(line_no, format!("bad rate `{r}`: {err}")),
                };
                edges.push((i, j, r));
            }
            other => return fail(line_no, format!("unknown keyword `{other}`")),
        }
    }

    let Some(n) = count else {
        return Err(CliError::config("missing `states N` line"));
    };
    let mut resolved = Vec::with_capacity(n);
    for (i, e) in energies.into_iter().enumerate() {
        match e {
            Some(v) => resolved.push(v),
            None => return Err(CliError::config(format!("state {i} never declared"))),
        }
    }
    Ok(TabularModel::new(name, resolved, &edges)?)
}

/// Canonical writer; [`parse_tabular`] of the output reproduces the model.
pub fn format_tabular(model: &TabularModel) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    let _ = writeln!(out, "# tabular model: {}", landmod::ModelSpec::name(model));
    let _ = writeln!(out, "states {}", model.len());
    for (i, e) in model.energies().iter().enumerate() {
        let _ = writeln!(out, "state {i} {e}");
    }
    for (i, j, r) in model.edge_list() {
        let _ = writeln!(out, "edge {i} {j} {r}");
    }
    out
}

pub fn write_tabular(model: &TabularModel, path: &Path) -> Result<(), CliError> {
    std::fs::write(path, format_tabular(model))?;
    Ok(())
}
