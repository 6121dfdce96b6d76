use std::fmt;
use std::io::Read;

use serde::de::DeserializeOwned;
use toric_cover::{SimplePolytope, StandardKind};

/// Failure before or during a computation.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable or malformed input; exit code 4.
    Input(String),
    /// Valid input the computation could not handle; exit code 1.
    Compute(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "input error: {m}"),
            CliError::Compute(m) => write!(f, "computation failed: {m}"),
        }
    }
}

pub fn input_err(e: impl fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

pub fn compute_err(e: impl fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

/// Inline JSON if the argument starts with `{` or `[`, standard input for `-`
/// or no argument, a file path otherwise.
pub fn read_source(arg: Option<&str>) -> Result<String, CliError> {
    match arg {
        None | Some("-") => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("reading standard input: {e}")))?;
            Ok(s)
        }
        Some(a) if a.trim_start().starts_with(['{', '[']) => Ok(a.to_string()),
        Some(path) => std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("reading {path}: {e}"))),
    }
}

/// Deserializes with the JSON path of the offending field in the error.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { "<root>".to_string() } else { path };
        CliError::Input(format!("at `{path}`: {}", e.inner()))
    })?;
    de.end().map_err(|e| CliError::Input(format!("trailing input: {e}")))?;
    Ok(value)
}

/// `cube:3`, `simplex:2`.
pub fn parse_standard(s: &str) -> Result<SimplePolytope, String> {
    let (kind, n) = s.split_once(':').ok_or("expected KIND:N, e.g. cube:3")?;
    let kind = match kind {
        "cube" => StandardKind::Cube,
        "simplex" => StandardKind::Simplex,
        other => return Err(format!("unknown standard polytope `{other}` (cube or simplex)")),
    };
    let n: usize = n.parse().map_err(|_| format!("bad dimension `{n}`"))?;
    if !(1..=toric_cover::polytope::MAX_DIM).contains(&n) {
        return Err(format!("dimension must be between 1 and {}", toric_cover::polytope::MAX_DIM));
    }
    Ok(SimplePolytope::standard(kind, n))
}

/// A polytope given either in the document or by `--standard`.
pub fn polytope_from(doc: Option<SimplePolytope>, standard: Option<&SimplePolytope>) -> Result<SimplePolytope, CliError> {
    match (doc, standard) {
        (Some(_), Some(_)) => Err(CliError::Input("`polytope` given both in the input and by --standard".into())),
        (Some(p), None) => Ok(p),
        (None, Some(p)) => Ok(p.clone()),
        (None, None) => Err(CliError::Input("at `polytope`: missing field (or pass --standard)".into())),
    }
}

