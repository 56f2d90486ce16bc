//! Input loading: files (diagram DSL or JSON, sniffed by first byte),
//! built-in families, and the compact `family:n` spec used by `compare`.

use std::path::Path;

use coxl2_core::coxeter::{builtin_family, parse_diagram, parse_matrix, CoxeterMatrix, Family};

use crate::CliError;

/// Loads a Coxeter matrix from a file; a leading `{` selects the JSON
/// schema, anything else is diagram DSL.
pub fn load_file(path: &Path) -> Result<CoxeterMatrix, CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::domain(format!("cannot read {}: {e}", path.display())))?;
    let first = bytes.iter().find(|b| !b.is_ascii_whitespace());
    let matrix = if first == Some(&b'{') {
        parse_matrix(&bytes)?
    } else {
        let text = std::str::from_utf8(&bytes)
            .map_err(|_| CliError::domain(format!("{} is not UTF-8", path.display())))?;
        parse_diagram(text)?
    };
    Ok(matrix)
}

pub fn load_family(name: &str, n: usize) -> Result<CoxeterMatrix, CliError> {
    let family = Family::parse(name)
        .ok_or_else(|| CliError::usage(format!("unknown family `{name}` (atilde2 | btilde8)")))?;
    Ok(builtin_family(family, n)?)
}

/// A compare operand: `atilde2:5`, `btilde8:10`, or a file path.
pub fn load_spec(spec: &str) -> Result<(String, CoxeterMatrix), CliError> {
    if let Some((name, n)) = spec.split_once(':') {
        if Family::parse(name).is_some() {
            let n: usize = n
                .parse()
                .map_err(|_| CliError::usage(format!("bad family parameter in `{spec}`")))?;
            return Ok((spec.to_string(), load_family(name, n)?));
        }
    }
    let path = Path::new(spec);
    Ok((spec.to_string(), load_file(path)?))
}
