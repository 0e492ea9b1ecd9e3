//! Sample ingestion: two single-column files, or one `group,value` file.

use std::fs::File;
use std::path::{Path, PathBuf};

use dominance_core::Empirical;

use crate::CliError;

fn reader(path: &Path) -> Result<csv::Reader<File>, CliError> {
    let file = File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file))
}

fn parse_value(path: &Path, line: u64, field: &str) -> Result<f64, CliError> {
    let v: f64 = field
        .parse()
        .map_err(|_| CliError::Input(format!("{}:{line}: '{field}' is not a number", path.display())))?;
    if !v.is_finite() {
        return Err(CliError::Input(format!("{}:{line}: non-finite value '{field}'", path.display())));
    }
    Ok(v)
}

fn line_of(record: &csv::StringRecord, fallback: u64) -> u64 {
    record.position().map_or(fallback, |p| p.line())
}

/// Reads one numeric column; a non-numeric first row is taken as a header.
pub fn read_column(path: &Path) -> Result<Vec<f64>, CliError> {
    let mut values = Vec::new();
    for (k, record) in reader(path)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let line = line_of(&record, k as u64 + 1);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 1 {
            return Err(CliError::Input(format!(
                "{}:{line}: expected one column, found {}",
                path.display(),
                record.len()
            )));
        }
        let field = &record[0];
        if k == 0 && field.parse::<f64>().is_err() {
            continue;
        }
        values.push(parse_value(path, line, field)?);
    }
    Ok(values)
}

/// Reads a `group,value` file with groups `x` and `y`; the header is optional.
pub fn read_grouped(path: &Path) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (k, record) in reader(path)?.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let line = line_of(&record, k as u64 + 1);
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(CliError::Input(format!(
                "{}:{line}: expected columns group,value, found {} fields",
                path.display(),
                record.len()
            )));
        }
        if k == 0 && record[0].eq_ignore_ascii_case("group") {
            continue;
        }
        let value = parse_value(path, line, &record[1])?;
        match record[0].to_ascii_lowercase().as_str() {
            "x" => x.push(value),
            "y" => y.push(value),
            other => {
                return Err(CliError::Input(format!(
                    "{}:{line}: unknown group '{other}' (expected x or y)",
                    path.display()
                )))
            }
        }
    }
    Ok((x, y))
}

fn to_empirical(name: &str, values: &[f64]) -> Result<Empirical, CliError> {
    Empirical::from_values(values).map_err(|e| CliError::Input(format!("sample {name}: {e}")))
}

/// Resolves the positional inputs into the `(x, y)` sample pair.
pub fn load_samples(inputs: &[PathBuf]) -> Result<(Empirical, Empirical), CliError> {
    let (x, y) = match inputs {
        [single] => read_grouped(single)?,
        [first, second] => (read_column(first)?, read_column(second)?),
        _ => {
            return Err(CliError::Usage(format!(
                "expected one group,value file or two single-column files, got {} paths",
                inputs.len()
            )))
        }
    };
    Ok((to_empirical("x", &x)?, to_empirical("y", &y)?))
}
