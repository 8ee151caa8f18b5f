//! Single-column numeric CSV input for `fit` and `gof`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};

/// Reads one numeric column. A first row that does not parse as a number is
/// taken as a header; `column` then selects by name, otherwise the first
/// column is used. Errors name the 1-based line of the offending row.
pub fn read_column(path: &Path, column: Option<&str>) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let mut records = reader.records();
    let first = match records.next() {
        Some(r) => r.with_context(|| format!("{}: line 1", path.display()))?,
        None => bail!("{} is empty", path.display()),
    };
    let header = first.get(0).is_some_and(|f| f.parse::<f64>().is_err());
    let idx = match (header, column) {
        (true, Some(name)) => first
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| anyhow!("column `{name}` not found in header of {}", path.display()))?,
        (false, Some(name)) => bail!("column `{name}` requested but {} has no header", path.display()),
        (_, None) => 0,
    };
    let mut values = Vec::new();
    let mut push = |rec: &csv::StringRecord| -> Result<()> {
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            return Ok(());
        }
        let field = rec
            .get(idx)
            .ok_or_else(|| anyhow!("{}: line {line}: missing column {}", path.display(), idx + 1))?;
        let v: f64 = field
            .parse()
            .map_err(|_| anyhow!("{}: line {line}: cannot parse `{field}` as a number", path.display()))?;
        if !v.is_finite() {
            bail!("{}: line {line}: value `{field}` is not finite", path.display());
        }
        values.push(v);
        Ok(())
    };
    if !header {
        push(&first)?;
    }
    for rec in records {
        let rec = rec.with_context(|| format!("{}: malformed row", path.display()))?;
        push(&rec)?;
    }
    if values.is_empty() {
        bail!("{} contains no data rows", path.display());
    }
    Ok(values)
}
