//! The CSV interchange format: a fixed, documented schema with one row per
//! verified trial, ASCII decimal integers, and deterministic row order.
//! Per-category query columns follow the oracle ledger's canonical tag list,
//! with dashes mapped to underscores and a `q_` prefix.

use std::path::Path;

use anyhow::{bail, Context, Result};
use cutforest::oracle::tags;

/// One verified trial. `per_category` is aligned with `tags::CANONICAL`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub algorithm: String,
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub cut_queries_total: u64,
    pub per_category: Vec<u64>,
    pub phases_run: u64,
    pub aborts: u64,
    pub sampled_edges_total: u64,
    pub components_final: u64,
    pub verified: bool,
    pub wall_time_ms: u64,
}

/// Per-category column names, in ledger order.
pub fn category_columns() -> Vec<String> {
    tags::CANONICAL.iter().map(|t| format!("q_{}", t.replace('-', "_"))).collect()
}

/// The fixed header row naming every field.
pub fn header() -> String {
    let mut cols: Vec<String> =
        vec!["algorithm".into(), "family".into(), "n".into(), "seed".into(), "cut_queries_total".into()];
    cols.extend(category_columns());
    cols.extend(
        ["phases_run", "aborts", "sampled_edges_total", "components_final", "verified", "wall_time_ms"]
            .map(String::from),
    );
    cols.join(",")
}

pub fn row_line(row: &ResultRow) -> String {
    assert_eq!(
        row.per_category.len(),
        tags::CANONICAL.len(),
        "per-category counts must cover every ledger tag"
    );
    let mut fields: Vec<String> = vec![
        row.algorithm.clone(),
        row.family.clone(),
        row.n.to_string(),
        row.seed.to_string(),
        row.cut_queries_total.to_string(),
    ];
    fields.extend(row.per_category.iter().map(u64::to_string));
    fields.push(row.phases_run.to_string());
    fields.push(row.aborts.to_string());
    fields.push(row.sampled_edges_total.to_string());
    fields.push(row.components_final.to_string());
    fields.push(if row.verified { "true".into() } else { "false".into() });
    fields.push(row.wall_time_ms.to_string());
    fields.join(",")
}

pub fn write_rows(path: &Path, rows: &[ResultRow]) -> Result<()> {
    let mut text = header();
    text.push('\n');
    for row in rows {
        text.push_str(&row_line(row));
        text.push('\n');
    }
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

/// Reads a file written by `write_rows`, insisting on the exact schema.
pub fn read_rows(path: &Path) -> Result<Vec<ResultRow>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut lines = text.lines();
    let first = lines.next().context("empty CSV file")?;
    if first != header() {
        bail!("unrecognized CSV header in {}", path.display());
    }
    let cats = tags::CANONICAL.len();
    let mut rows = Vec::new();
    for (idx, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = 5 + cats + 6;
        if fields.len() != expected {
            bail!("{}:{}: expected {expected} fields, got {}", path.display(), idx + 2, fields.len());
        }
        let loc = || format!("{}:{}", path.display(), idx + 2);
        let mut per_category = Vec::with_capacity(cats);
        for f in &fields[5..5 + cats] {
            per_category.push(f.parse::<u64>().with_context(loc)?);
        }
        let tail = &fields[5 + cats..];
        rows.push(ResultRow {
            algorithm: fields[0].to_string(),
            family: fields[1].to_string(),
            n: fields[2].parse().with_context(loc)?,
            seed: fields[3].parse().with_context(loc)?,
            cut_queries_total: fields[4].parse().with_context(loc)?,
            per_category,
            phases_run: tail[0].parse().with_context(loc)?,
            aborts: tail[1].parse().with_context(loc)?,
            sampled_edges_total: tail[2].parse().with_context(loc)?,
            components_final: tail[3].parse().with_context(loc)?,
            verified: match tail[4] {
                "true" => true,
                "false" => false,
                other => bail!("{}: bad boolean {other:?}", loc()),
            },
            wall_time_ms: tail[5].parse().with_context(loc)?,
        });
    }
    Ok(rows)
}

/// Numeric value of a named column, for aggregation.
pub fn column_value(row: &ResultRow, column: &str) -> Option<f64> {
    match column {
        "n" => return Some(row.n as f64),
        "seed" => return Some(row.seed as f64),
        "cut_queries_total" => return Some(row.cut_queries_total as f64),
        "phases_run" => return Some(row.phases_run as f64),
        "aborts" => return Some(row.aborts as f64),
        "sampled_edges_total" => return Some(row.sampled_edges_total as f64),
        "components_final" => return Some(row.components_final as f64),
        "wall_time_ms" => return Some(row.wall_time_ms as f64),
        _ => {}
    }
    category_columns()
        .iter()
        .position(|c| c == column)
        .map(|i| row.per_category[i] as f64)
}
