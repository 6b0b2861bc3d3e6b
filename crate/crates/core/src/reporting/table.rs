use std::fmt::Write;

use crate::elicitation::InfoTable;
use crate::hazards::Worksheet;
use crate::model::Model;

fn markdown_cell(cell: &str) -> String {
    cell.replace('|', "\\|").replace(['\r', '\n'], " ")
}

fn markdown_row(out: &mut String, cells: impl IntoIterator<Item = String>) {
    let cells: Vec<_> = cells.into_iter().collect();
    let _ = writeln!(out, "| {} |", cells.join(" | "));
}

/// Pipe table with a separator row; `|` inside cells is escaped as `\|`.
pub fn table_to_markdown(table: &InfoTable) -> String {
    let mut out = String::new();
    markdown_row(&mut out, table.columns.iter().map(|c| markdown_cell(c)));
    markdown_row(&mut out, table.columns.iter().map(|_| "---".to_string()));
    for row in &table.rows {
        markdown_row(&mut out, row.iter().map(|c| markdown_cell(c)));
    }
    out
}

fn csv_field(field: &str) -> String {
    if field.contains([',', '"', '\r', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn csv_row(out: &mut String, fields: &[String]) {
    let fields: Vec<_> = fields.iter().map(|f| csv_field(f)).collect();
    out.push_str(&fields.join(","));
    out.push_str("\r\n");
}

/// RFC 4180: header first, CRLF line endings, fields with commas, quotes or
/// line breaks quoted with inner quotes doubled.
pub fn table_to_csv(table: &InfoTable) -> String {
    let mut out = String::new();
    csv_row(&mut out, &table.columns);
    for row in &table.rows {
        csv_row(&mut out, row);
    }
    out
}

pub const WORKSHEET_COLUMNS: [&str; 5] = ["Information item", "Guide word", "Consequence", "Severity", "Mitigation"];

/// A worksheet as a table, one row per (item, guide word).
pub fn worksheet_table(model: &Model, sheet: &Worksheet) -> InfoTable {
    InfoTable {
        title: format!("Information hazards for the \"{}\" responsibility", sheet.responsibility),
        columns: WORKSHEET_COLUMNS.iter().map(|c| c.to_string()).collect(),
        rows: sheet
            .rows
            .iter()
            .map(|r| {
                vec![
                    model.resource_name(&r.item).to_string(),
                    r.guide_word.to_string(),
                    r.consequence.clone(),
                    r.severity.to_string(),
                    r.mitigation.clone().unwrap_or_default(),
                ]
            })
            .collect(),
    }
}
