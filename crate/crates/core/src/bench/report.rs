use std::fmt::Write as _;
use std::str::FromStr;

use super::{BenchError, Cell, Report, TableId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Csv,
    Md,
    Json,
}

impl FromStr for Format {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Md),
            "json" => Ok(Format::Json),
            _ => Err(BenchError::UnknownFormat(s.to_string())),
        }
    }
}

/// C-style `%.{digits}e`: `9.81e-07`, `1.00e+00`.
pub fn format_sci(v: f64, digits: usize) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    let s = format!("{v:.digits$e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn opt_usize(v: Option<usize>) -> String {
    v.map(|k| k.to_string()).unwrap_or_default()
}

fn emit_csv(report: &Report) -> Vec<u8> {
    let with_acoc = report.table == TableId::T10;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "table",
        "method",
        "n",
        "iterations",
        "final_gnorm",
        "cpu_seconds",
        "status",
        "seed",
    ];
    if with_acoc {
        header.push("acoc");
    }
    w.write_record(&header).expect("in-memory write");
    for c in &report.cells {
        let mut row = vec![
            c.table.clone(),
            c.method.clone(),
            c.n.to_string(),
            opt_usize(c.iterations),
            c.final_gnorm.map(|g| format!("{g:e}")).unwrap_or_default(),
            format!("{:.3}", c.cpu_seconds),
            c.status.clone(),
            c.seed.map(|s| s.to_string()).unwrap_or_default(),
        ];
        if with_acoc {
            row.push(c.acoc.map(|r| format!("{r:.4}")).unwrap_or_default());
        }
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Iteration count as shown in a grid: `-` when the run did not converge.
fn grid_entry(cell: Option<&Cell>) -> String {
    match cell {
        None => String::new(),
        Some(c) if c.status == "converged" => opt_usize(c.iterations),
        Some(c) if c.status == "max_iter_reached" => "-".into(),
        Some(c) => format!("- ({})", c.status),
    }
}

fn gnorm_entry(c: &Cell) -> String {
    c.final_gnorm
        .map(|g| format_sci(g, 2))
        .unwrap_or_else(|| "-".into())
}

/// Footer naming the reference columns or rows that have no implementation.
fn external_footer(out: &mut String, names: &[&str]) {
    let verb = if names.len() == 1 { "is an" } else { "are" };
    let noun = if names.len() == 1 {
        "method"
    } else {
        "methods"
    };
    let _ = writeln!(
        out,
        "\n{} {verb} external reference {noun} without a definition here and omitted.",
        names.join(", ")
    );
}

fn emit_markdown(report: &Report) -> String {
    let mut out = String::new();
    let labels: Vec<&str> = report.methods.iter().map(|m| m.label()).collect();
    let _ = writeln!(out, "### {} ({})\n", report.table, report.table.problem());
    if report.table.is_iteration_grid() {
        let _ = writeln!(out, "| n | {} |", labels.join(" | "));
        let _ = writeln!(out, "|---|{}", "---|".repeat(labels.len()));
        for &n in &report.sizes {
            let row: Vec<String> = report
                .methods
                .iter()
                .map(|&m| grid_entry(report.cell(m, n)))
                .collect();
            let _ = writeln!(out, "| {n} | {} |", row.join(" | "));
        }
        let _ = writeln!(
            out,
            "\n`-` marks a run that stopped without meeting the tolerance."
        );
        external_footer(&mut out, &["NA"]);
        return out;
    }
    match report.table {
        TableId::T10 => {
            let _ = writeln!(out, "| Method | k | ‖g‖ | ACOC |");
            let _ = writeln!(out, "|---|---|---|---|");
            for &m in &report.methods {
                for c in report.cells.iter().filter(|c| c.method == m.as_str()) {
                    let rho = c
                        .acoc
                        .map(|r| format!("{r:.2}"))
                        .unwrap_or_else(|| "-".into());
                    let g = c
                        .final_gnorm
                        .map(|g| format_sci(g, 4))
                        .unwrap_or_else(|| "-".into());
                    let _ = writeln!(
                        out,
                        "| {} | {} | {g} | {rho} |",
                        m.label(),
                        opt_usize(c.iterations)
                    );
                }
            }
        }
        _ => {
            for &n in &report.sizes {
                if report.sizes.len() > 1 {
                    let _ = writeln!(out, "n = {n}\n");
                }
                let _ = writeln!(out, "| Method | k | ‖g‖ | CPU (s) | status |");
                let _ = writeln!(out, "|---|---|---|---|---|");
                for &m in &report.methods {
                    if let Some(c) = report.cell(m, n) {
                        let _ = writeln!(
                            out,
                            "| {} | {} | {} | {:.3} | {} |",
                            m.label(),
                            opt_usize(c.iterations),
                            gnorm_entry(c),
                            c.cpu_seconds,
                            c.status
                        );
                    }
                }
                out.push('\n');
            }
            if report.table == TableId::T9 {
                external_footer(&mut out, &["ABB", "ABBmin1", "ODH1"]);
            }
        }
    }
    out
}

/// Serialises a report. CSV and JSON carry one record per cell in run order.
pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Csv => emit_csv(report),
        Format::Md => emit_markdown(report).into_bytes(),
        Format::Json => {
            let mut v = serde_json::to_vec_pretty(&report.cells).expect("cells serialise");
            v.push(b'\n');
            v
        }
    }
}
