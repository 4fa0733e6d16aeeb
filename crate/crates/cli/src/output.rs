//! Trace CSV, the strategy comparison table, and number formatting.
//!
//! CSV bodies are deterministic for a fixed run: no timestamps, `.` decimal
//! points, and 17 significant digits so every double round-trips.

use std::io::{self, Write};

use acgd_core::{SolveStatus, TraceRow};

pub const CSV_HEADER: &str = "iter,objective,gap,t,L,backtracks,gamma,grad_evals,fn_evals";

/// 17 significant digits: one leading digit plus 16 after the point.
pub fn g17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_trace<W: Write>(mut w: W, trace: &[TraceRow]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for row in trace {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{}",
            row.k,
            g17(row.objective),
            g17(row.gap),
            g17(row.t),
            g17(row.l_accepted),
            row.n_backtracks,
            g17(row.gamma),
            row.cumulative_grad_evals,
            row.cumulative_fn_evals
        )?;
    }
    w.flush()
}

/// One comparison row; mirrors the summary-table columns.
#[derive(Clone, Debug)]
pub struct SummaryRow {
    pub strategy: String,
    pub status: SolveStatus,
    pub iterations: usize,
    pub objective: f64,
    pub gap: f64,
    pub grad_evals: u64,
    pub fn_evals: u64,
}

/// Render the comparison table. The best value per column gets a `*`:
/// objective and gap over all finished rows, iteration and evaluation
/// counts only over converged rows (a stalled run that merely ran out of
/// budget did not "win" the iteration column).
pub fn render_table(rows: &[Result<SummaryRow, String>]) -> String {
    let best_obj = best_by(rows, |_| true, |r| r.objective);
    let best_gap = best_by(rows, |_| true, |r| r.gap);
    let converged = |r: &SummaryRow| r.status == SolveStatus::Converged;
    let best_iters = best_by(rows, converged, |r| r.iterations as f64);
    let best_grad = best_by(rows, converged, |r| r.grad_evals as f64);
    let best_fn = best_by(rows, converged, |r| r.fn_evals as f64);

    let header = [
        "strategy",
        "iterations",
        "objective",
        "gap",
        "grad_evals",
        "fn_evals",
    ];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for row in rows {
        match row {
            Ok(r) => cells.push(vec![
                r.strategy.clone(),
                mark(format!("{}", r.iterations), best_iters, r.iterations as f64),
                mark(format!("{:.6e}", r.objective), best_obj, r.objective),
                mark(format!("{:.6e}", r.gap), best_gap, r.gap),
                mark(format!("{}", r.grad_evals), best_grad, r.grad_evals as f64),
                mark(format!("{}", r.fn_evals), best_fn, r.fn_evals as f64),
            ]),
            Err(msg) => cells.push(vec![
                msg_strategy(msg),
                format!("error: {}", msg_body(msg)),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ]),
        }
    }

    // Error rows put a free-form message in column 1; keep them out of the
    // width computation so they cannot stretch the numeric columns.
    let widths: Vec<usize> = (0..header.len())
        .map(|c| {
            cells
                .iter()
                .filter(|row| c == 0 || row[2..].iter().any(|s| !s.is_empty()))
                .map(|row| row[c].len())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for row in &cells {
        let mut line = String::new();
        for (c, cell) in row.iter().enumerate() {
            if c > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            // The error message in column 1 may overflow its column; that
            // row has no further cells worth aligning.
            if row[2..].iter().any(|s| !s.is_empty()) || c == 0 {
                for _ in cell.len()..widths[c] {
                    line.push(' ');
                }
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// Rows carry `strategy: message`; split for display.
fn msg_strategy(msg: &str) -> String {
    msg.split_once(": ")
        .map(|(s, _)| s.to_string())
        .unwrap_or_else(|| msg.to_string())
}

fn msg_body(msg: &str) -> String {
    msg.split_once(": ")
        .map(|(_, b)| b.to_string())
        .unwrap_or_else(|| msg.to_string())
}

fn best_by(
    rows: &[Result<SummaryRow, String>],
    eligible: impl Fn(&SummaryRow) -> bool,
    value: impl Fn(&SummaryRow) -> f64,
) -> Option<f64> {
    rows.iter()
        .filter_map(|r| r.as_ref().ok())
        .filter(|r| eligible(r))
        .map(value)
        .min_by(|a, b| a.total_cmp(b))
}

fn mark(text: String, best: Option<f64>, value: f64) -> String {
    match best {
        Some(b) if value == b => format!("{text}*"),
        _ => text,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_floats_round_trip() {
        for v in [
            0.1,
            1.0 / 3.0,
            2.0_f64.powi(-52),
            6.02214076e23,
            -9.999208e-6,
            0.0,
        ] {
            let s = g17(v);
            let back: f64 = s.parse().expect("parse back");
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} must round-trip");
            assert!(!s.contains(','), "decimal separator must be '.': {s}");
        }
    }

    #[test]
    fn trace_csv_has_the_fixed_header_and_one_line_per_row() {
        let rows = vec![TraceRow {
            k: 0,
            objective: 1.5,
            gap: 0.25,
            t: 0.5,
            l_accepted: 2.0,
            n_backtracks: 1,
            gamma: 0.25,
            cumulative_grad_evals: 2,
            cumulative_fn_evals: 3,
        }];
        let mut buf = Vec::new();
        write_trace(&mut buf, &rows).expect("write");
        let text = String::from_utf8(buf).expect("utf8");
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some(CSV_HEADER));
        let row = lines.next().expect("one data row");
        assert!(row.starts_with("0,1.5000000000000000e0,2.5000000000000000e-1,"));
        assert!(row.ends_with(",1,2.5000000000000000e-1,2,3"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn best_marks_skip_unconverged_iteration_counts() {
        let rows = vec![
            Ok(SummaryRow {
                strategy: "a".into(),
                status: SolveStatus::Converged,
                iterations: 120,
                objective: 1e-6,
                gap: 1e-6,
                grad_evals: 240,
                fn_evals: 360,
            }),
            Ok(SummaryRow {
                strategy: "b".into(),
                status: SolveStatus::MaxIterReached,
                iterations: 50,
                objective: 3.0,
                gap: 2.0,
                grad_evals: 100,
                fn_evals: 150,
            }),
            Err("c: no Lipschitz constant".into()),
        ];
        let table = render_table(&rows);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(lines.len(), 4, "header plus three rows:\n{table}");
        assert!(
            lines[1].contains("120*"),
            "converged row wins iterations even though 50 < 120:\n{table}"
        );
        assert!(lines[1].contains("1.000000e-6*"));
        assert!(!lines[2].contains("50*"), "stalled row must not be marked:\n{table}");
        assert!(lines[3].contains("error: no Lipschitz constant"));
    }
}
