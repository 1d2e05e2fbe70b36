//! Report rendering: JSON (via serde) and CSV with an identical metric-row
//! schema `{label, value, threshold, op, pass}`.

use serde_json::json;
use spinor_gordon::{GhostVerdict, MetricOp, ScenarioReport};

use crate::config::OutputFormat;

fn op_str(op: MetricOp) -> &'static str {
    match op {
        MetricOp::Le => "le",
        MetricOp::Ge => "ge",
    }
}

pub fn render_report(report: &ScenarioReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            serde_json::to_string_pretty(report).expect("report serializes") + "\n"
        }
        OutputFormat::Csv => report_to_csv(report),
    }
}

fn report_to_csv(report: &ScenarioReport) -> String {
    let mut out = String::new();
    out.push_str(&format!("# scenario = {}\n", report.name));
    out.push_str(&format!("# overall = {}\n", if report.overall { "pass" } else { "fail" }));
    out.push_str(&format!("# runtime_seconds = {:.6}\n", report.runtime_seconds));
    let g = &report.config.grid;
    out.push_str(&format!(
        "# grid = lo({:?}) hi({:?}) counts({:?})\n",
        g.lo, g.hi, g.counts
    ));
    out.push_str(&format!(
        "# params = hbar {} c {} m {}\n",
        report.config.hbar, report.config.c, report.config.m
    ));
    out.push_str(&format!("# parallel = {}\n", report.config.parallel));
    for (label, value) in &report.config.tolerances {
        out.push_str(&format!("# tol.{label} = {value:e}\n"));
    }
    for note in &report.notes {
        out.push_str(&format!("# note = {note}\n"));
    }
    out.push_str("label,value,threshold,op,pass\n");
    for m in &report.metrics {
        out.push_str(&format!(
            "\"{}\",{:.16e},{:.16e},{},{}\n",
            m.label,
            m.value,
            m.threshold,
            op_str(m.op),
            m.pass
        ));
    }
    out
}

pub fn render_summary(reports: &[ScenarioReport], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let rows: Vec<_> = reports
                .iter()
                .map(|r| {
                    json!({
                        "name": r.name,
                        "overall": r.overall,
                        "metrics": r.metrics.len(),
                        "failed": r.failed_metrics().count(),
                        "runtime_seconds": r.runtime_seconds,
                    })
                })
                .collect();
            let all_pass = reports.iter().all(|r| r.overall);
            serde_json::to_string_pretty(&json!({
                "scenarios": rows,
                "all_pass": all_pass,
            }))
            .expect("summary serializes")
                + "\n"
        }
        OutputFormat::Csv => {
            let mut out = String::from("name,overall,metrics,failed,runtime_seconds\n");
            for r in reports {
                out.push_str(&format!(
                    "\"{}\",{},{},{},{:.6}\n",
                    r.name,
                    r.overall,
                    r.metrics.len(),
                    r.failed_metrics().count(),
                    r.runtime_seconds
                ));
            }
            out
        }
    }
}

pub fn render_verdict(label: &str, verdict: &GhostVerdict) -> String {
    serde_json::to_string_pretty(&json!({
        "field": label,
        "verdict": verdict,
    }))
    .expect("verdict serializes")
        + "\n"
}
