//! Parsing and rendering of report streams.

use anyhow::{bail, Context, Result};
use toroidal_core::report::{RelationReport, Status, SummaryLine, SummaryReport};

#[derive(Debug, Default)]
pub struct ReportStream {
    pub reports: Vec<RelationReport>,
    pub summary: Option<SummaryReport>,
}

pub fn parse_stream(text: &str) -> Result<ReportStream> {
    let mut s = ReportStream::default();
    for (no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        if s.summary.is_some() {
            bail!("line {}: content after the summary line", no + 1);
        }
        if let Ok(r) = serde_json::from_str::<RelationReport>(line) {
            s.reports.push(r);
            continue;
        }
        let sl: SummaryLine = serde_json::from_str(line).with_context(|| format!("line {}: neither a report nor a summary", no + 1))?;
        s.summary = Some(sl.summary);
    }
    Ok(s)
}

pub fn render_json(s: &ReportStream) -> Result<String> {
    let mut out = String::new();
    for r in &s.reports {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    if let Some(sum) = &s.summary {
        out.push_str(&serde_json::to_string(&SummaryLine { summary: sum.clone() })?);
        out.push('\n');
    }
    Ok(out)
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "FAIL",
        Status::Skipped => "skipped",
    }
}

fn list(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn render_table(s: &ReportStream) -> String {
    let header = ["relation", "indices", "probe", "status", "modes", "instances"];
    let rows: Vec<[String; 6]> = s
        .reports
        .iter()
        .map(|r| {
            [
                r.relation.clone(),
                list(&r.indices),
                r.probe.clone(),
                status_text(r.status()).to_string(),
                list(&r.modes),
                r.instances.to_string(),
            ]
        })
        .collect();
    let mut width: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in &rows {
        for (w, c) in width.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let parts: Vec<String> = cells.iter().zip(&width).map(|(c, w)| format!("{:<w$}", c, w = *w)).collect();
        parts.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.to_vec());
    for row in &rows {
        out.push_str(&line(row.iter().map(|c| c.as_str()).collect()));
    }
    if let Some(sum) = &s.summary {
        let t = &sum.totals;
        out.push_str(&format!("checked {}  passed {}  failed {}  skipped {}\n", t.checked, t.passed, t.failed, t.skipped));
    }
    out
}
