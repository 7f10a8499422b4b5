//! Deterministic export: JSON with struct-order keys, CSV with RFC-4180
//! quoting, a header row, '.' decimals and 17-significant-digit floats.
//! The same report always serializes to the same bytes.

use std::fs;
use std::io::Write;

use anyhow::{bail, Context, Result};
use oppenheim_core::bounds::{BandCheck, BandVariant, BlockingLayout, GapEstimate, Verdict};
use oppenheim_core::dist::{ExtendedLimit, MdaReport};
use oppenheim_core::engine::SamplePath;
use oppenheim_core::extremes::{EcdfReport, ScanReport};

use crate::config::OutputFormat;
use crate::report::{MixingRow, ReportDocument, ResultsPayload};

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_field(raw: &str) -> String {
    if raw.contains(',') || raw.contains('"') || raw.contains('\n') {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw.to_string()
    }
}

fn csv_row(fields: &[String]) -> String {
    let quoted: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    quoted.join(",")
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::WithinBand => "within_band",
        Verdict::Violated => "violated",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn variant_name(v: BandVariant) -> &'static str {
    match v {
        BandVariant::Lemma1LowerUpper => "lemma1_lower_upper",
        BandVariant::Thm6I => "thm6_i",
        BandVariant::Thm6II => "thm6_ii",
        BandVariant::Thm6III => "thm6_iii",
        BandVariant::Lemma2 => "lemma2",
        BandVariant::Lemma9 => "lemma9",
        BandVariant::DeltaMixing => "delta_mixing",
        BandVariant::Prop3II => "prop3_ii",
        BandVariant::Prop3III => "prop3_iii",
        BandVariant::Prop4Total => "prop4_total",
    }
}

pub fn to_json_bytes(report: &ReportDocument) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(report).context("json export")?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn sample_csv(path: &SamplePath) -> Vec<String> {
    let mut lines = vec!["step,B,Q,R,alpha,beta,w".to_string()];
    for (i, step) in path.steps.iter().enumerate() {
        lines.push(csv_row(&[
            (i + 1).to_string(),
            step.h_next.to_string(),
            fmt_f64(step.q),
            fmt_f64(step.ratio),
            fmt_f64(step.alpha_end),
            fmt_f64(step.beta_end),
            fmt_f64(step.w),
        ]));
    }
    lines
}

fn ecdf_csv(report: &EcdfReport) -> Vec<String> {
    let mut lines = vec!["x,empirical,se,theoretical".to_string()];
    for i in 0..report.grid.len() {
        lines.push(csv_row(&[
            fmt_f64(report.grid[i]),
            fmt_f64(report.empirical[i].p),
            fmt_f64(report.empirical[i].se),
            fmt_f64(report.theoretical[i]),
        ]));
    }
    lines
}

fn scan_csv(report: &ScanReport) -> Vec<String> {
    let mut lines = vec!["x,empirical,se".to_string()];
    for i in 0..report.grid.len() {
        lines.push(csv_row(&[
            fmt_f64(report.grid[i]),
            fmt_f64(report.empirical[i].p),
            fmt_f64(report.empirical[i].se),
        ]));
    }
    lines
}

fn params_compact(check: &BandCheck) -> String {
    let p = &check.band.params;
    let mut parts = Vec::new();
    if let Some(a) = p.a {
        parts.push(format!("a={a}"));
    }
    if let Some(b) = p.b {
        parts.push(format!("b={b}"));
    }
    if let Some(n) = p.n {
        parts.push(format!("n={n}"));
    }
    if let Some(k) = p.k {
        parts.push(format!("k={k}"));
    }
    if let Some(m) = p.m {
        parts.push(format!("m={m}"));
    }
    if let Some(u) = p.u {
        parts.push(format!("u={u}"));
    }
    if let Some(xs) = &p.xs {
        let xs: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
        parts.push(format!("xs=[{}]", xs.join(" ")));
    }
    if let Some(mults) = &p.multiplicities {
        let qs: Vec<String> = mults.iter().map(|q| q.to_string()).collect();
        parts.push(format!("q=[{}]", qs.join(" ")));
    }
    parts.join(";")
}

fn bounds_csv(checks: &[BandCheck]) -> Vec<String> {
    let mut lines = vec!["variant,params,center,half_width,p_hat,se,verdict".to_string()];
    for check in checks {
        lines.push(csv_row(&[
            variant_name(check.band.variant).to_string(),
            params_compact(check),
            check.band.center.map(fmt_f64).unwrap_or_default(),
            fmt_f64(check.band.half_width),
            fmt_f64(check.p_hat),
            fmt_f64(check.se),
            verdict_name(check.verdict).to_string(),
        ]));
    }
    lines
}

fn mixing_csv(rows: &[MixingRow]) -> Vec<String> {
    let mut lines = vec!["u,empirical_gap,se,theoretical_bound,verdict".to_string()];
    for row in rows {
        lines.push(csv_row(&[
            fmt_f64(row.u),
            fmt_f64(row.estimate.empirical_gap),
            fmt_f64(row.estimate.standard_error),
            fmt_f64(row.estimate.theoretical_bound),
            verdict_name(row.estimate.verdict).to_string(),
        ]));
    }
    lines
}

fn blocking_csv(layout: &BlockingLayout, gap: &GapEstimate) -> Vec<String> {
    vec![
        "n,k,m,n_prime,empirical_gap,se,theoretical_bound,verdict".to_string(),
        csv_row(&[
            layout.n.to_string(),
            layout.k.to_string(),
            layout.m.to_string(),
            layout.n_prime.to_string(),
            fmt_f64(gap.empirical_gap),
            fmt_f64(gap.standard_error),
            fmt_f64(gap.theoretical_bound),
            verdict_name(gap.verdict).to_string(),
        ]),
    ]
}

fn extended_limit_str(limit: &ExtendedLimit) -> String {
    match limit {
        ExtendedLimit::Finite(v) => fmt_f64(*v),
        ExtendedLimit::Infinite => "infinite".to_string(),
        ExtendedLimit::Undetermined => "undetermined".to_string(),
    }
}

fn mda_csv(report: &MdaReport) -> Vec<String> {
    let mut lines = vec!["section,field,value".to_string()];
    let mut push = |section: &str, field: &str, value: String| {
        lines.push(csv_row(&[section.to_string(), field.to_string(), value]));
    };
    push("condf", "beta_used", fmt_f64(report.condf.beta_used));
    push(
        "condf",
        "max_violation",
        fmt_f64(report.condf.max_violation),
    );
    push("condf", "pass", report.condf.pass.to_string());
    for (h, estimate) in report.eq8.h_values.iter().zip(&report.eq8.liminf_estimates) {
        push("eq8", &format!("liminf[h={h}]"), fmt_f64(*estimate));
    }
    push("eq8", "pass", report.eq8.pass.to_string());
    push(
        "eq10",
        "limit_estimate",
        extended_limit_str(&report.eq10.limit_estimate),
    );
    push("eq10", "applicable", report.eq10.applicable.to_string());
    push("eq10", "pass", report.eq10.pass.to_string());
    push(
        "tail",
        "ell0_plus",
        extended_limit_str(&report.tail.ell0_plus),
    );
    push(
        "tail",
        "ell1_minus",
        extended_limit_str(&report.tail.ell1_minus),
    );
    push(
        "tail",
        "cdf_limit_at_one",
        fmt_f64(report.tail.cdf_limit_at_one),
    );
    lines
}

pub fn to_csv_bytes(report: &ReportDocument) -> Result<Vec<u8>> {
    let lines = match &report.results {
        ResultsPayload::Sample(path) => sample_csv(path),
        ResultsPayload::Ecdf(ecdf) => ecdf_csv(ecdf),
        ResultsPayload::Scan(scan) => scan_csv(scan),
        ResultsPayload::Bounds { checks } => bounds_csv(checks),
        ResultsPayload::Mixing { rows } => mixing_csv(rows),
        ResultsPayload::Blocking { layout, gap } => blocking_csv(layout, gap),
        ResultsPayload::Mda(mda) => mda_csv(mda),
    };
    let mut bytes = lines.join("\r\n").into_bytes();
    bytes.extend_from_slice(b"\r\n");
    Ok(bytes)
}

pub fn render(report: &ReportDocument, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => to_json_bytes(report),
        OutputFormat::Csv => to_csv_bytes(report),
    }
}

/// Writes the rendered report to the path, or stdout for `None`.
pub fn export(report: &ReportDocument, format: OutputFormat, path: Option<&str>) -> Result<()> {
    let bytes = render(report, format)?;
    match path {
        Some(path) => {
            fs::write(path, &bytes).with_context(|| format!("writing {path}"))?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(&bytes).context("writing stdout")?;
        }
    }
    Ok(())
}

/// Rejects unsupported format/path combinations early.
pub fn validate_format_tag(tag: &str) -> Result<OutputFormat> {
    match tag {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => bail!("output.format: unsupported tag `{other}` (csv | json)"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting_has_17_significant_digits() {
        assert_eq!(fmt_f64(0.125), "1.2500000000000000e-1");
        assert_eq!(fmt_f64(1.0 / 3.0), "3.3333333333333331e-1");
        let x = 0.1 + 0.2;
        let parsed: f64 = fmt_f64(x).parse().unwrap();
        assert_eq!(parsed.to_bits(), x.to_bits());
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn format_tags() {
        assert!(validate_format_tag("csv").is_ok());
        assert!(validate_format_tag("json").is_ok());
        assert!(validate_format_tag("yaml").is_err());
    }
}
