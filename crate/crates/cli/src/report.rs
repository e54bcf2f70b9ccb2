//! Report rows and their three renderings: human table, fixed-header CSV,
//! and JSON lines.
//!
//! Machine formats carry 17 significant digits (`{:.16e}` in CSV, shortest
//! round-trip in JSON); tables show 6. All output is deterministic for a
//! fixed config and seed.

use isoholder::FuzzSummary;
use serde::Serialize;

/// The fixed CSV column set shared by bound, chain, hh, and moment rows.
pub const CSV_HEADER: &str =
    "command,instance_id,p,q,lhs,refined,classical,slack_refined,refinement_gap,tightness,pass";

/// CSV columns of a fuzz summary (the worst instance is JSON-only, keeping
/// CSV fields quote-free).
pub const FUZZ_CSV_HEADER: &str = "command,case,seed,trials,violations,errors,min_relative_slack,tightness_min,tightness_mean,tightness_max";

#[derive(Debug, Clone, Serialize)]
pub struct ReportRow {
    pub command: String,
    pub instance_id: String,
    pub p: f64,
    /// Conjugate exponent; absent when undefined (moment rows with p = 1).
    pub q: Option<f64>,
    pub lhs: f64,
    pub refined: f64,
    pub classical: f64,
    pub slack_refined: f64,
    pub refinement_gap: f64,
    pub tightness: Option<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Csv,
    JsonLines,
}

/// `{:.16e}`: 17 significant digits, sign and exponent included.
fn machine(x: f64) -> String {
    format!("{x:.16e}")
}

fn machine_opt(x: Option<f64>) -> String {
    x.map(machine).unwrap_or_default()
}

/// Roughly printf's `%.*g`: `digits` significant digits, fixed point when
/// the exponent is moderate, scientific otherwise.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -4 || exp >= digits as i32 {
        format!("{:.*e}", digits - 1, x)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn sig_opt(x: Option<f64>, digits: usize) -> String {
    x.map(|v| sig(v, digits)).unwrap_or_else(|| "-".to_string())
}

pub fn render_rows(rows: &[ReportRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from(CSV_HEADER);
            out.push('\n');
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{}\n",
                    r.command,
                    r.instance_id,
                    machine(r.p),
                    machine_opt(r.q),
                    machine(r.lhs),
                    machine(r.refined),
                    machine(r.classical),
                    machine(r.slack_refined),
                    machine(r.refinement_gap),
                    machine_opt(r.tightness),
                    r.pass,
                ));
            }
            out
        }
        OutputFormat::JsonLines => {
            let mut out = String::new();
            for r in rows {
                out.push_str(&serde_json::to_string(r).expect("row serializes"));
                out.push('\n');
            }
            out
        }
        OutputFormat::Table => {
            let mut out = String::new();
            for r in rows {
                out.push_str(&format!("command        {}\n", r.command));
                out.push_str(&format!("instance       {}\n", r.instance_id));
                out.push_str(&format!("p              {}\n", sig(r.p, 6)));
                out.push_str(&format!("q              {}\n", sig_opt(r.q, 6)));
                out.push_str(&format!("lhs            {}\n", sig(r.lhs, 6)));
                out.push_str(&format!("refined        {}\n", sig(r.refined, 6)));
                out.push_str(&format!("classical      {}\n", sig(r.classical, 6)));
                out.push_str(&format!("slack_refined  {}\n", sig(r.slack_refined, 6)));
                out.push_str(&format!("refinement_gap {}\n", sig(r.refinement_gap, 6)));
                out.push_str(&format!("tightness      {}\n", sig_opt(r.tightness, 6)));
                out.push_str(&format!("pass           {}\n\n", r.pass));
            }
            out
        }
    }
}

pub fn render_fuzz(summary: &FuzzSummary, format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::from(FUZZ_CSV_HEADER);
            out.push('\n');
            out.push_str(&format!(
                "fuzz,{},{},{},{},{},{},{},{},{}\n",
                summary.case,
                summary.seed,
                summary.trials_run,
                summary.violations,
                summary.errors,
                machine_opt(summary.min_relative_slack),
                machine_opt(summary.tightness.min),
                machine_opt(summary.tightness.mean),
                machine_opt(summary.tightness.max),
            ));
            out
        }
        OutputFormat::JsonLines => {
            let mut out = serde_json::to_string(summary).expect("summary serializes");
            out.push('\n');
            out
        }
        OutputFormat::Table => {
            let mut out = String::new();
            out.push_str("command            fuzz\n");
            out.push_str(&format!("case               {}\n", summary.case));
            out.push_str(&format!("seed               {}\n", summary.seed));
            out.push_str(&format!("trials             {}\n", summary.trials_run));
            out.push_str(&format!("violations         {}\n", summary.violations));
            out.push_str(&format!("errors             {}\n", summary.errors));
            out.push_str(&format!(
                "min_rel_slack      {}\n",
                sig_opt(summary.min_relative_slack, 6)
            ));
            out.push_str(&format!(
                "tightness_min      {}\n",
                sig_opt(summary.tightness.min, 6)
            ));
            out.push_str(&format!(
                "tightness_mean     {}\n",
                sig_opt(summary.tightness.mean, 6)
            ));
            out.push_str(&format!(
                "tightness_max      {}\n",
                sig_opt(summary.tightness.max, 6)
            ));
            if let Some(worst) = &summary.worst_instance {
                out.push_str(&format!("worst_instance     {worst}\n"));
            }
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(sig(0.5576775358252053, 6), "0.557678");
        assert_eq!(sig(3.0980762113533156, 6), "3.09808");
        assert_eq!(sig(0.0, 6), "0");
        assert_eq!(sig(123456.789, 6), "123457");
        assert_eq!(sig(1.23456789e-7, 6), "1.23457e-7");
    }

    #[test]
    fn csv_has_fixed_header_and_machine_precision() {
        let row = ReportRow {
            command: "chain".into(),
            instance_id: "demo".into(),
            p: 2.0,
            q: Some(2.0),
            lhs: 0.5,
            refined: 0.5576775358252053,
            classical: 0.5773502691896258,
            slack_refined: 0.0576775358252053,
            refinement_gap: 0.0196727333644205,
            tightness: Some(0.9659258262890683),
            pass: true,
        };
        let out = render_rows(&[row], OutputFormat::Csv);
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let data = lines.next().unwrap();
        assert!(data.starts_with("chain,demo,2.0000000000000000e0,"));
        assert!(data.ends_with(",true"));
    }

    #[test]
    fn none_fields_render_empty_in_csv() {
        let row = ReportRow {
            command: "moment".into(),
            instance_id: "m".into(),
            p: 1.0,
            q: None,
            lhs: 0.0625,
            refined: 0.0625,
            classical: 0.0625,
            slack_refined: 0.0,
            refinement_gap: 0.0,
            tightness: None,
            pass: true,
        };
        let out = render_rows(&[row], OutputFormat::Csv);
        let data = out.lines().nth(1).unwrap();
        let fields: Vec<&str> = data.split(',').collect();
        assert_eq!(fields.len(), 11);
        assert_eq!(fields[3], "");
        assert_eq!(fields[9], "");
    }
}
