//! File writers: CSV series and JSON metrics. Numbers are written with 17
//! significant digits so a reload round-trips to the same f64 bits; rows
//! end with LF. Every file is written to a temp path in the destination
//! directory and renamed into place.

use crate::scenario_file::ResolvedScenario;
use blackstart::compare::ComparisonRow;
use blackstart::sim::{Series, SimResult};
use serde::Serialize;
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// `{:.16e}` prints one leading digit plus 16 fractional digits.
fn fmt(x: f64) -> String {
    format!("{x:.16e}")
}

fn atomic_write(path: &Path, write_body: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp: PathBuf = dir.join(format!(
        ".{}.tmp-{}",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("out"),
        std::process::id()
    ));
    {
        let file = fs::File::create(&tmp)?;
        let mut w = BufWriter::new(file);
        write_body(&mut w)?;
        w.flush()?;
    }
    fs::rename(&tmp, path)
}

pub const WAVEFORMS_HEADER: &str = "t_s,v_inv_a,v_inv_b,v_inv_c,v_pcc_a,v_pcc_b,v_pcc_c,\
i_inv_a,i_inv_b,i_inv_c,i_pcc_a,i_pcc_b,i_pcc_c,lambda_a,lambda_b,lambda_c,lambda_alpha,lambda_beta";

pub fn write_waveforms(path: &Path, series: &Series) -> io::Result<()> {
    atomic_write(path, |w| {
        writeln!(w, "{WAVEFORMS_HEADER}")?;
        for i in 0..series.len() {
            let (vi, vp) = (series.v_inv[i], series.v_pcc[i]);
            let (ii, ip) = (series.i_inv[i], series.i_pcc[i]);
            let (l, lab) = (series.lambda[i], series.lambda_ab[i]);
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                fmt(series.t[i]),
                fmt(vi.a), fmt(vi.b), fmt(vi.c),
                fmt(vp.a), fmt(vp.b), fmt(vp.c),
                fmt(ii.a), fmt(ii.b), fmt(ii.c),
                fmt(ip.a), fmt(ip.b), fmt(ip.c),
                fmt(l.a), fmt(l.b), fmt(l.c),
                fmt(lab.alpha), fmt(lab.beta),
            )?;
        }
        Ok(())
    })
}

pub const TRAJECTORY_HEADER: &str = "t_s,lambda_alpha,lambda_beta";

pub fn write_trajectory(path: &Path, series: &Series) -> io::Result<()> {
    atomic_write(path, |w| {
        writeln!(w, "{TRAJECTORY_HEADER}")?;
        for i in 0..series.len() {
            let ab = series.lambda_ab[i];
            writeln!(w, "{},{},{}", fmt(series.t[i]), fmt(ab.alpha), fmt(ab.beta))?;
        }
        Ok(())
    })
}

/// Stable-keyed metrics document.
#[derive(Debug, Serialize)]
pub struct MetricsDoc<'a> {
    pub schema_version: u32,
    pub tool_version: &'a str,
    pub method: &'a str,
    pub peak_i_pcc_pu: f64,
    pub peak_i_inv_pu: f64,
    pub flux_dc_offset_wb: f64,
    pub startup_reached: bool,
    pub startup_time_s: Option<f64>,
    pub demag_duration_s: Option<f64>,
    pub scenario: &'a ResolvedScenario,
}

pub fn write_metrics(path: &Path, result: &SimResult, scenario: &ResolvedScenario) -> io::Result<()> {
    let doc = MetricsDoc {
        schema_version: 1,
        tool_version: env!("CARGO_PKG_VERSION"),
        method: result.metrics.method,
        peak_i_pcc_pu: result.metrics.peak_i_pcc_pu,
        peak_i_inv_pu: result.metrics.peak_i_inv_pu,
        flux_dc_offset_wb: result.metrics.flux_dc_offset_wb,
        startup_reached: result.metrics.startup_time_s.is_some(),
        startup_time_s: result.metrics.startup_time_s,
        demag_duration_s: result.demag_duration_s,
        scenario,
    };
    atomic_write(path, |w| {
        serde_json::to_writer_pretty(&mut *w, &doc)?;
        writeln!(w)
    })
}

pub const COMPARISON_HEADER: &str =
    "method,residual_case,peak_i_pcc_pu,peak_i_inv_pu,flux_offset_wb,startup_time_s,status";

fn opt(v: Option<f64>) -> String {
    v.map(fmt).unwrap_or_default()
}

pub fn write_comparison(path: &Path, rows: &[ComparisonRow]) -> io::Result<()> {
    atomic_write(path, |w| {
        writeln!(w, "{COMPARISON_HEADER}")?;
        for row in rows {
            let status = match &row.error {
                Some(e) => format!("error: {}", e.replace(',', ";")),
                None => "ok".to_string(),
            };
            let pcc = if row.peak_i_pcc_pu.is_nan() { String::new() } else { fmt(row.peak_i_pcc_pu) };
            let off = if row.flux_offset_wb.is_nan() { String::new() } else { fmt(row.flux_offset_wb) };
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                row.method,
                row.case.label(),
                pcc,
                opt(row.peak_i_inv_pu),
                off,
                opt(row.startup_time_s),
                status,
            )?;
        }
        Ok(())
    })
}

/// Table-style verdict summary plus the full per-run figures.
pub fn comparison_summary(rows: &[ComparisonRow]) -> String {
    use blackstart::compare::ResidualCase;
    let mut s = String::new();
    let find = |m: &str| {
        rows.iter()
            .find(|r| r.method == m && r.case == ResidualCase::None && r.error.is_none())
    };
    let methods = ["hard", "ultrafast", "spiral"];
    let ox = |b: bool| if b { "O" } else { "X" };

    s.push_str("Transformer magnetization methods, clean start:\n\n");
    s.push_str(&format!("  {:28}{:>12}{:>12}{:>12}\n", "criterion", "hard", "ultrafast", "spiral"));
    for (label, pick) in [
        ("flux DC offset eliminated", 0usize),
        ("inrush current suppressed", 1),
        ("surge current suppressed", 2),
    ] {
        s.push_str(&format!("  {label:28}"));
        for m in methods {
            let cell = match find(m) {
                Some(r) => match pick {
                    0 if r.offset_decaying => "O*".to_string(),
                    0 => ox(r.offset_eliminated).to_string(),
                    1 => ox(r.inrush_suppressed).to_string(),
                    _ => r.surge_suppressed.map_or("-".to_string(), |v| ox(v).to_string()),
                },
                None => "ERR".to_string(),
            };
            s.push_str(&format!("{cell:>12}"));
        }
        s.push('\n');
    }
    s.push_str(&format!("  {:28}", "start-up time"));
    for m in methods {
        let cell = match find(m) {
            Some(r) => match r.startup_time_s {
                Some(t) if t == 0.0 => "instant".to_string(),
                Some(t) => format!("{:.3} ms", 1e3 * t),
                None => "not reached".to_string(),
            },
            None => "ERR".to_string(),
        };
        s.push_str(&format!("{cell:>12}"));
    }
    s.push_str("\n\n  O* = offset not suppressed at birth; decays through losses\n");
    s.push_str("  verdicts: offset < 2% rated flux (or monotone decay), currents < 0.3 pu\n\n");

    s.push_str("All runs:\n\n");
    s.push_str(&format!(
        "  {:10}{:16}{:>12}{:>12}{:>14}{:>14}  {}\n",
        "method", "residual", "i_pcc (pu)", "i_inv (pu)", "offset (Wb)", "startup", "status"
    ));
    for row in rows {
        let startup = match row.startup_time_s {
            Some(t) => format!("{:.3} ms", 1e3 * t),
            None => "-".to_string(),
        };
        s.push_str(&format!(
            "  {:10}{:16}{:>12}{:>12}{:>14}{:>14}  {}\n",
            row.method,
            row.case.label(),
            if row.peak_i_pcc_pu.is_nan() { "-".into() } else { format!("{:.4}", row.peak_i_pcc_pu) },
            row.peak_i_inv_pu.map_or("-".to_string(), |v| format!("{v:.4}")),
            if row.flux_offset_wb.is_nan() { "-".into() } else { format!("{:.5}", row.flux_offset_wb) },
            startup,
            row.error.as_deref().unwrap_or("ok"),
        ));
    }
    s
}

pub fn write_text(path: &Path, text: &str) -> io::Result<()> {
    atomic_write(path, |w| w.write_all(text.as_bytes()))
}

pub const SWEEP_HEADER: &str = "residual_wb,peak_i_pcc_pu,flux_offset_wb";

pub fn write_sweep(path: &Path, rows: &[(f64, f64, f64)]) -> io::Result<()> {
    atomic_write(path, |w| {
        writeln!(w, "{SWEEP_HEADER}")?;
        for &(residual, peak, offset) in rows {
            writeln!(w, "{},{},{}", fmt(residual), fmt(peak), fmt(offset))?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_round_trips_f64() {
        for &x in &[0.0, 1.0, -1.5e-7, 2.6525823848649224e-3, f64::MIN_POSITIVE, 1e300] {
            let s = fmt(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }
}
