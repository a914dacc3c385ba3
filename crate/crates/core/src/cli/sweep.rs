use std::fs;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use super::{fmt_num, render_comparison_svg, CliError, OutputFormat, SweepConfig};
use crate::fock::InputState;
use crate::scheme::{run_scheme_with_cutoff, SchemeResult};

pub const CSV_HEADER: &str = "p1,p2,phase1,phase2,theta,phi,p_success,fidelity,degenerate";

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub p1: f64,
    pub p2: f64,
    pub phase1: f64,
    pub phase2: f64,
    pub result: SchemeResult,
}

impl SweepRow {
    pub fn is_diagonal(&self) -> bool {
        self.p1 == self.p2 && self.phase1 == self.phase2
    }
}

/// Grid points in row-major order: `p1` outermost, then `p2`, `phase1`,
/// `phase2`.
fn grid_points(cfg: &SweepConfig) -> Vec<(f64, f64, f64, f64)> {
    let p1s = cfg.p1_range.values();
    let phase1s = cfg.phase1_range.values();
    if cfg.diagonal {
        return p1s
            .iter()
            .flat_map(|&p| phase1s.iter().map(move |&ph| (p, p, ph, ph)))
            .collect();
    }
    let p2s = cfg.p2_range.values();
    let phase2s = cfg.phase2_range.values();
    let mut points = Vec::with_capacity(p1s.len() * p2s.len() * phase1s.len() * phase2s.len());
    for &p1 in &p1s {
        for &p2 in &p2s {
            for &ph1 in &phase1s {
                for &ph2 in &phase2s {
                    points.push((p1, p2, ph1, ph2));
                }
            }
        }
    }
    points
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn evaluate_grid(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    grid_points(cfg)
        .into_par_iter()
        .map(|(p1, p2, phase1, phase2)| {
            let in1 = InputState::from_probability(p1, phase1)?;
            let in2 = InputState::from_probability(p2, phase2)?;
            let result = run_scheme_with_cutoff(&in1, &in2, cfg.cutoff)?;
            Ok(SweepRow {
                p1,
                p2,
                phase1,
                phase2,
                result,
            })
        })
        .collect()
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: &mut W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        let r = &row.result;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_num(row.p1),
            fmt_num(row.p2),
            fmt_num(row.phase1),
            fmt_num(row.phase2),
            fmt_num(r.lambda1.theta),
            fmt_num(r.lambda1.phi),
            fmt_num(r.p_success),
            fmt_num(r.output_fidelity),
            r.is_degenerate(),
        )?;
    }
    Ok(())
}

#[derive(Serialize)]
struct JsonRow<'a> {
    p1: serde_json::Number,
    p2: serde_json::Number,
    phase1: serde_json::Number,
    phase2: serde_json::Number,
    theta: serde_json::Number,
    phi: serde_json::Number,
    p_success: serde_json::Number,
    fidelity: serde_json::Number,
    degenerate: bool,
    degeneracy_reason: Option<&'a str>,
}

fn num(x: f64) -> serde_json::Number {
    let rounded: f64 = fmt_num(x).parse().expect("fmt_num output parses");
    serde_json::Number::from_f64(rounded).expect("sweep values are finite")
}

pub fn write_json<W: Write>(rows: &[SweepRow], out: &mut W) -> std::io::Result<()> {
    let json: Vec<JsonRow> = rows
        .iter()
        .map(|row| JsonRow {
            p1: num(row.p1),
            p2: num(row.p2),
            phase1: num(row.phase1),
            phase2: num(row.phase2),
            theta: num(row.result.lambda1.theta),
            phi: num(row.result.lambda1.phi),
            p_success: num(row.result.p_success),
            fidelity: num(row.result.output_fidelity),
            degenerate: row.result.is_degenerate(),
            degeneracy_reason: row.result.degeneracy.map(|d| d.as_str()),
        })
        .collect();
    serde_json::to_writer_pretty(&mut *out, &json)?;
    writeln!(out)
}

/// Runs the sweep and writes the table to `cfg.out` (or `stdout` when
/// unset), plus the comparison plot when `cfg.plot` is set.
pub fn cmd_sweep<W: Write>(cfg: &SweepConfig, stdout: &mut W) -> Result<Vec<SweepRow>, CliError> {
    let rows = evaluate_grid(cfg)?;
    let mut buf = Vec::new();
    match cfg.output_format {
        OutputFormat::Json => write_json(&rows, &mut buf),
        _ => write_csv(&rows, &mut buf),
    }
    .expect("writing to memory cannot fail");

    match &cfg.out {
        Some(path) => fs::write(path, &buf).map_err(|e| CliError::io(path, e))?,
        None => stdout
            .write_all(&buf)
            .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e))?,
    }
    if let Some(path) = &cfg.plot {
        fs::write(path, render_comparison_svg(&rows)).map_err(|e| CliError::io(path, e))?;
    }
    Ok(rows)
}
