use serde::Serialize;

use super::{fmt_num, CliError, OutputFormat, RunConfig};
use crate::fock::InputState;
use crate::scheme::{run_scheme_with_cutoff, SchemeResult};

/// Single-instance report printed by `photon-purify run`.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: RunConfig,
    pub result: SchemeResult,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    p1: f64,
    p2: f64,
    phase1: f64,
    phase2: f64,
    theta: f64,
    phi: f64,
    theta2: f64,
    phi2: f64,
    p_stage_one: f64,
    p_stage_two: f64,
    p_success: f64,
    fidelity: f64,
    degenerate: bool,
    degeneracy_reason: Option<&'a str>,
}

fn round(x: f64) -> f64 {
    fmt_num(x).parse().expect("fmt_num output parses")
}

impl RunReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let r = &self.result;
        vec![
            ("p1", fmt_num(self.config.input1.p)),
            ("p2", fmt_num(self.config.input2.p)),
            ("phase1", fmt_num(self.config.input1.phase)),
            ("phase2", fmt_num(self.config.input2.phase)),
            ("theta", fmt_num(r.lambda1.theta)),
            ("phi", fmt_num(r.lambda1.phi)),
            ("theta2", fmt_num(r.lambda2.theta)),
            ("phi2", fmt_num(r.lambda2.phi)),
            ("p_stage_one", fmt_num(r.p_stage_one)),
            ("p_stage_two", fmt_num(r.p_stage_two)),
            ("p_success", fmt_num(r.p_success)),
            ("fidelity", fmt_num(r.output_fidelity)),
            ("degenerate", r.is_degenerate().to_string()),
            (
                "degeneracy_reason",
                r.degeneracy.map(|d| d.as_str()).unwrap_or("").to_string(),
            ),
        ]
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Table => {
                let fields = self.fields();
                let width = fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
                fields
                    .iter()
                    .filter(|(k, v)| !(*k == "degeneracy_reason" && v.is_empty()))
                    .map(|(k, v)| format!("{k:<width$}  {v}\n"))
                    .collect()
            }
            OutputFormat::Csv => {
                let fields = self.fields();
                let header: Vec<&str> = fields.iter().map(|(k, _)| *k).collect();
                let row: Vec<&str> = fields.iter().map(|(_, v)| v.as_str()).collect();
                format!("{}\n{}\n", header.join(","), row.join(","))
            }
            OutputFormat::Json => {
                let r = &self.result;
                let report = JsonReport {
                    p1: round(self.config.input1.p),
                    p2: round(self.config.input2.p),
                    phase1: round(self.config.input1.phase),
                    phase2: round(self.config.input2.phase),
                    theta: round(r.lambda1.theta),
                    phi: round(r.lambda1.phi),
                    theta2: round(r.lambda2.theta),
                    phi2: round(r.lambda2.phi),
                    p_stage_one: round(r.p_stage_one),
                    p_stage_two: round(r.p_stage_two),
                    p_success: round(r.p_success),
                    fidelity: round(r.output_fidelity),
                    degenerate: r.is_degenerate(),
                    degeneracy_reason: r.degeneracy.map(|d| d.as_str()),
                };
                let mut s = serde_json::to_string_pretty(&report).expect("plain struct serializes");
                s.push('\n');
                s
            }
        }
    }
}

pub fn cmd_run(config: &RunConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let in1 = InputState::from_probability(config.input1.p, config.input1.phase)?;
    let in2 = InputState::from_probability(config.input2.p, config.input2.phase)?;
    let result = run_scheme_with_cutoff(&in1, &in2, config.cutoff)?;
    Ok(RunReport {
        config: config.clone(),
        result,
    })
}
