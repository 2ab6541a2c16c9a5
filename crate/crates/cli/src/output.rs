//! Row formats for `scatter` and the summary records of `bound`.

use dirac_pt::boundstates::{BoundStateRecord, StateKind};
use dirac_pt::integrator::ScatterOutcome;
use dirac_pt::potentials::{ModelSpec, PotentialModel, SCHEMA};
use dirac_pt::Error;
use serde::Serialize;

use crate::{CliError, EXIT_NUMERIC};

pub const COLUMNS: [&str; 18] = [
    "E",
    "k_minus_re",
    "k_minus_im",
    "T_LR_re",
    "T_LR_im",
    "abs_T_LR",
    "R_LR_re",
    "R_LR_im",
    "abs_R_LR",
    "T_RL_re",
    "T_RL_im",
    "R_RL_re",
    "R_RL_im",
    "nu_phase",
    "unitarity_defect",
    "pt_exact",
    "wronskian_drift",
    "status",
];

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError { code: EXIT_NUMERIC, message: format!("output: {e}") }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_record(energy: f64, row: &Result<ScatterOutcome, Error>) -> Vec<String> {
    match row {
        Ok(o) => {
            let r = &o.result;
            let k = o.channel.k_minus;
            let mut rec: Vec<String> = [
                energy,
                k.re,
                k.im,
                r.t_lr.re,
                r.t_lr.im,
                r.t_lr.norm(),
                r.r_lr.re,
                r.r_lr.im,
                r.r_lr.norm(),
                r.t_rl.re,
                r.t_rl.im,
                r.r_rl.re,
                r.r_rl.im,
                r.nu_phase,
                r.unitarity_defect,
            ]
            .into_iter()
            .map(num)
            .collect();
            rec.push(r.pt_exact.holds.to_string());
            rec.push(num(o.wronskian_drift));
            rec.push("ok".into());
            rec
        }
        Err(e) => {
            let mut rec = vec![num(energy)];
            rec.extend(std::iter::repeat("NaN".to_string()).take(14));
            rec.push("false".into());
            rec.push("NaN".into());
            rec.push(format!("error: {e}"));
            rec
        }
    }
}

pub fn csv_rows(energies: &[f64], rows: &[Result<ScatterOutcome, Error>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(COLUMNS).map_err(io_err)?;
    for (e, row) in energies.iter().zip(rows) {
        w.write_record(csv_record(*e, row)).map_err(io_err)?;
    }
    w.into_inner().map_err(io_err)
}

#[derive(Serialize)]
struct JsonRow {
    #[serde(rename = "E")]
    energy: f64,
    status: String,
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    outcome: Option<ScatterOutcome>,
}

#[derive(Serialize)]
struct JsonSweep<'a> {
    schema: &'static str,
    model: ModelSpec,
    columns: &'a [&'a str],
    rows: Vec<JsonRow>,
}

pub fn json_rows(model: &PotentialModel, energies: &[f64], rows: &[Result<ScatterOutcome, Error>]) -> Result<Vec<u8>, CliError> {
    let rows = energies
        .iter()
        .zip(rows)
        .map(|(e, r)| match r {
            Ok(o) => JsonRow { energy: *e, status: "ok".into(), outcome: Some(*o) },
            Err(err) => JsonRow { energy: *e, status: format!("error: {err}"), outcome: None },
        })
        .collect();
    let doc = JsonSweep { schema: SCHEMA, model: model.to_spec(), columns: &COLUMNS, rows };
    let mut body = serde_json::to_vec_pretty(&doc).map_err(io_err)?;
    body.push(b'\n');
    Ok(body)
}

/// One line of `bound` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSummary {
    #[serde(rename = "E")]
    pub energy: f64,
    pub kappa: f64,
    pub eps_eff: f64,
    pub kind: &'static str,
    pub norm_ok: Option<bool>,
    pub method: &'static str,
    pub partner: Option<u8>,
}

impl BoundSummary {
    pub fn from_record(r: &BoundStateRecord, method: &'static str) -> Self {
        let kind = match r.kind {
            StateKind::Bound => "bound",
            StateKind::ZeroMode => "zero_mode",
            StateKind::HalfBound => "half_bound",
        };
        Self {
            energy: r.energy,
            kappa: r.kappa,
            eps_eff: r.eps_eff,
            kind,
            norm_ok: r.norm.map(|n| (n - 1.0).abs() < 1e-6),
            method,
            partner: r.partner,
        }
    }

    /// A state sitting at the edge of the continuum, k = 0.
    pub fn threshold(energy: f64, m: f64, kind: &'static str, norm_ok: Option<bool>) -> Self {
        Self { energy, kappa: 0.0, eps_eff: (energy * energy - m * m) / (2.0 * m), kind, norm_ok, method: "threshold", partner: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_rows_keep_width() {
        let rec = csv_record(1.5, &Err(Error::NotScattering("below".into())));
        assert_eq!(rec.len(), COLUMNS.len());
        assert!(rec[17].starts_with("error"));
    }

    #[test]
    fn numbers_round_trip() {
        let v = 0.1 + 0.2;
        assert_eq!(num(v).parse::<f64>().unwrap(), v);
    }
}
