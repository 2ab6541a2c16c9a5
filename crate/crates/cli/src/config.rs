//! Run configuration: a JSON file merged under command-line flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use dirac_pt::exprdsl::{self, Bindings};
use dirac_pt::formalism::AsymptoticLimits;
use dirac_pt::integrator::IntegratorConfig;
use dirac_pt::potentials::{self, ExpressionSources, PotentialModel, Tail};
use dirac_pt::{Complex64, Error};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Everything a `scatter` or `bound` run needs. All fields are optional so
/// that a file and the flags can each supply a part.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(rename = "V")]
    pub expr_v: Option<String>,
    #[serde(rename = "S")]
    pub expr_s: Option<String>,
    #[serde(rename = "P")]
    pub expr_p: Option<String>,
    pub limits: Option<AsymptoticLimits>,
    pub tail: Option<Tail>,
    pub e_min: Option<f64>,
    pub e_max: Option<f64>,
    pub e_count: Option<usize>,
    pub half_width: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub parallel: Option<bool>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
    }

    /// `self` overridden field by field with whatever `top` sets.
    pub fn merged(mut self, top: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if top.$f.is_some() { self.$f = top.$f; } )* };
        }
        take!(model, expr_v, expr_s, expr_p, limits, tail, e_min, e_max, e_count, half_width, rtol, atol, format, out, parallel);
        self.params.extend(top.params);
        self
    }

    pub fn integrator(&self) -> Result<IntegratorConfig, CliError> {
        let mut cfg = IntegratorConfig::default();
        cfg.half_width = self.half_width.or(cfg.half_width);
        cfg.rtol = self.rtol.unwrap_or(cfg.rtol);
        cfg.atol = self.atol.unwrap_or(cfg.atol);
        cfg.validate().map_err(CliError::from_core)?;
        Ok(cfg)
    }

    fn has_expressions(&self) -> bool {
        self.expr_v.is_some() || self.expr_s.is_some() || self.expr_p.is_some()
    }

    /// Build the model named by the configuration.
    pub fn model(&self) -> Result<PotentialModel, CliError> {
        if self.has_expressions() {
            if self.model.as_deref().is_some_and(|m| m != "expression") {
                return Err(CliError::config("give either --model or expressions, not both"));
            }
            let sources = ExpressionSources {
                v: self.expr_v.clone().unwrap_or_else(|| "0".into()),
                s: self.expr_s.clone().unwrap_or_else(|| "0".into()),
                p: self.expr_p.clone().unwrap_or_else(|| "0".into()),
            };
            for (name, src) in [("V", &sources.v), ("S", &sources.s), ("P", &sources.p)] {
                if let Err(e) = exprdsl::parse(src) {
                    return Err(CliError::config(diagnostic(name, src, &e)));
                }
            }
            let m = self.params.get("m").copied().unwrap_or(1.0);
            let bindings: Bindings = self.params.iter().map(|(k, v)| (k.clone(), Complex64::new(*v, 0.0))).collect();
            let limits = self.limits.unwrap_or_default();
            let tail = self.tail.unwrap_or(Tail::Exponential { rate: 1.0 });
            return potentials::make_from_expressions(&sources, limits, tail, &bindings, m).map_err(CliError::from_core);
        }
        let name = self.model.as_deref().ok_or_else(|| CliError::config("no model: pass --model or --expr-V/--expr-S/--expr-P"))?;
        potentials::build_catalog(name, &self.params).map_err(CliError::from_core)
    }
}

/// Parser error rendered with the offending source and a caret.
pub fn diagnostic(component: &str, src: &str, err: &Error) -> String {
    let offset = match err {
        Error::Syntax { offset, .. } | Error::UnknownFunction { offset, .. } | Error::UnknownIdentifier { offset, .. } => Some(*offset),
        _ => None,
    };
    match offset {
        Some(o) => {
            let col = src.get(..o.min(src.len())).map_or(o, |s| s.chars().count());
            format!("{component}: {err}\n  {src}\n  {}^", " ".repeat(col))
        }
        None => format!("{component}: {err}"),
    }
}

/// `key=value` with a finite numeric value.
pub fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(format!("empty parameter name in `{s}`"));
    }
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("parameter {k} must be finite"));
    }
    Ok((k.to_string(), v))
}

/// Six comma-separated constants V-,V+,S-,S+,P-,P+; each may be any
/// constant expression such as `2*i` or `-sqrt(2)`.
pub fn parse_limits(s: &str) -> Result<AsymptoticLimits, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 6 {
        return Err(format!("expected 6 comma-separated limits V-,V+,S-,S+,P-,P+, got {}", parts.len()));
    }
    let mut vals = [Complex64::new(0.0, 0.0); 6];
    for (slot, part) in vals.iter_mut().zip(&parts) {
        let ast = exprdsl::parse(part.trim()).map_err(|e| diagnostic("limits", part.trim(), &e))?;
        *slot = exprdsl::evaluate(&ast, 0.0, &Bindings::new()).map_err(|e| format!("limit `{part}`: {e}"))?;
    }
    let [v_minus, v_plus, s_minus, s_plus, p_minus, p_plus] = vals;
    Ok(AsymptoticLimits { v_minus, v_plus, s_minus, s_plus, p_minus, p_plus })
}

/// `exp:RATE`, `alg:POWER` or `const`.
pub fn parse_tail(s: &str) -> Result<Tail, String> {
    let num = |v: &str| v.parse::<f64>().map_err(|_| format!("`{v}` is not a number"));
    match s.split_once(':') {
        Some(("exp", r)) => Ok(Tail::Exponential { rate: num(r)? }),
        Some(("alg", p)) => Ok(Tail::Algebraic { power: num(p)? }),
        None if s == "const" => Ok(Tail::Constant),
        _ => Err(format!("tail must be exp:RATE, alg:POWER or const, got `{s}`")),
    }
}
