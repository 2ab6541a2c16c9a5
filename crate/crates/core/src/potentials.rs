//! Potential families: (V, S, P)(x) triples with asymptotic limits, tail
//! class, PT self-check and pole screening.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exprdsl::{self, Bindings, Expr};
use crate::formalism::{AsymptoticLimits, I};

pub const SCHEMA: &str = "dirac1d-pt/1";
pub const DEFAULT_EPS: f64 = 0.1;

/// Grid step and threshold for pole screening.
const SCREEN_STEP: f64 = 1e-3;
const SCREEN_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Tail {
    Exponential { rate: f64 },
    Algebraic { power: f64 },
    Constant,
}

impl Tail {
    /// Default box half-width for this tail.
    pub fn default_half_width(&self) -> f64 {
        match *self {
            Tail::Exponential { rate } => (30.0 / rate).max(12.0),
            Tail::Algebraic { .. } => 200.0,
            Tail::Constant => 12.0,
        }
    }

    /// Size of the deviation from the limit expected at distance `l`.
    pub fn bound(&self, l: f64) -> f64 {
        match *self {
            Tail::Exponential { rate } => (-rate * l).exp(),
            Tail::Algebraic { power } => l.powf(-power),
            Tail::Constant => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SymmetryMode {
    /// c_V = c_S
    SpinSym,
    /// c_V = -c_S
    PseudoSpinSym,
}

impl SymmetryMode {
    fn sign(self) -> f64 {
        match self {
            SymmetryMode::SpinSym => 1.0,
            SymmetryMode::PseudoSpinSym => -1.0,
        }
    }
}

/// Potential values at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Triple {
    pub v: Complex64,
    pub s: Complex64,
    pub p: Complex64,
}

impl Triple {
    fn max_abs(&self) -> f64 {
        self.v.norm().max(self.s.norm()).max(self.p.norm())
    }
}

/// Sources and bound values of a user-defined model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressionSources {
    #[serde(rename = "V")]
    pub v: String,
    #[serde(rename = "S")]
    pub s: String,
    #[serde(rename = "P")]
    pub p: String,
}

#[derive(Debug)]
pub struct ExprTriple {
    pub sources: ExpressionSources,
    v: Expr,
    s: Expr,
    p: Expr,
}

#[derive(Debug, Clone)]
pub enum ModelKind {
    Free,
    ScarfVectorScalar { l: i64, n: i64, c: f64, mode: SymmetryMode },
    Centrifugal { c_prime: f64, mode: SymmetryMode },
    NogamiToyama { lambda: f64 },
    SuperScarf { n: i64, l: i64 },
    ScalarOneBound { c_s: f64, kappa_b: f64, e_b: f64, lambda_b: f64 },
    Expression(Arc<ExprTriple>),
}

/// Structural class of a model, used by the reductions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialClass {
    Zero,
    PurePseudoscalar,
    PureScalar,
    SpinSym,
    PseudoSpinSym,
    General,
}

#[derive(Debug, Clone)]
pub struct PotentialModel {
    pub kind: ModelKind,
    pub limits: AsymptoticLimits,
    pub tail: Tail,
    pub eps: f64,
    pub m: f64,
    pub params: BTreeMap<String, f64>,
    pub label: String,
    pub pt_symmetric: bool,
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn integer(name: &str, v: f64) -> Result<i64> {
    if v.fract() != 0.0 || !v.is_finite() {
        return Err(Error::InvalidParameter(format!("{name} must be an integer, got {v}")));
    }
    Ok(v as i64)
}

fn check_mass(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("mass must be positive, got {m}")))
    }
}

fn scarf_coefficients(l: i64, n: i64, m: f64) -> (f64, f64) {
    let (l, n) = (l as f64, n as f64);
    ((l * l + n * (n + 1.0)) / (2.0 * m), l * (2.0 * n + 1.0) / (2.0 * m))
}

pub fn free(m: f64) -> Result<PotentialModel> {
    check_mass(m)?;
    Ok(PotentialModel {
        kind: ModelKind::Free,
        limits: AsymptoticLimits::zero(),
        tail: Tail::Constant,
        eps: 0.0,
        m,
        params: [("m".to_string(), m)].into(),
        label: "free".into(),
        pt_symmetric: true,
    })
}

/// Hyperbolic Scarf shape f as a vector+scalar pair, V = c f, S = ±c f.
pub fn make_scarf_vector_scalar(l: i64, n: i64, c_coupling: f64, mode: SymmetryMode, m: f64) -> Result<PotentialModel> {
    check_mass(m)?;
    Ok(PotentialModel {
        kind: ModelKind::ScarfVectorScalar { l, n, c: c_coupling, mode },
        limits: AsymptoticLimits::zero(),
        tail: Tail::Exponential { rate: 1.0 },
        eps: 0.0,
        m,
        params: [
            ("l".to_string(), l as f64),
            ("n".to_string(), n as f64),
            ("c".to_string(), c_coupling),
            ("m".to_string(), m),
            ("pseudo_spin".to_string(), f64::from(mode == SymmetryMode::PseudoSpinSym)),
        ]
        .into(),
        label: "scarf_dirac".into(),
        pt_symmetric: true,
    })
}

/// Spin-symmetric regularized centrifugal potential V = S = c'/(x + i eps)^2.
pub fn make_centrifugal(eps: f64, c_prime: f64, m: f64) -> Result<PotentialModel> {
    make_centrifugal_with_mode(eps, c_prime, m, SymmetryMode::SpinSym)
}

/// Centrifugal potential with S = c'/(x+i eps)^2 and V = ±S.
pub fn make_centrifugal_with_mode(eps: f64, c_prime: f64, m: f64, mode: SymmetryMode) -> Result<PotentialModel> {
    check_mass(m)?;
    if eps == 0.0 {
        return Err(Error::ZeroShift);
    }
    let model = PotentialModel {
        kind: ModelKind::Centrifugal { c_prime, mode },
        limits: AsymptoticLimits::zero(),
        tail: Tail::Algebraic { power: 2.0 },
        eps,
        m,
        params: [
            ("c_prime".to_string(), c_prime),
            ("eps".to_string(), eps),
            ("m".to_string(), m),
            ("pseudo_spin".to_string(), f64::from(mode == SymmetryMode::PseudoSpinSym)),
        ]
        .into(),
        label: "centrifugal".into(),
        pt_symmetric: true,
    };
    model.screen_poles()?;
    Ok(model)
}

pub fn make_nogami_toyama(lambda: f64, eps: f64, m: f64) -> Result<PotentialModel> {
    check_mass(m)?;
    if !(lambda >= 1.0) {
        return Err(Error::InvalidParameter(format!("lambda must be >= 1, got {lambda}")));
    }
    // at lambda = 1 the superpotential degenerates to tanh z
    let limits = if lambda == 1.0 { AsymptoticLimits::pseudoscalar(-1.0, 1.0) } else { AsymptoticLimits::pseudoscalar(lambda, -lambda) };
    let model = PotentialModel {
        kind: ModelKind::NogamiToyama { lambda },
        limits,
        tail: Tail::Exponential { rate: 2.0 },
        eps,
        m,
        params: [("lambda".to_string(), lambda), ("eps".to_string(), eps), ("m".to_string(), m)].into(),
        label: "nogami_toyama".into(),
        pt_symmetric: true,
    };
    model.screen_poles()?;
    Ok(model)
}

pub fn make_super_scarf(n: i64, l: i64, m: f64) -> Result<PotentialModel> {
    check_mass(m)?;
    let nf = n as f64;
    Ok(PotentialModel {
        kind: ModelKind::SuperScarf { n, l },
        limits: AsymptoticLimits::pseudoscalar(-nf, nf),
        tail: Tail::Exponential { rate: 1.0 },
        eps: 0.0,
        m,
        params: [("n".to_string(), nf), ("l".to_string(), l as f64), ("m".to_string(), m)].into(),
        label: "super_scarf".into(),
        pt_symmetric: true,
    })
}

/// Derived constants (kappa_B, E_B, lambda_B) of the one-bound-state scalar well.
pub fn scalar_one_bound_constants(c_s: f64, m: f64) -> (f64, f64, f64) {
    let root = (c_s * c_s + 4.0).sqrt();
    let e_b = 2.0 * m / root;
    let kappa_b = c_s * m / root;
    let lambda_b = 0.5 * (m / e_b).acosh();
    (kappa_b, e_b, lambda_b)
}

pub fn make_scalar_one_bound(c_s: f64, eps: f64, m: f64) -> Result<PotentialModel> {
    check_mass(m)?;
    if !(c_s > 0.0) {
        return Err(Error::InvalidParameter(format!("c_S must be positive, got {c_s}")));
    }
    let (kappa_b, e_b, lambda_b) = scalar_one_bound_constants(c_s, m);
    let model = PotentialModel {
        kind: ModelKind::ScalarOneBound { c_s, kappa_b, e_b, lambda_b },
        limits: AsymptoticLimits::zero(),
        tail: Tail::Exponential { rate: 2.0 * kappa_b },
        eps,
        m,
        params: [
            ("c_s".to_string(), c_s),
            ("eps".to_string(), eps),
            ("m".to_string(), m),
            ("kappa_b".to_string(), kappa_b),
            ("e_b".to_string(), e_b),
            ("lambda_b".to_string(), lambda_b),
        ]
        .into(),
        label: "scalar_one_bound".into(),
        pt_symmetric: true,
    };
    model.screen_poles()?;
    Ok(model)
}

/// User-defined model from three DSL sources.
pub fn make_from_expressions(
    sources: &ExpressionSources,
    limits: AsymptoticLimits,
    tail: Tail,
    bindings: &Bindings,
    m: f64,
) -> Result<PotentialModel> {
    check_mass(m)?;
    let bind = |src: &str| -> Result<Expr> { exprdsl::parse(src)?.bind(bindings) };
    let triple = ExprTriple { sources: sources.clone(), v: bind(&sources.v)?, s: bind(&sources.s)?, p: bind(&sources.p)? };
    let mut params: BTreeMap<String, f64> = bindings.iter().filter(|(_, v)| v.im == 0.0).map(|(k, v)| (k.clone(), v.re)).collect();
    params.insert("m".into(), m);
    let eps = params.get("eps").copied().unwrap_or(0.0);
    let mut model = PotentialModel {
        kind: ModelKind::Expression(Arc::new(triple)),
        limits,
        tail,
        eps,
        m,
        params,
        label: "expression".into(),
        pt_symmetric: false,
    };
    model.validate_limits()?;
    model.screen_poles()?;
    model.pt_symmetric = model.pt_residual()? <= 1e-10;
    Ok(model)
}

impl PotentialModel {
    /// Catalog models carry closed-form derivatives.
    pub fn has_analytic_derivative(&self) -> bool {
        !matches!(self.kind, ModelKind::Expression(_))
    }

    pub fn eval(&self, x: f64) -> Result<Triple> {
        let z = Complex64::new(x, self.eps);
        Ok(match &self.kind {
            ModelKind::Free => Triple::default(),
            ModelKind::ScarfVectorScalar { l, n, c: cc, mode } => {
                let (a, b) = scarf_coefficients(*l, *n, self.m);
                let ch = x.cosh();
                let f = c(-a / (ch * ch)) + I * (b * x.sinh() / (ch * ch));
                Triple { v: *cc * f, s: mode.sign() * *cc * f, p: c(0.0) }
            }
            ModelKind::Centrifugal { c_prime, mode } => {
                let f = *c_prime / (z * z);
                Triple { v: mode.sign() * f, s: f, p: c(0.0) }
            }
            ModelKind::NogamiToyama { lambda } => Triple { p: nt_superpotential(*lambda, z), ..Default::default() },
            ModelKind::SuperScarf { n, l } => {
                let p = c(*n as f64 * x.tanh()) + I * (*l as f64 / x.cosh());
                Triple { p, ..Default::default() }
            }
            ModelKind::ScalarOneBound { kappa_b, e_b, .. } => {
                let s = -2.0 * kappa_b * kappa_b / (self.m + *e_b * (2.0 * *kappa_b * z).cosh());
                Triple { s, ..Default::default() }
            }
            ModelKind::Expression(t) => {
                let b = Bindings::new();
                Triple { v: t.v.eval(x, &b)?, s: t.s.eval(x, &b)?, p: t.p.eval(x, &b)? }
            }
        })
    }

    /// d/dx of the triple: closed forms for catalog models, central
    /// differences with h = 1e-6 max(1, |x|) for expressions.
    pub fn derivative(&self, x: f64) -> Result<Triple> {
        let z = Complex64::new(x, self.eps);
        Ok(match &self.kind {
            ModelKind::Free => Triple::default(),
            ModelKind::ScarfVectorScalar { l, n, c: cc, mode } => {
                let (a, b) = scarf_coefficients(*l, *n, self.m);
                let (ch, sh) = (x.cosh(), x.sinh());
                let df = c(2.0 * a * sh / (ch * ch * ch)) + I * (b * (ch * ch - 2.0 * sh * sh) / (ch * ch * ch));
                Triple { v: *cc * df, s: mode.sign() * *cc * df, p: c(0.0) }
            }
            ModelKind::Centrifugal { c_prime, mode } => {
                let df = -2.0 * *c_prime / (z * z * z);
                Triple { v: mode.sign() * df, s: df, p: c(0.0) }
            }
            ModelKind::NogamiToyama { lambda } => Triple { p: nt_superpotential_prime(*lambda, z), ..Default::default() },
            ModelKind::SuperScarf { n, l } => {
                let sech = 1.0 / x.cosh();
                let p = c(*n as f64 * sech * sech) - I * (*l as f64 * sech * x.tanh());
                Triple { p, ..Default::default() }
            }
            ModelKind::ScalarOneBound { kappa_b, e_b, .. } => {
                let arg = 2.0 * *kappa_b * z;
                let den = self.m + *e_b * arg.cosh();
                let s = 4.0 * kappa_b.powi(3) * *e_b * arg.sinh() / (den * den);
                Triple { s, ..Default::default() }
            }
            ModelKind::Expression(_) => {
                let h = 1e-6 * x.abs().max(1.0);
                let (a, b) = (self.eval(x + h)?, self.eval(x - h)?);
                let d = |u: Complex64, w: Complex64| (u - w) / (2.0 * h);
                Triple { v: d(a.v, b.v), s: d(a.s, b.s), p: d(a.p, b.p) }
            }
        })
    }

    pub fn default_half_width(&self) -> f64 {
        self.tail.default_half_width()
    }

    /// Max of |V*(-x) - V(x)|, |S*(-x) - S(x)|, |P*(-x) + P(x)| on 101
    /// points of [-10, 10].
    pub fn pt_residual(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for j in 0..=100 {
            let x = -10.0 + 0.2 * j as f64;
            let (a, b) = (self.eval(x)?, self.eval(-x)?);
            worst = worst
                .max((b.v.conj() - a.v).norm())
                .max((b.s.conj() - a.s).norm())
                .max((b.p.conj() + a.p).norm());
        }
        Ok(worst)
    }

    /// Compare declared limits with values sampled at +-L.
    pub fn validate_limits(&self) -> Result<()> {
        let l = self.default_half_width();
        let bound = 10.0 * self.tail.bound(l) + 1e-10;
        let (lo, hi) = (self.eval(-l)?, self.eval(l)?);
        let checks = [
            ("V-", self.limits.v_minus, lo.v),
            ("V+", self.limits.v_plus, hi.v),
            ("S-", self.limits.s_minus, lo.s),
            ("S+", self.limits.s_plus, hi.s),
            ("P-", self.limits.p_minus, lo.p),
            ("P+", self.limits.p_plus, hi.p),
        ];
        for (name, declared, sampled) in checks {
            if (declared - sampled).norm() > bound * declared.norm().max(1.0) {
                return Err(Error::LimitMismatch {
                    component: name.into(),
                    declared: declared.to_string(),
                    sampled: sampled.to_string(),
                });
            }
        }
        Ok(())
    }

    /// Moduli of the denominators that can vanish, for pole screening.
    fn denominators(&self, x: f64) -> Result<Vec<f64>> {
        let z = Complex64::new(x, self.eps);
        Ok(match &self.kind {
            ModelKind::Centrifugal { .. } => vec![(z * z).norm()],
            ModelKind::NogamiToyama { lambda } => {
                let lz = *lambda * z;
                let mut d = vec![z.cosh().norm()];
                // the second term is absent at lambda = 1
                if *lambda != 1.0 {
                    d.push(lz.sinh().norm());
                    d.push((z.tanh() - *lambda * lz.cosh() / lz.sinh()).norm());
                }
                d
            }
            ModelKind::ScalarOneBound { kappa_b, e_b, .. } => {
                vec![(self.m + *e_b * (2.0 * *kappa_b * z).cosh()).norm()]
            }
            ModelKind::Expression(_) => {
                match self.eval(x) {
                    Ok(t) if t.max_abs().is_finite() => vec![],
                    Ok(_) => vec![0.0],
                    Err(Error::EvaluationPole { .. }) => vec![0.0],
                    Err(e) => return Err(e),
                }
            }
            _ => vec![],
        })
    }

    /// Scan the default box with step 1e-3 for vanishing denominators.
    pub fn screen_poles(&self) -> Result<()> {
        if matches!(self.kind, ModelKind::Free | ModelKind::ScarfVectorScalar { .. } | ModelKind::SuperScarf { .. }) {
            return Ok(());
        }
        let l = self.default_half_width();
        let n = (2.0 * l / SCREEN_STEP).round() as usize;
        for j in 0..=n {
            let x = -l + j as f64 * SCREEN_STEP;
            if let Some(&modulus) = self.denominators(x)?.iter().find(|d| **d < SCREEN_FLOOR || !d.is_finite()) {
                return Err(Error::PoleOnAxis { x, modulus });
            }
        }
        Ok(())
    }

    /// Structural class, exact for catalog models and sampled otherwise.
    pub fn class(&self) -> PotentialClass {
        match &self.kind {
            ModelKind::Free => PotentialClass::Zero,
            ModelKind::ScarfVectorScalar { mode, .. } | ModelKind::Centrifugal { mode, .. } => match mode {
                SymmetryMode::SpinSym => PotentialClass::SpinSym,
                SymmetryMode::PseudoSpinSym => PotentialClass::PseudoSpinSym,
            },
            ModelKind::NogamiToyama { .. } | ModelKind::SuperScarf { .. } => PotentialClass::PurePseudoscalar,
            ModelKind::ScalarOneBound { .. } => PotentialClass::PureScalar,
            ModelKind::Expression(_) => self.sampled_class(),
        }
    }

    fn sampled_class(&self) -> PotentialClass {
        let l = self.default_half_width().min(50.0);
        let (mut v, mut s, mut p, mut vms, mut vps) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
        for j in 0..=400 {
            let x = -l + j as f64 * l / 200.0;
            let Ok(t) = self.eval(x) else { return PotentialClass::General };
            v = v.max(t.v.norm());
            s = s.max(t.s.norm());
            p = p.max(t.p.norm());
            vms = vms.max((t.v - t.s).norm());
            vps = vps.max((t.v + t.s).norm());
        }
        let tiny = |a: f64, scale: f64| a <= 1e-12 * scale.max(1.0);
        let scale = v.max(s).max(p);
        match (tiny(v, scale), tiny(s, scale), tiny(p, scale)) {
            (true, true, true) => PotentialClass::Zero,
            (true, true, false) => PotentialClass::PurePseudoscalar,
            (true, false, true) => PotentialClass::PureScalar,
            (false, false, true) if tiny(vms, scale) => PotentialClass::SpinSym,
            (false, false, true) if tiny(vps, scale) => PotentialClass::PseudoSpinSym,
            _ => PotentialClass::General,
        }
    }

    /// The same model written in the expression language, with bindings.
    pub fn expression_form(&self) -> (ExpressionSources, Bindings) {
        let mut b = Bindings::new();
        let mut put = |k: &str, v: f64| {
            b.insert(k.to_string(), c(v));
        };
        put("m", self.m);
        put("eps", self.eps);
        let src = |v: &str, s: &str, p: &str| ExpressionSources { v: v.into(), s: s.into(), p: p.into() };
        let sources = match &self.kind {
            ModelKind::Free => src("0", "0", "0"),
            ModelKind::ScarfVectorScalar { l, n, c: cc, mode } => {
                put("l", *l as f64);
                put("n", *n as f64);
                put("c", *cc);
                let f = "(-(l^2+n*(n+1))/(2*m*cosh(x)^2) + i*l*(2*n+1)/(2*m)*sinh(x)/cosh(x)^2)";
                let v = format!("c*{f}");
                match mode {
                    SymmetryMode::SpinSym => src(&v, &v, "0"),
                    SymmetryMode::PseudoSpinSym => src(&format!("-c*{f}"), &v, "0"),
                }
            }
            ModelKind::Centrifugal { c_prime, mode } => {
                put("cp", *c_prime);
                let f = "cp/(x+i*eps)^2";
                match mode {
                    SymmetryMode::SpinSym => src(f, f, "0"),
                    SymmetryMode::PseudoSpinSym => src(&format!("-{f}"), f, "0"),
                }
            }
            ModelKind::NogamiToyama { lambda } => {
                put("lam", *lambda);
                src("0", "0", "tanh(x+i*eps) + (lam^2-1)/(tanh(x+i*eps) - lam*coth(lam*(x+i*eps)))")
            }
            ModelKind::SuperScarf { n, l } => {
                put("n", *n as f64);
                put("l", *l as f64);
                src("0", "0", "n*tanh(x) + i*l/cosh(x)")
            }
            ModelKind::ScalarOneBound { kappa_b, e_b, .. } => {
                put("kb", *kappa_b);
                put("eb", *e_b);
                src("0", "-2*kb^2/(m + eb*cosh(2*kb*(x+i*eps)))", "0")
            }
            ModelKind::Expression(t) => t.sources.clone(),
        };
        (sources, b)
    }

    pub fn to_spec(&self) -> ModelSpec {
        let sources = match &self.kind {
            ModelKind::Expression(t) => Some(t.sources.clone()),
            _ => None,
        };
        // Catalog specs carry only the constructor parameters.
        let entry = catalog().into_iter().find(|e| e.name == self.label);
        let known = |k: &str| entry.as_ref().is_none_or(|e| e.params.iter().any(|p| p.0 == k));
        let params = self.params.iter().filter(|(k, _)| known(k) && k.as_str() != "eps").map(|(k, v)| (k.clone(), *v)).collect();
        ModelSpec {
            schema: SCHEMA.into(),
            label: self.label.clone(),
            kind: match &self.kind {
                ModelKind::Expression(_) => "expression".into(),
                _ => self.label.clone(),
            },
            params,
            limits: Some(self.limits),
            tail: Some(self.tail),
            eps: known("eps").then_some(self.eps),
            sources,
        }
    }
}

/// tanh z + (lambda^2 - 1)/(tanh z - lambda coth(lambda z)).
pub fn nt_superpotential(lambda: f64, z: Complex64) -> Complex64 {
    if lambda == 1.0 {
        return z.tanh();
    }
    let lz = lambda * z;
    let den = z.tanh() - lambda * lz.cosh() / lz.sinh();
    z.tanh() + (lambda * lambda - 1.0) / den
}

pub fn nt_superpotential_prime(lambda: f64, z: Complex64) -> Complex64 {
    let lz = lambda * z;
    let sech2 = 1.0 / (z.cosh() * z.cosh());
    if lambda == 1.0 {
        return sech2;
    }
    let csch2 = 1.0 / (lz.sinh() * lz.sinh());
    let den = z.tanh() - lambda * lz.cosh() / lz.sinh();
    sech2 - (lambda * lambda - 1.0) * (sech2 + lambda * lambda * csch2) / (den * den)
}

/// Serialized model description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(default = "schema_tag")]
    pub schema: String,
    #[serde(default)]
    pub label: String,
    pub kind: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limits: Option<AsymptoticLimits>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Tail>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sources: Option<ExpressionSources>,
}

fn schema_tag() -> String {
    SCHEMA.into()
}

impl ModelSpec {
    pub fn build(&self) -> Result<PotentialModel> {
        let mut params = self.params.clone();
        if let Some(eps) = self.eps {
            params.insert("eps".into(), eps);
        }
        let mut model = if self.kind == "expression" {
            let sources = self
                .sources
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("expression model needs sources".into()))?;
            let m = params.get("m").copied().unwrap_or(1.0);
            let bindings: Bindings = params.iter().filter(|(k, _)| k.as_str() != "m").map(|(k, v)| (k.clone(), c(*v))).collect();
            let mut b = bindings;
            b.insert("m".into(), c(m));
            make_from_expressions(
                sources,
                self.limits.unwrap_or_default(),
                self.tail.unwrap_or(Tail::Exponential { rate: 1.0 }),
                &b,
                m,
            )?
        } else {
            build_catalog(&self.kind, &params)?
        };
        if !self.label.is_empty() {
            model.label = self.label.clone();
        }
        Ok(model)
    }
}

/// One catalog entry: name, summary and parameters with defaults.
#[derive(Debug, Clone, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub summary: &'static str,
    pub params: Vec<(&'static str, f64, &'static str)>,
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry { name: "free", summary: "zero potential", params: vec![("m", 1.0, "mass")] },
        CatalogEntry {
            name: "scarf_dirac",
            summary: "hyperbolic Scarf shape as V = c f, S = +-c f",
            params: vec![
                ("l", 1.0, "integer coupling"),
                ("n", 1.0, "integer coupling"),
                ("c", 1.0, "vector/scalar strength"),
                ("pseudo_spin", 0.0, "1 selects V = -S"),
                ("m", 1.0, "mass"),
            ],
        },
        CatalogEntry {
            name: "centrifugal",
            summary: "V = S = c'/(x + i eps)^2",
            params: vec![
                ("c_prime", 0.5, "strength c'"),
                ("eps", DEFAULT_EPS, "imaginary shift"),
                ("pseudo_spin", 0.0, "1 selects V = -S"),
                ("m", 1.0, "mass"),
            ],
        },
        CatalogEntry {
            name: "nogami_toyama",
            summary: "pseudoscalar superpotential of the Poeschl-Teller pair",
            params: vec![("lambda", 2.0, "lambda >= 1"), ("eps", DEFAULT_EPS, "imaginary shift"), ("m", 1.0, "mass")],
        },
        CatalogEntry {
            name: "poeschl_teller",
            summary: "partner U2 = (lambda^2 - 2 sech^2(x + i eps))/2m of nogami_toyama",
            params: vec![("lambda", 2.0, "lambda >= 1"), ("eps", DEFAULT_EPS, "imaginary shift"), ("m", 1.0, "mass")],
        },
        CatalogEntry {
            name: "super_scarf",
            summary: "P = n tanh x + i l sech x",
            params: vec![("n", 2.0, "integer"), ("l", 1.0, "integer"), ("m", 1.0, "mass")],
        },
        CatalogEntry {
            name: "scalar_one_bound",
            summary: "scalar well with a single bound state",
            params: vec![("c_s", 1.0, "c_S > 0"), ("eps", DEFAULT_EPS, "imaginary shift"), ("m", 1.0, "mass")],
        },
    ]
}

/// Build a catalog model by name; missing parameters take their defaults.
pub fn build_catalog(name: &str, params: &BTreeMap<String, f64>) -> Result<PotentialModel> {
    let entry = catalog()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::UnsupportedModel(format!("unknown catalog model `{name}`")))?;
    for key in params.keys() {
        if !entry.params.iter().any(|(p, _, _)| p == key) {
            return Err(Error::InvalidParameter(format!("`{name}` has no parameter `{key}`")));
        }
    }
    let get = |k: &str| -> f64 {
        params
            .get(k)
            .copied()
            .unwrap_or_else(|| entry.params.iter().find(|(p, _, _)| *p == k).map(|p| p.1).unwrap_or(0.0))
    };
    let mode = if get("pseudo_spin") != 0.0 { SymmetryMode::PseudoSpinSym } else { SymmetryMode::SpinSym };
    let m = get("m");
    let mut model = match name {
        "free" => free(m)?,
        "scarf_dirac" => make_scarf_vector_scalar(integer("l", get("l"))?, integer("n", get("n"))?, get("c"), mode, m)?,
        "centrifugal" => make_centrifugal_with_mode(get("eps"), get("c_prime"), m, mode)?,
        "nogami_toyama" | "poeschl_teller" => make_nogami_toyama(get("lambda"), get("eps"), m)?,
        "super_scarf" => make_super_scarf(integer("n", get("n"))?, integer("l", get("l"))?, m)?,
        "scalar_one_bound" => make_scalar_one_bound(get("c_s"), get("eps"), m)?,
        _ => unreachable!("catalog entry without constructor"),
    };
    model.label = name.to_string();
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scarf_at_origin() {
        let m = 1.3;
        let model = make_scarf_vector_scalar(1, 1, 1.0, SymmetryMode::SpinSym, m).unwrap();
        let t = model.eval(0.0).unwrap();
        assert!((t.v - c(-3.0 / (2.0 * m))).norm() < 1e-15);
        assert_eq!(t.v, t.s);
        assert!(model.pt_residual().unwrap() <= 1e-10);
        let ps = make_scarf_vector_scalar(1, 1, 1.0, SymmetryMode::PseudoSpinSym, m).unwrap();
        let t = ps.eval(0.3).unwrap();
        assert_eq!(t.v, -t.s);
    }

    #[test]
    fn centrifugal_values() {
        let model = make_centrifugal(1.0, 1.0, 1.0).unwrap();
        assert!((model.eval(0.0).unwrap().v - c(-1.0)).norm() < 1e-15);
        assert!(model.pt_residual().unwrap() <= 1e-10);
        assert_eq!(make_centrifugal(0.0, 1.0, 1.0).unwrap_err(), Error::ZeroShift);
        assert!(matches!(make_centrifugal(1e-5, 1.0, 1.0), Err(Error::PoleOnAxis { .. })));
    }

    #[test]
    fn nogami_toyama_limits_and_symmetry() {
        let one = make_nogami_toyama(1.0, 0.1, 1.0).unwrap();
        for x in [-2.0, 0.0, 0.7] {
            let z = Complex64::new(x, 0.1);
            assert!((one.eval(x).unwrap().p - z.tanh()).norm() < 1e-15);
        }
        let model = make_nogami_toyama(2.0, 0.2, 1.0).unwrap();
        assert_eq!(model.limits.p_plus, c(-2.0));
        assert_eq!(model.limits.p_minus, c(2.0));
        assert!(model.pt_residual().unwrap() <= 1e-10);
        model.validate_limits().unwrap();
        assert!(make_nogami_toyama(0.5, 0.1, 1.0).is_err());
    }

    #[test]
    fn nogami_toyama_pole_screen() {
        // eps = pi/2 puts the tanh pole at x = 0
        assert!(matches!(make_nogami_toyama(2.0, std::f64::consts::FRAC_PI_2, 1.0), Err(Error::PoleOnAxis { .. })));
    }

    #[test]
    fn super_scarf_values() {
        let model = make_super_scarf(2, 1, 1.0).unwrap();
        assert!((model.eval(0.0).unwrap().p - I).norm() < 1e-15);
        assert_eq!(model.limits.p_plus, c(2.0));
        assert_eq!(model.limits.p_minus, c(-2.0));
        assert!(model.pt_residual().unwrap() <= 1e-10);
    }

    #[test]
    fn scalar_constants_and_product_form() {
        let (kb, eb, lb) = scalar_one_bound_constants(1.0, 1.0);
        assert!((eb - 2.0 / 5f64.sqrt()).abs() < 1e-15);
        assert!((kb - 1.0 / 5f64.sqrt()).abs() < 1e-15);
        let eps = 0.3;
        let model = make_scalar_one_bound(1.0, eps, 1.0).unwrap();
        for j in 0..20 {
            let x = -6.0 + 0.61 * j as f64;
            let z = Complex64::new(x, eps);
            let product = -(kb * kb / eb) / ((kb * z - lb).cosh() * (kb * z + lb).cosh());
            assert!((model.eval(x).unwrap().s - product).norm() < 1e-12);
        }
        assert!(model.eval(40.0).unwrap().s.norm() < 1e-12);
    }

    #[test]
    fn analytic_derivatives_match_differences() {
        let models = [
            make_scarf_vector_scalar(2, 1, 0.7, SymmetryMode::SpinSym, 1.0).unwrap(),
            make_centrifugal(0.3, 0.8, 1.0).unwrap(),
            make_nogami_toyama(2.0, 0.1, 1.0).unwrap(),
            make_super_scarf(3, 2, 1.0).unwrap(),
            make_scalar_one_bound(1.5, 0.2, 1.0).unwrap(),
        ];
        for model in &models {
            for x in [-1.7, -0.2, 0.4, 2.5] {
                let h = 1e-5;
                let (a, b) = (model.eval(x + h).unwrap(), model.eval(x - h).unwrap());
                let d = model.derivative(x).unwrap();
                let fd = |u: Complex64, w: Complex64| (u - w) / (2.0 * h);
                let err = (d.v - fd(a.v, b.v)).norm().max((d.s - fd(a.s, b.s)).norm()).max((d.p - fd(a.p, b.p)).norm());
                assert!(err < 1e-6, "{} at {x}: {err}", model.label);
            }
        }
    }

    #[test]
    fn expression_models() {
        let src = ExpressionSources { v: "0".into(), s: "0".into(), p: "2*tanh(x)".into() };
        let model =
            make_from_expressions(&src, AsymptoticLimits::pseudoscalar(-2.0, 2.0), Tail::Exponential { rate: 2.0 }, &Bindings::new(), 1.0)
                .unwrap();
        assert!(model.pt_symmetric);
        assert_eq!(model.class(), PotentialClass::PurePseudoscalar);
        let bad = ExpressionSources { v: "0".into(), s: "0".into(), p: "tanh(x)".into() };
        let err = make_from_expressions(&bad, AsymptoticLimits::zero(), Tail::Exponential { rate: 2.0 }, &Bindings::new(), 1.0)
            .unwrap_err();
        assert!(matches!(err, Error::LimitMismatch { .. }));
        let pole = ExpressionSources { v: "1/x".into(), s: "0".into(), p: "0".into() };
        assert!(matches!(
            make_from_expressions(&pole, AsymptoticLimits::zero(), Tail::Algebraic { power: 1.0 }, &Bindings::new(), 1.0),
            Err(Error::PoleOnAxis { .. })
        ));
    }

    #[test]
    fn catalog_round_trips_through_spec() {
        for entry in catalog() {
            let model = build_catalog(entry.name, &BTreeMap::new()).unwrap();
            let json = serde_json::to_string(&model.to_spec()).unwrap();
            let spec: ModelSpec = serde_json::from_str(&json).unwrap();
            let again = spec.build().unwrap();
            for x in [-1.0, 0.3, 2.0] {
                assert_eq!(model.eval(x).unwrap(), again.eval(x).unwrap());
            }
        }
        assert!(build_catalog("nope", &BTreeMap::new()).is_err());
        assert!(build_catalog("free", &[("q".to_string(), 1.0)].into()).is_err());
    }
}
