//! Closed-form results: scattering data, bound states and normalizations
//! for the exactly solvable families. Used as fast paths and as oracles
//! for the integrator.

pub mod gamma;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use gamma::{gamma, gamma_ratio, ln_gamma};

use crate::boundstates::{BoundStateRecord, Method, StateKind};
use crate::error::{Error, Result};
use crate::formalism::{PtBranch, ScatteringResult, SpinorState, I, PT_TOLERANCE};
use crate::potentials::{scalar_one_bound_constants, ModelKind, PotentialModel, SymmetryMode};
use crate::quadrature::{integrate_line, QuadConfig};

/// Samples on the default bound-state grid.
pub const GRID_POINTS: usize = 4001;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn reflectionless(t_lr: Complex64, t_rl: Complex64) -> ScatteringResult {
    let z = c(0.0);
    ScatteringResult::from_amplitudes(t_lr, z, t_rl, z, 0.0, PtBranch::ConjugatePair, PT_TOLERANCE)
}

fn momentum(k2: f64, what: &str) -> Result<f64> {
    if k2 > 0.0 {
        Ok(k2.sqrt())
    } else {
        Err(Error::NotScattering(format!("{what}: k^2 = {k2} is not positive")))
    }
}

/// Uniform grid over [-half_width, half_width].
pub fn grid(half_width: f64, points: usize) -> Vec<f64> {
    let h = 2.0 * half_width / (points - 1) as f64;
    (0..points).map(|i| -half_width + i as f64 * h).collect()
}

// ---------------------------------------------------------------- centrifugal

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CentrifugalScattering {
    pub result: ScatteringResult,
    pub bessel_index_sq: Complex64,
    /// Set when the Bessel index is imaginary.
    pub imaginary_index: bool,
}

/// Squared Bessel index of the reduced centrifugal equation.
pub fn bessel_index_sq(c_prime: f64, m: f64, e: f64, mode: SymmetryMode) -> f64 {
    let shift = match mode {
        SymmetryMode::SpinSym => m + e,
        SymmetryMode::PseudoSpinSym => e - m,
    };
    2.0 * c_prime * shift + 0.25
}

/// Spin-symmetric centrifugal scattering: transparent at every energy.
pub fn centrifugal_scattering(c_prime: f64, m: f64, e: f64) -> Result<CentrifugalScattering> {
    momentum(e * e - m * m, "centrifugal")?;
    let nu2 = bessel_index_sq(c_prime, m, e, SymmetryMode::SpinSym);
    Ok(CentrifugalScattering {
        result: reflectionless(c(1.0), c(1.0)),
        bessel_index_sq: c(nu2),
        imaginary_index: nu2 < 0.0,
    })
}

/// Right-incident reflection implied by the Hankel connection formula
/// across the Stokes line: R_RL = -2i cos(pi nu) e^{-2 k eps} for eps > 0.
pub fn centrifugal_r_rl_connection(c_prime: f64, m: f64, e: f64, eps: f64) -> Result<Complex64> {
    let k = momentum(e * e - m * m, "centrifugal")?;
    if eps <= 0.0 {
        return Err(Error::InvalidParameter(format!("connection formula needs eps > 0, got {eps}")));
    }
    let nu = c(bessel_index_sq(c_prime, m, e, SymmetryMode::SpinSym)).sqrt();
    Ok(-2.0 * I * (PI * nu).cos() * (-2.0 * k * eps).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroModeRegime {
    /// beta > 2: finite norm from the Gamma-ratio formula.
    Normalizable,
    /// 1 < beta <= 2: existence claimed, but the norm formula diverges.
    Ambiguous,
    NonNormalizable,
    /// 1 + 16 c' m = 0: gamma = 1/2 twice, logarithmic second solution.
    DoubleRoot,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeReport {
    pub gamma1: Complex64,
    pub gamma2: Complex64,
    /// sqrt(1 + 16 c' m) when real.
    pub beta: Option<f64>,
    pub bound_exists: bool,
    pub alpha2_norm_sq: Option<f64>,
    pub regime: ZeroModeRegime,
    pub eps: f64,
    pub m: f64,
}

/// k = 0 solution of the spin-symmetric centrifugal problem at E = m.
pub fn centrifugal_zero_mode(c_prime: f64, m: f64, eps: f64) -> Result<ZeroModeReport> {
    if eps == 0.0 {
        return Err(Error::ZeroShift);
    }
    let disc = 1.0 + 16.0 * c_prime * m;
    let root = c(disc).sqrt();
    let gamma1 = (1.0 + root) / 2.0;
    let gamma2 = (1.0 - root) / 2.0;
    let beta = (disc >= 0.0).then(|| disc.sqrt());
    let regime = match beta {
        _ if disc.abs() <= 1e-12 => ZeroModeRegime::DoubleRoot,
        Some(b) if b > 2.0 => ZeroModeRegime::Normalizable,
        Some(b) if b > 1.0 => ZeroModeRegime::Ambiguous,
        _ => ZeroModeRegime::NonNormalizable,
    };
    let alpha2_norm_sq = match (regime, beta) {
        (ZeroModeRegime::Normalizable, Some(b)) => Some(alpha2_norm_sq(b, m, eps)),
        _ => None,
    };
    Ok(ZeroModeReport {
        gamma1,
        gamma2,
        beta,
        bound_exists: regime == ZeroModeRegime::Normalizable,
        alpha2_norm_sq,
        regime,
        eps,
        m,
    })
}

fn alpha2_norm_sq(beta: f64, m: f64, eps: f64) -> f64 {
    let e = eps.abs();
    let upper = e * e * gamma_ratio(beta / 2.0 - 1.0, (beta - 1.0) / 2.0);
    let g = (1.0 - beta) / 2.0;
    let lower = g * g / (4.0 * m * m) * gamma_ratio(beta / 2.0, (beta + 1.0) / 2.0);
    e.powf(beta) / (PI.sqrt() * (upper + lower))
}

impl ZeroModeReport {
    /// Normalized spinor psi1 = alpha2 (x + i eps)^{(1-beta)/2},
    /// psi2 = -(i/2m) psi1', with alpha2 real and positive.
    pub fn spinor(&self, x: f64) -> Result<SpinorState> {
        let n2 = self
            .alpha2_norm_sq
            .ok_or_else(|| Error::InvalidParameter(format!("no normalizable zero mode ({:?})", self.regime)))?;
        let alpha = n2.sqrt();
        let g = self.gamma2;
        let z = Complex64::new(x, self.eps);
        let psi1 = alpha * z.powc(g);
        let dpsi1 = alpha * g * z.powc(g - 1.0);
        Ok(SpinorState::new(x, psi1, -I / (2.0 * self.m) * dpsi1))
    }
}

/// Pseudo-spin image of a spin-symmetric state: (psi2, -psi1), at E -> -E.
pub fn pseudo_spin_mirror(s: &SpinorState) -> SpinorState {
    SpinorState::new(s.x, s.psi2, -s.psi1)
}

/// Leading Hankel asymptotics of the spin-symmetric centrifugal spinor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HankelKind {
    First,
    Second,
}

pub fn hankel_asymptotic_spinor(nu: Complex64, kind: HankelKind, k: f64, eps: f64, e: f64, m: f64, x: f64) -> SpinorState {
    let ratio = k / (e + m);
    let phase = I * k * x - k * eps - I * PI * nu / 2.0 - I * PI / 4.0;
    let amp = (2.0 / PI).sqrt();
    match kind {
        HankelKind::First => {
            let w = amp * phase.exp();
            SpinorState::new(x, w, ratio * w)
        }
        HankelKind::Second => {
            let w = amp * (-phase).exp();
            SpinorState::new(x, w, -ratio * w)
        }
    }
}

// ---------------------------------------------------------------- pseudoscalar

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartnerScattering {
    pub k: f64,
    pub partner1: ScatteringResult,
    pub partner2: ScatteringResult,
}

/// Scattering on the reflectionless Pöschl–Teller partner U2 and on its
/// Nogami–Toyama partner U1.
pub fn poeschl_teller_scattering(lambda: f64, m: f64, e: f64) -> Result<PartnerScattering> {
    let k = momentum(e * e - m * m - lambda * lambda, "Pöschl-Teller")?;
    let ik = I * k;
    let t2 = -(1.0 - ik) / (1.0 + ik);
    let t1 = (lambda - ik) / (lambda + ik) * (1.0 - ik) / (1.0 + ik);
    Ok(PartnerScattering { k, partner1: reflectionless(t1, t1), partner2: reflectionless(t2, t2) })
}

/// Product formula for the super-Scarf partners.
pub fn super_scarf_transmission(n: i64, l: i64, m: f64, e: f64, partner: u8) -> Result<Complex64> {
    let (top, sign_power) = match partner {
        2 if n > 1 => (n, n + l),
        1 if n > 2 => (n - 1, n + l - 1),
        1 | 2 => {
            return Err(Error::OutOfStatedDomain(format!(
                "super-Scarf partner {partner} transmission is stated for n > {}, got n = {n}",
                if partner == 2 { 1 } else { 2 }
            )))
        }
        _ => return Err(Error::InvalidParameter(format!("partner must be 1 or 2, got {partner}"))),
    };
    let nf = n as f64;
    let k = momentum(e * e - m * m - nf * nf, "super-Scarf")?;
    let ik = I * k;
    let mut t = c(if sign_power % 2 == 0 { 1.0 } else { -1.0 });
    for j in 1..=top {
        t *= (j as f64 - ik) / (j as f64 + ik);
    }
    for j in 1..=l {
        let h = j as f64 - 0.5;
        t *= (h - ik) / (h + ik);
    }
    Ok(t)
}

/// Nogami–Toyama excited doublet, unnormalized: psi2 = sech z,
/// psi1 = i (lambda^2 - 1) / ((m - E)(sinh z - lambda cosh z coth(lambda z))).
pub fn nt_excited_spinor(lambda: f64, eps: f64, m: f64, x: f64) -> SpinorState {
    let e = (m * m + lambda * lambda - 1.0).sqrt();
    let z = Complex64::new(x, eps);
    let lz = lambda * z;
    let den = z.sinh() - lambda * z.cosh() * lz.cosh() / lz.sinh();
    let psi1 = I * (lambda * lambda - 1.0) / ((m - e) * den);
    SpinorState::new(x, psi1, 1.0 / z.cosh())
}

/// Nogami–Toyama zero mode at E = m, unnormalized: 1/(lambda cosh(lambda z) - tanh z sinh(lambda z)).
pub fn nt_ground_spinor(lambda: f64, eps: f64, x: f64) -> SpinorState {
    let z = Complex64::new(x, eps);
    let lz = lambda * z;
    SpinorState::new(x, 1.0 / (lambda * lz.cosh() - z.tanh() * lz.sinh()), c(0.0))
}

/// Squared norm of a spinor profile by adaptive quadrature over the line.
pub fn spinor_norm_sq<F>(profile: F) -> Result<f64>
where
    F: Fn(f64) -> SpinorState,
{
    let cfg = QuadConfig { abs_tol: 1e-15, rel_tol: 1e-13, ..Default::default() };
    let q = integrate_line(|x| Ok(c(profile(x).density())), 2.0, cfg)?;
    Ok(q.value.re)
}

fn sampled_record<F>(profile: F, half_width: f64, energy: f64, kappa: f64, m: f64, kind: StateKind) -> Result<BoundStateRecord>
where
    F: Fn(f64) -> SpinorState,
{
    let norm_sq = spinor_norm_sq(&profile)?;
    let scale = 1.0 / norm_sq.sqrt();
    let spinor = grid(half_width, GRID_POINTS)
        .into_iter()
        .map(|x| {
            let s = profile(x);
            SpinorState::new(x, s.psi1 * scale, s.psi2 * scale)
        })
        .collect();
    Ok(BoundStateRecord {
        energy,
        kappa,
        eps_eff: (energy * energy - m * m) / (2.0 * m),
        eigen_im: 0.0,
        spinor,
        norm: Some(1.0),
        node_info: String::new(),
        kind,
        method: Method::Analytic,
        partner: None,
    })
}

fn level_record(energy: f64, kappa: f64, m: f64, partner: u8, kind: StateKind) -> BoundStateRecord {
    BoundStateRecord {
        energy,
        kappa,
        eps_eff: (energy * energy - m * m) / (2.0 * m),
        eigen_im: 0.0,
        spinor: Vec::new(),
        norm: None,
        node_info: "levels only".into(),
        kind,
        method: Method::Analytic,
        partner: Some(partner),
    }
}

/// Closed-form bound states of the pseudoscalar families.
pub fn pseudoscalar_bound_states(model: &PotentialModel) -> Result<Vec<BoundStateRecord>> {
    let m = model.m;
    let half_width = model.default_half_width();
    match model.kind {
        ModelKind::NogamiToyama { lambda } if lambda > 1.0 => {
            let eps = model.eps;
            let mut ground = sampled_record(|x| nt_ground_spinor(lambda, eps, x), half_width, m, lambda, m, StateKind::ZeroMode)?;
            ground.partner = Some(1);
            ground.node_info = "no nodes on the real axis".into();
            let e = (m * m + lambda * lambda - 1.0).sqrt();
            let mut excited = sampled_record(|x| nt_excited_spinor(lambda, eps, m, x), half_width, e, 1.0, m, StateKind::Bound)?;
            excited.node_info = format!("psi1 node at x = {}i (off axis)", -eps);
            Ok(vec![ground, excited])
        }
        ModelKind::NogamiToyama { .. } => {
            // lambda = 1: P = tanh z, only the E = -m mode psi2 = sech z survives
            let eps = model.eps;
            let profile = |x: f64| SpinorState::new(x, c(0.0), 1.0 / Complex64::new(x, eps).cosh());
            let mut r = sampled_record(profile, half_width, -m, 1.0, m, StateKind::ZeroMode)?;
            r.partner = Some(2);
            Ok(vec![r])
        }
        ModelKind::SuperScarf { n, l } => {
            // poles of T2 at k = i j (j = 1..n) and k = i (j - 1/2) (j = 1..l);
            // kappa = n is the zero mode and lives in U2 only
            let nf = n as f64;
            let mut kappas: Vec<f64> = (1..=n).map(|j| j as f64).chain((1..=l).map(|j| j as f64 - 0.5)).collect();
            kappas.sort_by(|a, b| b.total_cmp(a));
            if let Some(&top) = kappas.first().filter(|&&k| k * k >= m * m + nf * nf && k != nf) {
                return Err(Error::OutOfStatedDomain(format!("level with kappa = {top} has no real Dirac energy")));
            }
            let mut out = Vec::new();
            for partner in [2u8, 1] {
                for &kappa in &kappas {
                    let level = (nf * nf - kappa * kappa) / (2.0 * m);
                    let (energy, kind) = if kappa == nf {
                        if partner == 1 {
                            continue;
                        }
                        (-m, StateKind::ZeroMode)
                    } else {
                        ((m * m + 2.0 * m * level).sqrt(), StateKind::Bound)
                    };
                    out.push(level_record(energy, kappa, m, partner, kind));
                }
            }
            Ok(out)
        }
        _ => Err(Error::UnsupportedModel(format!("{} has no closed-form pseudoscalar spectrum", model.label))),
    }
}

// ---------------------------------------------------------------- scalar

/// T = (ik - kappa_B)/(ik + kappa_B) in both directions, R = 0.
pub fn scalar_transmission(c_s: f64, m: f64, e: f64) -> Result<ScatteringResult> {
    let k = momentum(e * e - m * m, "scalar")?;
    let (kappa, _, _) = scalar_one_bound_constants(c_s, m);
    let t = (I * k - kappa) / (I * k + kappa);
    Ok(reflectionless(t, t))
}

/// |N1|^2 = sin(kappa eps) cos(kappa eps)/(4 eps), defined for 0 < |kappa eps| < pi/2.
pub fn scalar_n1_sq(c_s: f64, m: f64, eps_shift: f64) -> Result<f64> {
    let (kappa, _, _) = scalar_one_bound_constants(c_s, m);
    let a = kappa * eps_shift;
    let value = a.sin() * a.cos() / (4.0 * eps_shift);
    if eps_shift == 0.0 || a.abs() >= PI / 2.0 || !(value > 0.0) || !value.is_finite() {
        return Err(Error::ShiftDomain(eps_shift));
    }
    Ok(value)
}

/// Spinor of the scalar bound state in the representation where the
/// components obey the partner equations: N/cosh(kappa z -+ lambda).
pub fn scalar_bound_spinor(c_s: f64, m: f64, eps_shift: f64, n1: f64, x: f64) -> SpinorState {
    let (kappa, _, lambda) = scalar_one_bound_constants(c_s, m);
    let z = Complex64::new(x, eps_shift);
    SpinorState::new(x, n1 / (kappa * z - lambda).cosh(), n1 / (kappa * z + lambda).cosh())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarBoundState {
    pub record: BoundStateRecord,
    pub n1_sq: f64,
}

pub fn scalar_bound_state(c_s: f64, m: f64, eps_shift: f64, half_width: f64) -> Result<ScalarBoundState> {
    let n1_sq = scalar_n1_sq(c_s, m, eps_shift)?;
    let (kappa, e_b, _) = scalar_one_bound_constants(c_s, m);
    let n1 = n1_sq.sqrt();
    let spinor = grid(half_width, GRID_POINTS).into_iter().map(|x| scalar_bound_spinor(c_s, m, eps_shift, n1, x)).collect();
    let record = BoundStateRecord {
        energy: e_b,
        kappa,
        eps_eff: -kappa * kappa / (2.0 * m),
        eigen_im: 0.0,
        spinor,
        norm: Some(1.0),
        node_info: String::new(),
        kind: StateKind::Bound,
        method: Method::Analytic,
        partner: None,
    };
    Ok(ScalarBoundState { record, n1_sq })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ScalarRequest {
    Scatter { energy: f64 },
    Bound { eps_shift: f64, half_width: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScalarExact {
    Scattering(ScatteringResult),
    Bound(ScalarBoundState),
}

pub fn scalar_exact(c_s: f64, m: f64, request: ScalarRequest) -> Result<ScalarExact> {
    match request {
        ScalarRequest::Scatter { energy } => scalar_transmission(c_s, m, energy).map(ScalarExact::Scattering),
        ScalarRequest::Bound { eps_shift, half_width } => {
            scalar_bound_state(c_s, m, eps_shift, half_width).map(ScalarExact::Bound)
        }
    }
}

// ---------------------------------------------------------------- Riccati

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RiccatiClass {
    Trigonometric,
    Hyperbolic,
    Limiting,
}

/// Superpotential W = m + S whose partner U1 = (W^2 - W' - m^2)/(2m) is the constant c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiccatiPartner {
    pub class: RiccatiClass,
    pub c: f64,
    pub m: f64,
    pub d: Complex64,
    /// sqrt(|m (m + 2c)|).
    pub a: f64,
}

pub fn riccati_constant_partner(c_const: f64, m: f64, d: Complex64) -> RiccatiPartner {
    let s = m + 2.0 * c_const;
    let class = if s.abs() <= 1e-14 * m.abs().max(1.0) {
        RiccatiClass::Limiting
    } else if s > 0.0 {
        RiccatiClass::Hyperbolic
    } else {
        RiccatiClass::Trigonometric
    };
    RiccatiPartner { class, c: c_const, m, d, a: (m * s).abs().sqrt() }
}

impl RiccatiPartner {
    /// Hyperbolic: -a tanh(a(x+d)); trigonometric: a tan(a(x+d)); limiting: -1/(x+d).
    pub fn w(&self, x: f64) -> Complex64 {
        let y = x + self.d;
        match self.class {
            RiccatiClass::Hyperbolic => -self.a * (self.a * y).tanh(),
            RiccatiClass::Trigonometric => self.a * (self.a * y).tan(),
            RiccatiClass::Limiting => -1.0 / y,
        }
    }

    pub fn w_prime(&self, x: f64) -> Complex64 {
        let y = x + self.d;
        let a2 = self.a * self.a;
        match self.class {
            RiccatiClass::Hyperbolic => -a2 / ((self.a * y).cosh().powi(2)),
            RiccatiClass::Trigonometric => a2 / ((self.a * y).cos().powi(2)),
            RiccatiClass::Limiting => 1.0 / (y * y),
        }
    }

    pub fn u1(&self, x: f64) -> Complex64 {
        let w = self.w(x);
        (w * w - self.w_prime(x) - self.m * self.m) / (2.0 * self.m)
    }

    pub fn u2(&self, x: f64) -> Complex64 {
        let w = self.w(x);
        (w * w + self.w_prime(x) - self.m * self.m) / (2.0 * self.m)
    }
}
