//! Shared domain model: asymptotic channels, PT classification, T/R
//! containers, the Wronskian and the phase/unitarity diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Absolute-plus-relative tolerance: `atol + rtol * |x|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub atol: f64,
    pub rtol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { atol: 1e-10, rtol: 1e-8 }
    }
}

impl Tolerance {
    pub fn bound(&self, scale: f64) -> f64 {
        self.atol + self.rtol * scale.abs()
    }

    pub fn accepts(&self, err: f64, scale: f64) -> bool {
        err <= self.bound(scale)
    }
}

/// Mass and energy in units with hbar = c = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub energy: f64,
}

impl PhysicalParams {
    pub fn new(m: f64, energy: f64) -> Result<Self> {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {m}")));
        }
        if !energy.is_finite() {
            return Err(Error::InvalidParameter(format!("energy must be finite, got {energy}")));
        }
        Ok(Self { m, energy })
    }
}

/// Limits of the potential triple at x -> -inf and x -> +inf.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AsymptoticLimits {
    pub v_minus: Complex64,
    pub v_plus: Complex64,
    pub s_minus: Complex64,
    pub s_plus: Complex64,
    pub p_minus: Complex64,
    pub p_plus: Complex64,
}

impl AsymptoticLimits {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Pseudoscalar-only limits.
    pub fn pseudoscalar(p_minus: f64, p_plus: f64) -> Self {
        Self {
            p_minus: p_minus.into(),
            p_plus: p_plus.into(),
            ..Self::default()
        }
    }

    pub fn side(&self, side: Side) -> (Complex64, Complex64, Complex64) {
        match side {
            Side::Minus => (self.v_minus, self.s_minus, self.p_minus),
            Side::Plus => (self.v_plus, self.s_plus, self.p_plus),
        }
    }

    /// V+ = V-*, S+ = S-*, P+ = -P-* within `tol`.
    pub fn is_pt_symmetric(&self, tol: Tolerance) -> bool {
        let ok = |a: Complex64, b: Complex64| (a - b).norm() <= tol.bound(b.norm());
        ok(self.v_plus, self.v_minus.conj())
            && ok(self.s_plus, self.s_minus.conj())
            && ok(self.p_plus, -self.p_minus.conj())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Plus,
}

/// Plane-wave data on both sides: momenta and lower/upper spinor ratios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticChannel {
    pub k_minus: Complex64,
    pub k_plus: Complex64,
    pub c_minus: Complex64,
    pub c_plus: Complex64,
    pub d_minus: Complex64,
    pub d_plus: Complex64,
}

impl AsymptoticChannel {
    /// Channel of the reduced equation written as (psi, psi'):
    /// e^{ikx} carries ratio ik, e^{-ikx} carries -ik.
    pub fn schrodinger(k_minus: Complex64, k_plus: Complex64) -> Self {
        Self {
            k_minus,
            k_plus,
            c_minus: I * k_minus,
            c_plus: I * k_plus,
            d_minus: -I * k_minus,
            d_plus: -I * k_plus,
        }
    }

    pub fn side(&self, side: Side) -> (Complex64, Complex64, Complex64) {
        match side {
            Side::Minus => (self.k_minus, self.c_minus, self.d_minus),
            Side::Plus => (self.k_plus, self.c_plus, self.d_plus),
        }
    }

    /// Transmission phase ratio, from the Wronskian identity
    /// T_LR / T_RL = (D- - C-)/(D+ - C+), reduced to (-pi, pi].
    pub fn nu_phase(&self) -> f64 {
        let ratio = (self.d_minus - self.c_minus) / (self.d_plus - self.c_plus);
        reduce_phase(ratio.arg())
    }
}

/// Reduce an angle to (-pi, pi].
pub fn reduce_phase(phi: f64) -> f64 {
    let mut p = phi.rem_euclid(2.0 * PI);
    if p > PI {
        p -= 2.0 * PI;
    }
    p
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PtBranch {
    ConjugatePair,
    AntiConjugatePair,
    NotPT,
}

/// Coefficients of two independent solutions in the plane-wave bases:
/// solution i is a_i e^{ikx}(1,C) + b_i e^{-ikx}(1,D) on each side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionCoefficients {
    pub a1_minus: Complex64,
    pub a1_plus: Complex64,
    pub b1_minus: Complex64,
    pub b1_plus: Complex64,
    pub a2_minus: Complex64,
    pub a2_plus: Complex64,
    pub b2_minus: Complex64,
    pub b2_plus: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PtExactnessReport {
    pub holds: bool,
    pub phi: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringResult {
    pub t_lr: Complex64,
    pub r_lr: Complex64,
    pub t_rl: Complex64,
    pub r_rl: Complex64,
    pub nu_phase: f64,
    pub unitarity_defect: f64,
    pub branch: PtBranch,
    pub pt_exact: PtExactnessReport,
}

/// Default tolerance on the PT-exactness residual.
pub const PT_TOLERANCE: f64 = 1e-8;

impl ScatteringResult {
    /// Assemble a result from amplitudes, filling in the diagnostics.
    pub fn from_amplitudes(
        t_lr: Complex64,
        r_lr: Complex64,
        t_rl: Complex64,
        r_rl: Complex64,
        nu_phase: f64,
        branch: PtBranch,
        pt_tol: f64,
    ) -> Self {
        let unitarity_defect = (t_lr.norm() - 1.0).abs().max((t_rl.norm() - 1.0).abs());
        // progressive: A- = 1, B- = R_LR, A+ = T_LR, B+ = 0
        let (phi, res_p) = pt_residual(Complex64::new(1.0, 0.0), r_lr, t_lr, Complex64::new(0.0, 0.0));
        // regressive: A- = 0, B- = T_RL, A+ = R_RL, B+ = 1
        let (_, res_r) = pt_residual(Complex64::new(0.0, 0.0), t_rl, r_rl, Complex64::new(1.0, 0.0));
        let residual = res_p.max(res_r);
        let holds = branch == PtBranch::ConjugatePair && residual <= pt_tol;
        Self {
            t_lr,
            r_lr,
            t_rl,
            r_rl,
            nu_phase,
            unitarity_defect,
            branch,
            pt_exact: PtExactnessReport { holds, phi, residual },
        }
    }

    pub fn max_reflection(&self) -> f64 {
        self.r_lr.norm().max(self.r_rl.norm())
    }
}

/// Best common phase and violation of A±* = e^{iφ}A∓, B±* = e^{iφ}B∓.
fn pt_residual(a_m: Complex64, b_m: Complex64, a_p: Complex64, b_p: Complex64) -> (f64, f64) {
    // The phase is fixed by whichever pair carries the larger amplitude.
    let (num, den) = if (a_m.norm() + a_p.norm()) >= (b_m.norm() + b_p.norm()) {
        if a_p.norm() >= a_m.norm() {
            (a_m.conj(), a_p)
        } else {
            (a_p.conj(), a_m)
        }
    } else if b_p.norm() >= b_m.norm() {
        (b_m.conj(), b_p)
    } else {
        (b_p.conj(), b_m)
    };
    if den.norm() == 0.0 {
        return (0.0, f64::INFINITY);
    }
    let phi = reduce_phase(num.arg() - den.arg());
    let e = Complex64::from_polar(1.0, phi);
    let res = [
        (a_p.conj() - e * a_m).norm(),
        (a_m.conj() - e * a_p).norm(),
        (b_p.conj() - e * b_m).norm(),
        (b_m.conj() - e * b_p).norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    (phi, res)
}

/// Spinor sample at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinorState {
    pub x: f64,
    pub psi1: Complex64,
    pub psi2: Complex64,
}

impl SpinorState {
    pub fn new(x: f64, psi1: Complex64, psi2: Complex64) -> Self {
        Self { x, psi1, psi2 }
    }

    pub fn density(&self) -> f64 {
        self.psi1.norm_sqr() + self.psi2.norm_sqr()
    }
}

/// Square root on the branch Re k >= 0, ties resolved by Im k >= 0.
pub fn branch_sqrt(k2: Complex64) -> Complex64 {
    let k = k2.sqrt();
    if k.re < 0.0 || (k.re == 0.0 && k.im < 0.0) {
        -k
    } else {
        k
    }
}

/// k with k^2 = (E - V)^2 - (m + S)^2 - P^2 on the requested side.
pub fn asymptotic_momentum(params: PhysicalParams, limits: &AsymptoticLimits, side: Side) -> Complex64 {
    let (v, s, p) = limits.side(side);
    let e = params.energy - v;
    let ms = params.m + s;
    branch_sqrt(e * e - ms * ms - p * p)
}

pub fn channel_ratios(
    params: PhysicalParams,
    limits: &AsymptoticLimits,
    k_minus: Complex64,
    k_plus: Complex64,
) -> Result<AsymptoticChannel> {
    let ratios = |side: Side, k: Complex64, name: &'static str| -> Result<(Complex64, Complex64)> {
        let (v, s, p) = limits.side(side);
        let den = params.m + s + params.energy - v;
        if den.norm() <= 1e-14 * (params.m.abs() + params.energy.abs()).max(1.0) {
            return Err(Error::DegenerateChannel { side: name });
        }
        Ok(((k + I * p) / den, (-k + I * p) / den))
    };
    let (c_minus, d_minus) = ratios(Side::Minus, k_minus, "-")?;
    let (c_plus, d_plus) = ratios(Side::Plus, k_plus, "+")?;
    Ok(AsymptoticChannel { k_minus, k_plus, c_minus, c_plus, d_minus, d_plus })
}

/// Full channel at the given energy.
pub fn channel(params: PhysicalParams, limits: &AsymptoticLimits) -> Result<AsymptoticChannel> {
    let km = asymptotic_momentum(params, limits, Side::Minus);
    let kp = asymptotic_momentum(params, limits, Side::Plus);
    channel_ratios(params, limits, km, kp)
}

pub fn classify_pt_branch(channel: &AsymptoticChannel) -> PtBranch {
    classify_pt_branch_with(channel, Tolerance::default())
}

pub fn classify_pt_branch_with(channel: &AsymptoticChannel, tol: Tolerance) -> PtBranch {
    let (km, kp) = (channel.k_minus, channel.k_plus);
    let bound = tol.bound(kp.norm());
    if (km.conj() - kp).norm() <= bound {
        PtBranch::ConjugatePair
    } else if (km.conj() + kp).norm() <= bound {
        PtBranch::AntiConjugatePair
    } else {
        PtBranch::NotPT
    }
}

pub fn coefficients_to_scattering(c: &SolutionCoefficients, channel: &AsymptoticChannel) -> Result<ScatteringResult> {
    coefficients_to_scattering_with(c, channel, PT_TOLERANCE)
}

pub fn coefficients_to_scattering_with(
    c: &SolutionCoefficients,
    channel: &AsymptoticChannel,
    pt_tol: f64,
) -> Result<ScatteringResult> {
    let lhs = c.b1_plus * c.a2_minus;
    let rhs = c.a1_minus * c.b2_plus;
    let den = lhs - rhs;
    let scale = lhs.norm() + rhs.norm();
    if !(den.norm() > 1e-12 * scale) || den.norm() == 0.0 {
        return Err(Error::SingularMatching { det: den.norm() });
    }
    let t_lr = (c.b1_plus * c.a2_plus - c.a1_plus * c.b2_plus) / den;
    let r_lr = (c.b1_plus * c.b2_minus - c.b1_minus * c.b2_plus) / den;
    let t_rl = (c.a2_minus * c.b1_minus - c.a1_minus * c.b2_minus) / den;
    let r_rl = (c.a1_plus * c.a2_minus - c.a1_minus * c.a2_plus) / den;
    Ok(ScatteringResult::from_amplitudes(
        t_lr,
        r_lr,
        t_rl,
        r_rl,
        channel.nu_phase(),
        classify_pt_branch(channel),
        pt_tol,
    ))
}

/// psi1^(a) psi2^(b) - psi1^(b) psi2^(a).
pub fn wronskian(a: &SpinorState, b: &SpinorState) -> Complex64 {
    a.psi1 * b.psi2 - b.psi1 * a.psi2
}
