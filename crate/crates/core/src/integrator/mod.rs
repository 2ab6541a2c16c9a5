//! Spinor integration across a finite box, asymptotic matching and
//! reduction to Schrödinger-like problems.

mod dopri;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use dopri::{Dopri5, Tolerances};

use crate::error::{Error, Result};
use crate::formalism::{
    self, AsymptoticChannel, PhysicalParams, ScatteringResult, SolutionCoefficients, SpinorState, I,
};
use crate::potentials::{PotentialClass, PotentialModel, Tail};

/// Rescale threshold for the amplitude renormalization.
const RENORM_AT: f64 = 1e100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// Box half-width; `None` picks it from the tail class.
    pub half_width: Option<f64>,
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Extrapolate in 1/L for algebraic tails.
    pub richardson: bool,
    /// Number of box sizes L, 2L, 4L, ... used by the extrapolation.
    pub richardson_levels: usize,
    /// Tolerance of the PT-exactness residual.
    pub pt_tol: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            half_width: None,
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 2_000_000,
            richardson: true,
            richardson_levels: 3,
            pt_tol: formalism::PT_TOLERANCE,
        }
    }
}

impl IntegratorConfig {
    pub fn tolerances(&self) -> Tolerances {
        Tolerances { rtol: self.rtol, atol: self.atol, max_steps: self.max_steps }
    }

    pub fn validate(&self) -> Result<()> {
        if self.half_width.is_some_and(|l| !(l > 0.0)) || !(self.rtol > 0.0) || !(self.atol > 0.0) {
            return Err(Error::InvalidParameter("box half-width and tolerances must be positive".into()));
        }
        if self.richardson_levels < 2 {
            return Err(Error::InvalidParameter("richardson needs at least two levels".into()));
        }
        Ok(())
    }
}

/// A first-order 2x2 linear system psi' = A(x) psi with trace A = 0.
pub trait LinearSystem: Sync {
    fn matrix(&self, x: f64) -> Result<[[Complex64; 2]; 2]>;
}

/// The Dirac system in the Dirac representation:
/// psi1' =  P psi1 + i(E - V + m + S) psi2,
/// psi2' = -P psi2 + i(E - V - m - S) psi1.
pub struct DiracSystem<'a> {
    pub model: &'a PotentialModel,
    pub m: f64,
    pub energy: Complex64,
}

impl LinearSystem for DiracSystem<'_> {
    fn matrix(&self, x: f64) -> Result<[[Complex64; 2]; 2]> {
        let t = self.model.eval(x)?;
        let e = self.energy - t.v;
        Ok([[t.p, I * (e + self.m + t.s)], [I * (e - self.m - t.s), -t.p]])
    }
}

/// dpsi/dx for a single spinor.
pub fn rhs(model: &PotentialModel, params: PhysicalParams, state: &SpinorState) -> Result<(Complex64, Complex64)> {
    let a = DiracSystem { model, m: params.m, energy: params.energy.into() }.matrix(state.x)?;
    Ok((a[0][0] * state.psi1 + a[0][1] * state.psi2, a[1][0] * state.psi1 + a[1][1] * state.psi2))
}

/// Effective potential of a reduced Schrödinger-like problem
/// -psi''/(2m) + U psi = eps psi.
#[derive(Clone)]
pub struct EffectivePotential {
    f: Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>,
    pub limits: (Complex64, Complex64),
    pub tail: Tail,
    pub label: String,
}

impl fmt::Debug for EffectivePotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EffectivePotential").field("label", &self.label).field("limits", &self.limits).finish()
    }
}

impl EffectivePotential {
    pub fn new(
        label: impl Into<String>,
        limits: (Complex64, Complex64),
        tail: Tail,
        f: impl Fn(f64) -> Result<Complex64> + Send + Sync + 'static,
    ) -> Self {
        Self { f: Arc::new(f), limits, tail, label: label.into() }
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        (self.f)(x)
    }

    /// Continuum threshold min Re U(+-inf).
    pub fn threshold(&self) -> f64 {
        self.limits.0.re.min(self.limits.1.re)
    }
}

/// (psi, psi') form of -psi''/(2m) + U psi = eps psi.
pub struct SchrodingerSystem<'a> {
    pub u: &'a EffectivePotential,
    pub m: f64,
    pub eps: Complex64,
}

impl LinearSystem for SchrodingerSystem<'_> {
    fn matrix(&self, x: f64) -> Result<[[Complex64; 2]; 2]> {
        let u = self.u.eval(x)?;
        let z = Complex64::new(0.0, 0.0);
        Ok([[z, Complex64::new(1.0, 0.0)], [2.0 * self.m * (u - self.eps), z]])
    }
}

/// Two-solution integration result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairOutcome {
    pub coefficients: SolutionCoefficients,
    pub wronskian_drift: f64,
    pub error_estimate: f64,
    pub steps: usize,
}

fn mat_vec(a: &[[Complex64; 2]; 2], u: Complex64, v: Complex64) -> (Complex64, Complex64) {
    (a[0][0] * u + a[0][1] * v, a[1][0] * u + a[1][1] * v)
}

/// Local propagating basis of psi' = A(x) psi at a box edge.
///
/// Columns are the eigenvectors (1, C(x)) and (1, D(x)) of A(x), each
/// dressed with the first adiabatic admixture of the other one, so slowly
/// decaying tails do not leak a counter-propagating wave into the data.
#[derive(Debug, Clone, Copy)]
struct EdgeBasis {
    c: Complex64,
    d: Complex64,
    /// (1,C) + alpha (1,D) continues as the e^{ikx} wave.
    alpha: Complex64,
    /// (1,D) + beta (1,C) continues as the e^{-ikx} wave.
    beta: Complex64,
}

fn eigen_ratios<S: LinearSystem>(sys: &S, x: f64, k: Complex64) -> Result<(Complex64, Complex64, Complex64)> {
    let a = sys.matrix(x)?;
    let mut lam = (a[0][0] * a[0][0] + a[0][1] * a[1][0]).sqrt();
    if (lam - I * k).norm() > (lam + I * k).norm() {
        lam = -lam;
    }
    let ratio = |l: Complex64| {
        if a[0][1].norm() >= (l + a[0][0]).norm() {
            (l - a[0][0]) / a[0][1]
        } else {
            a[1][0] / (l + a[0][0])
        }
    };
    Ok((ratio(lam), ratio(-lam), lam))
}

impl EdgeBasis {
    fn at<S: LinearSystem>(sys: &S, x: f64, k: Complex64) -> Result<Self> {
        let (c, d, lam) = eigen_ratios(sys, x, k)?;
        let dc = d - c;
        if dc.norm() <= 1e-14 * (c.norm() + d.norm()) || dc.norm() == 0.0 || lam.norm() == 0.0 {
            return Err(Error::SingularBasis);
        }
        let h = 1e-3 * x.abs().max(1.0);
        let (cp, dp, _) = eigen_ratios(sys, x + h, k)?;
        let (cm, dm, _) = eigen_ratios(sys, x - h, k)?;
        let c_prime = (cp - cm) / (2.0 * h);
        let d_prime = (dp - dm) / (2.0 * h);
        let alpha = -c_prime / (dc * 2.0 * lam);
        let beta = -d_prime / (dc * 2.0 * lam);
        Ok(Self { c, d, alpha, beta })
    }

    fn plus_wave(&self) -> (Complex64, Complex64) {
        (1.0 + self.alpha, self.c + self.alpha * self.d)
    }

    fn minus_wave(&self) -> (Complex64, Complex64) {
        (1.0 + self.beta, self.d + self.beta * self.c)
    }

    /// Split (psi1, psi2) exp(log_scale) at x into a e^{ikx} + b e^{-ikx} waves.
    fn decompose(&self, psi: (Complex64, Complex64), log_scale: Complex64, x: f64, k: Complex64) -> Result<(Complex64, Complex64)> {
        let dc = self.d - self.c;
        let p = (self.d * psi.0 - psi.1) / dc;
        let q = (psi.1 - self.c * psi.0) / dc;
        let det = 1.0 - self.alpha * self.beta;
        if det.norm() < 1e-12 {
            return Err(Error::SingularBasis);
        }
        let a = (p - self.beta * q) / det;
        let b = (q - self.alpha * p) / det;
        Ok((a * (log_scale - I * k * x).exp(), b * (log_scale + I * k * x).exp()))
    }
}

fn rescale(col: &mut [Complex64], log_scale: &mut Complex64) -> bool {
    let sup = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if sup > RENORM_AT {
        for z in col.iter_mut() {
            *z /= sup;
        }
        *log_scale += sup.ln();
        true
    } else {
        false
    }
}

/// Integrate the two channel solutions from -L to +L and decompose them
/// in the plane-wave basis on the right.
pub fn integrate_pair<S: LinearSystem>(
    sys: &S,
    ch: &AsymptoticChannel,
    half_width: f64,
    cfg: &IntegratorConfig,
) -> Result<PairOutcome> {
    let l = half_width;
    let one = Complex64::new(1.0, 0.0);
    let left = EdgeBasis::at(sys, -l, ch.k_minus)?;
    let (p0, p1) = left.plus_wave();
    let (m0, m1) = left.minus_wave();
    let y0 = [p0, p1, m0, m1];
    // the plane-wave factors at -L live in the log scales
    let mut scales = [I * ch.k_minus * (-l), -I * ch.k_minus * (-l)];
    let f = |x: f64, y: &[Complex64; 4]| -> Result<[Complex64; 4]> {
        let a = sys.matrix(x)?;
        let (p, q) = mat_vec(&a, y[0], y[1]);
        let (r, s) = mat_vec(&a, y[2], y[3]);
        Ok([p, q, r, s])
    };
    let det = |y: &[Complex64; 4]| y[0] * y[3] - y[2] * y[1];
    let w0 = det(&y0);
    let mut drift = 0.0f64;
    let mut stepper = Dopri5::new(&f, -l, y0, 1e-2, cfg.tolerances())?;
    {
        let scales = &mut scales;
        let drift = &mut drift;
        let mut on_step = |_x: f64, y: &mut [Complex64; 4]| {
            // the initial phases cancel in the sum, leaving the rescalings
            let w = det(y) * (scales[0] + scales[1]).exp();
            *drift = drift.max(((w - w0) / w0).norm());
            let (left, right) = y.split_at_mut(2);
            let a = rescale(left, &mut scales[0]);
            let b = rescale(right, &mut scales[1]);
            a || b
        };
        stepper.advance_to(&f, l, &mut on_step)?;
    }
    let y = stepper.y;
    let right = EdgeBasis::at(sys, l, ch.k_plus)?;
    let (a1p, b1p) = right.decompose((y[0], y[1]), scales[0], l, ch.k_plus)?;
    let (a2p, b2p) = right.decompose((y[2], y[3]), scales[1], l, ch.k_plus)?;
    let z = Complex64::new(0.0, 0.0);
    Ok(PairOutcome {
        coefficients: SolutionCoefficients {
            a1_minus: one,
            a1_plus: a1p,
            b1_minus: z,
            b1_plus: b1p,
            a2_minus: z,
            a2_plus: a2p,
            b2_minus: one,
            b2_plus: b2p,
        },
        wronskian_drift: drift,
        error_estimate: stepper.error_sum,
        steps: stepper.steps,
    })
}

/// Right-hand coefficients (a2+, b2+) of the solution that is a pure
/// e^{-ik-x}(1, D-) wave on the left. b2+ vanishes at bound states.
pub fn integrate_left_solution<S: LinearSystem>(
    sys: &S,
    ch: &AsymptoticChannel,
    half_width: f64,
    cfg: &IntegratorConfig,
) -> Result<(Complex64, Complex64)> {
    let l = half_width;
    let (m0, m1) = EdgeBasis::at(sys, -l, ch.k_minus)?.minus_wave();
    let y0 = [m0, m1];
    let mut scale = -I * ch.k_minus * (-l);
    let f = |x: f64, y: &[Complex64; 2]| -> Result<[Complex64; 2]> {
        let a = sys.matrix(x)?;
        let (p, q) = mat_vec(&a, y[0], y[1]);
        Ok([p, q])
    };
    let mut stepper = Dopri5::new(&f, -l, y0, 1e-2, cfg.tolerances())?;
    stepper.advance_to(&f, l, &mut |_x, y: &mut [Complex64; 2]| rescale(y, &mut scale))?;
    EdgeBasis::at(sys, l, ch.k_plus)?.decompose((stepper.y[0], stepper.y[1]), scale, l, ch.k_plus)
}

/// Scattering run: result plus the diagnostics behind it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatterOutcome {
    pub result: ScatteringResult,
    pub channel: AsymptoticChannel,
    pub coefficients: SolutionCoefficients,
    pub wronskian_drift: f64,
    pub error_estimate: f64,
    pub half_width: f64,
    pub steps: usize,
}

fn require_propagating(ch: &AsymptoticChannel) -> Result<()> {
    for (name, k) in [("k-", ch.k_minus), ("k+", ch.k_plus)] {
        if !(k.re > 1e-12 * k.norm().max(1.0)) {
            return Err(Error::NotScattering(format!("{name} = {k} carries no propagating wave")));
        }
    }
    Ok(())
}

/// Polynomial extrapolation to h = 0 through (h_j, v_j) (Neville).
fn extrapolate(h: &[f64], v: &[Complex64]) -> Complex64 {
    let mut p = v.to_vec();
    let n = p.len();
    for level in 1..n {
        for j in 0..n - level {
            let (hj, hk) = (h[j], h[j + level]);
            p[j] = (p[j] * hk - p[j + 1] * hj) / (hk - hj);
        }
    }
    p[0]
}

fn run_with_boxes<S: LinearSystem>(
    sys: &S,
    ch: &AsymptoticChannel,
    tail: Tail,
    cfg: &IntegratorConfig,
) -> Result<ScatterOutcome> {
    cfg.validate()?;
    let base = cfg.half_width.unwrap_or_else(|| tail.default_half_width());
    let levels = if cfg.richardson && matches!(tail, Tail::Algebraic { .. }) { cfg.richardson_levels } else { 1 };
    let mut outcomes = Vec::with_capacity(levels);
    for j in 0..levels {
        outcomes.push(integrate_pair(sys, ch, base * f64::from(1u32 << j), cfg)?);
    }
    let mut coefficients = outcomes[0].coefficients;
    if levels > 1 {
        let h: Vec<f64> = (0..levels).map(|j| 1.0 / (base * f64::from(1u32 << j))).collect();
        let pick = |g: fn(&SolutionCoefficients) -> Complex64| -> Complex64 {
            let v: Vec<Complex64> = outcomes.iter().map(|o| g(&o.coefficients)).collect();
            extrapolate(&h, &v)
        };
        coefficients.a1_plus = pick(|c| c.a1_plus);
        coefficients.b1_plus = pick(|c| c.b1_plus);
        coefficients.a2_plus = pick(|c| c.a2_plus);
        coefficients.b2_plus = pick(|c| c.b2_plus);
    }
    let result = formalism::coefficients_to_scattering_with(&coefficients, ch, cfg.pt_tol)?;
    Ok(ScatterOutcome {
        result,
        channel: *ch,
        coefficients,
        wronskian_drift: outcomes.iter().map(|o| o.wronskian_drift).fold(0.0, f64::max),
        error_estimate: outcomes.iter().map(|o| o.error_estimate).fold(0.0, f64::max),
        half_width: base,
        steps: outcomes.iter().map(|o| o.steps).sum(),
    })
}

/// Coefficients of the two channel solutions of the Dirac system.
pub fn integrate_two_solutions(model: &PotentialModel, params: PhysicalParams, cfg: &IntegratorConfig) -> Result<PairOutcome> {
    cfg.validate()?;
    let ch = formalism::channel(params, &model.limits)?;
    require_propagating(&ch)?;
    let sys = DiracSystem { model, m: params.m, energy: params.energy.into() };
    let l = cfg.half_width.unwrap_or_else(|| model.default_half_width());
    integrate_pair(&sys, &ch, l, cfg)
}

/// T and R of the Dirac problem at one energy.
pub fn scatter(model: &PotentialModel, params: PhysicalParams, cfg: &IntegratorConfig) -> Result<ScatterOutcome> {
    let ch = formalism::channel(params, &model.limits)?;
    require_propagating(&ch)?;
    let sys = DiracSystem { model, m: params.m, energy: params.energy.into() };
    run_with_boxes(&sys, &ch, model.tail, cfg)
}

/// Channel of a reduced problem at effective energy `eps`.
pub fn schrodinger_channel(u: &EffectivePotential, m: f64, eps: Complex64) -> AsymptoticChannel {
    let k = |lim: Complex64| formalism::branch_sqrt(2.0 * m * (eps - lim));
    AsymptoticChannel::schrodinger(k(u.limits.0), k(u.limits.1))
}

/// T and R of a reduced Schrödinger-like problem.
pub fn scatter_schrodinger(u: &EffectivePotential, m: f64, eps: f64, cfg: &IntegratorConfig) -> Result<ScatterOutcome> {
    let ch = schrodinger_channel(u, m, eps.into());
    require_propagating(&ch)?;
    let sys = SchrodingerSystem { u, m, eps: eps.into() };
    run_with_boxes(&sys, &ch, u.tail, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    /// V = S: equation for psi1, energy-dependent strength (E + m)/m.
    SpinSym,
    /// V = -S: equation for psi2, strength (E - m)/m.
    PseudoSpinSym,
    /// Pure P: U_j = (P^2 +- P')/(2m), upper sign for j = 1.
    PseudoScalar(u8),
    /// Pure S: U_j = ((m+S)^2 - m^2 -+ S')/(2m), upper sign for j = 1.
    ScalarRep(u8),
}

/// Reduced potential and effective energy eps = (E^2 - m^2)/(2m).
pub fn reduce_schrodinger(
    model: &PotentialModel,
    params: PhysicalParams,
    which: Reduction,
) -> Result<(EffectivePotential, f64)> {
    let m = params.m;
    let e = params.energy;
    let eps = (e * e - m * m) / (2.0 * m);
    let class = model.class();
    let lim = model.limits;
    let owned = model.clone();
    let u = match which {
        Reduction::SpinSym => {
            if !matches!(class, PotentialClass::SpinSym | PotentialClass::Zero) {
                return Err(Error::WrongPotentialClass("spin-symmetric"));
            }
            let g = (e + m) / m;
            EffectivePotential::new("spin-symmetric", (g * lim.v_minus, g * lim.v_plus), model.tail, move |x| {
                Ok(g * owned.eval(x)?.v)
            })
        }
        Reduction::PseudoSpinSym => {
            if !matches!(class, PotentialClass::PseudoSpinSym | PotentialClass::Zero) {
                return Err(Error::WrongPotentialClass("pseudo-spin-symmetric"));
            }
            let g = (e - m) / m;
            EffectivePotential::new("pseudo-spin-symmetric", (g * lim.s_minus, g * lim.s_plus), model.tail, move |x| {
                Ok(g * owned.eval(x)?.s)
            })
        }
        Reduction::PseudoScalar(j) => {
            if !matches!(class, PotentialClass::PurePseudoscalar | PotentialClass::Zero) {
                return Err(Error::WrongPotentialClass("pseudoscalar"));
            }
            let sign = partner_sign(j)?;
            let at = |p: Complex64| p * p / (2.0 * m);
            EffectivePotential::new(format!("U{j}"), (at(lim.p_minus), at(lim.p_plus)), model.tail, move |x| {
                let p = owned.eval(x)?.p;
                let dp = owned.derivative(x)?.p;
                Ok((p * p + sign * dp) / (2.0 * m))
            })
        }
        Reduction::ScalarRep(j) => {
            if !matches!(class, PotentialClass::PureScalar | PotentialClass::Zero) {
                return Err(Error::WrongPotentialClass("scalar"));
            }
            let sign = -partner_sign(j)?;
            let at = |s: Complex64| ((m + s) * (m + s) - m * m) / (2.0 * m);
            EffectivePotential::new(format!("U{j}"), (at(lim.s_minus), at(lim.s_plus)), model.tail, move |x| {
                let s = owned.eval(x)?.s;
                let ds = owned.derivative(x)?.s;
                Ok(((m + s) * (m + s) - m * m + sign * ds) / (2.0 * m))
            })
        }
    };
    Ok((u, eps))
}

fn partner_sign(j: u8) -> Result<f64> {
    match j {
        1 => Ok(1.0),
        2 => Ok(-1.0),
        _ => Err(Error::InvalidParameter(format!("partner index must be 1 or 2, got {j}"))),
    }
}
