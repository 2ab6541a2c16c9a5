//! Discrete spectra: shooting on reduced equations, poles of T on the
//! imaginary k axis, and classification of threshold (k = 0) states.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{self, ZeroModeRegime};
use crate::error::{Error, Result};
use crate::formalism::{branch_sqrt, AsymptoticChannel, SpinorState, I};
use crate::integrator::{
    integrate_left_solution, reduce_schrodinger, DiracSystem, Dopri5, EffectivePotential, IntegratorConfig, LinearSystem,
    Reduction, SchrodingerSystem,
};
use crate::potentials::{ModelKind, PotentialClass, PotentialModel, SymmetryMode};
use crate::quadrature::simpson;
use crate::formalism::PhysicalParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StateKind {
    Bound,
    ZeroMode,
    HalfBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Method {
    Analytic,
    Shoot,
    Pole,
    /// Found by both shooting and pole search.
    ShootPole,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStateRecord {
    /// Dirac energy.
    pub energy: f64,
    /// Decay momentum, k = i kappa.
    pub kappa: f64,
    /// (E^2 - m^2)/(2m).
    pub eps_eff: f64,
    /// Imaginary part left on the eigenvalue after complex polishing.
    pub eigen_im: f64,
    pub spinor: Vec<SpinorState>,
    /// Simpson norm of the stored spinor; None when unavailable.
    pub norm: Option<f64>,
    pub node_info: String,
    pub kind: StateKind,
    pub method: Method,
    /// Reduced partner equation the state came from, if any.
    pub partner: Option<u8>,
}

/// How a solution psi of a reduced equation maps back to a spinor.
#[derive(Debug, Clone)]
pub enum SpinorMap {
    /// Plain Schrödinger problem: psi1 = psi, psi2 = 0.
    Plain,
    /// psi is psi1 of a pure pseudoscalar model: psi2 = -i(psi' - P psi)/(E + m).
    PseudoscalarUpper(PotentialModel),
    /// psi is psi2 of a pure pseudoscalar model: psi1 = i(psi' + P psi)/(m - E).
    PseudoscalarLower(PotentialModel),
    /// Scalar model, partner representation: psi2 = (psi' + (m+S) psi)/E.
    ScalarUpper(PotentialModel),
    /// Scalar model, partner representation: psi1 = (-psi' + (m+S) psi)/E.
    ScalarLower(PotentialModel),
}

impl SpinorMap {
    /// Dirac energy belonging to the reduced eigenvalue eps.
    /// Plain problems have no Dirac energy and report eps itself.
    fn energy(&self, m: f64, eps: f64) -> Result<f64> {
        if matches!(self, SpinorMap::Plain) {
            return Ok(eps);
        }
        let e2 = m * m + 2.0 * m * eps;
        if e2 < 0.0 {
            return Err(Error::NonConvergence(format!("eps = {eps} has no real Dirac energy")));
        }
        Ok(match self {
            // the lower pseudoscalar component carries the E = -m zero mode
            SpinorMap::PseudoscalarLower(_) if eps.abs() < 1e-6 => -e2.sqrt(),
            _ => e2.sqrt(),
        })
    }

    fn spinor(&self, x: f64, psi: Complex64, dpsi: Complex64, e: f64) -> Result<SpinorState> {
        Ok(match self {
            SpinorMap::Plain => SpinorState::new(x, psi, Complex64::new(0.0, 0.0)),
            SpinorMap::PseudoscalarUpper(model) => {
                let p = model.eval(x)?.p;
                SpinorState::new(x, psi, -I * (dpsi - p * psi) / (e + model.m))
            }
            SpinorMap::PseudoscalarLower(model) => {
                let p = model.eval(x)?.p;
                SpinorState::new(x, I * (dpsi + p * psi) / (model.m - e), psi)
            }
            SpinorMap::ScalarUpper(model) => {
                let w = model.m + model.eval(x)?.s;
                SpinorState::new(x, psi, (dpsi + w * psi) / e)
            }
            SpinorMap::ScalarLower(model) => {
                let w = model.m + model.eval(x)?.s;
                SpinorState::new(x, (-dpsi + w * psi) / e, psi)
            }
        })
    }
}

/// A reduced Schrödinger-like eigenproblem with its spinor reconstruction.
#[derive(Debug, Clone)]
pub struct ReducedProblem {
    pub u: EffectivePotential,
    pub m: f64,
    pub map: SpinorMap,
    pub partner: Option<u8>,
}

impl ReducedProblem {
    pub fn plain(u: EffectivePotential, m: f64) -> Self {
        Self { u, m, map: SpinorMap::Plain, partner: None }
    }

    /// Partner j of a pure pseudoscalar or pure scalar model.
    pub fn partner(model: &PotentialModel, j: u8) -> Result<Self> {
        let params = PhysicalParams::new(model.m, model.m)?;
        let (reduction, map) = match (model.class(), j) {
            (PotentialClass::PurePseudoscalar, 1) => (Reduction::PseudoScalar(1), SpinorMap::PseudoscalarUpper(model.clone())),
            (PotentialClass::PurePseudoscalar, 2) => (Reduction::PseudoScalar(2), SpinorMap::PseudoscalarLower(model.clone())),
            (PotentialClass::PureScalar, 1) => (Reduction::ScalarRep(1), SpinorMap::ScalarUpper(model.clone())),
            (PotentialClass::PureScalar, 2) => (Reduction::ScalarRep(2), SpinorMap::ScalarLower(model.clone())),
            (PotentialClass::PurePseudoscalar | PotentialClass::PureScalar, _) => {
                return Err(Error::InvalidParameter(format!("partner index must be 1 or 2, got {j}")))
            }
            _ => return Err(Error::WrongPotentialClass("pure pseudoscalar or pure scalar")),
        };
        let (u, _) = reduce_schrodinger(model, params, reduction)?;
        Ok(Self { u, m: model.m, map, partner: Some(j) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShootConfig {
    /// Box half-width; None picks it from the tail class.
    pub half_width: Option<f64>,
    pub scan_points: usize,
    pub grid_points: usize,
    pub max_iterations: usize,
    /// |Im| of the normalized matching function above which a root is spurious.
    pub im_reject: f64,
    pub integrator: IntegratorConfig,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            half_width: None,
            scan_points: 200,
            grid_points: analytic::GRID_POINTS,
            max_iterations: 200,
            im_reject: 1e-6,
            integrator: IntegratorConfig::default(),
        }
    }
}

impl ShootConfig {
    fn validate(&self) -> Result<()> {
        if self.scan_points < 2 || self.grid_points < 3 || self.grid_points % 2 == 0 {
            return Err(Error::InvalidParameter("scan needs >= 2 points and the grid an odd count >= 3".into()));
        }
        self.integrator.validate()
    }
}

/// Solution values (psi, psi') or (psi1, psi2) with a real log scale.
#[derive(Debug, Clone, Copy)]
struct Sample {
    y: [Complex64; 2],
    log_scale: f64,
}

impl Sample {
    fn value(&self, shift: f64) -> [Complex64; 2] {
        let f = (self.log_scale - shift).exp();
        [self.y[0] * f, self.y[1] * f]
    }
}

/// Integrate from x0 through the targets in order, recording each.
fn sweep<S: LinearSystem>(sys: &S, x0: f64, y0: [Complex64; 2], targets: &[f64], cfg: &IntegratorConfig) -> Result<Vec<Sample>> {
    let f = |x: f64, y: &[Complex64; 2]| -> Result<[Complex64; 2]> {
        let a = sys.matrix(x)?;
        Ok([a[0][0] * y[0] + a[0][1] * y[1], a[1][0] * y[0] + a[1][1] * y[1]])
    };
    let mut stepper = Dopri5::new(&f, x0, y0, 1e-2, cfg.tolerances())?;
    let mut log_scale = 0.0;
    let mut out = Vec::with_capacity(targets.len());
    for &x in targets {
        stepper.advance_to(&f, x, &mut |_, y: &mut [Complex64; 2]| {
            let sup = y[0].norm().max(y[1].norm());
            if sup > 1e100 {
                y[0] /= sup;
                y[1] /= sup;
                log_scale += sup.ln();
                true
            } else {
                false
            }
        })?;
        out.push(Sample { y: stepper.y, log_scale });
    }
    Ok(out)
}

/// Decaying data from both edges, matched at x = 0 and sampled on the grid.
fn two_sided_samples<S: LinearSystem>(
    sys: &S,
    left: [Complex64; 2],
    right: [Complex64; 2],
    xs: &[f64],
    cfg: &IntegratorConfig,
) -> Result<Vec<[Complex64; 2]>> {
    let mid = xs.len() / 2;
    let l = xs[xs.len() - 1];
    let lefts = sweep(sys, -l, left, &xs[..=mid], cfg)?;
    let rev: Vec<f64> = xs[mid..].iter().rev().copied().collect();
    let mut rights = sweep(sys, l, right, &rev, cfg)?;
    rights.reverse();
    let lm = lefts[mid].value(lefts[mid].log_scale);
    let rm = rights[0].value(rights[0].log_scale);
    let j = if rm[0].norm() >= rm[1].norm() { 0 } else { 1 };
    if rm[j].norm() == 0.0 {
        return Err(Error::SingularBasis);
    }
    let factor = lm[j] / rm[j];
    let mut out: Vec<[Complex64; 2]> = lefts.iter().map(|s| s.value(lefts[mid].log_scale)).collect();
    for s in rights.iter().skip(1) {
        let v = s.value(rights[0].log_scale);
        out.push([v[0] * factor, v[1] * factor]);
    }
    Ok(out)
}

fn half_width_for(tail_default: f64, cfg_half: Option<f64>) -> f64 {
    cfg_half.unwrap_or(tail_default)
}

/// Decay rates on both sides at effective energy eps.
fn reduced_kappas(problem: &ReducedProblem, eps: Complex64) -> (Complex64, Complex64) {
    let k = |lim: Complex64| branch_sqrt(2.0 * problem.m * (lim - eps));
    (k(problem.u.limits.0), k(problem.u.limits.1))
}

/// Matching determinant at x = 0, both raw (analytic in eps, up to a fixed
/// scale) and normalized to moduli of the two solutions.
fn matching(problem: &ReducedProblem, eps: Complex64, l: f64, cfg: &IntegratorConfig) -> Result<(Complex64, f64, Complex64)> {
    let sys = SchrodingerSystem { u: &problem.u, m: problem.m, eps };
    let (km, kp) = reduced_kappas(problem, eps);
    let one = Complex64::new(1.0, 0.0);
    let a = sweep(&sys, -l, [one, km], &[0.0], cfg)?[0];
    let b = sweep(&sys, l, [one, -kp], &[0.0], cfg)?[0];
    let d = a.y[1] * b.y[0] - a.y[0] * b.y[1];
    let size = (a.y[0].norm() + a.y[1].norm()) * (b.y[0].norm() + b.y[1].norm());
    Ok((d, a.log_scale + b.log_scale, d / size))
}

/// Complex secant on an analytic function, from two starting points.
fn secant<F>(mut f: F, mut x0: Complex64, mut x1: Complex64, tol: f64, max_iter: usize) -> Result<Complex64>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    for _ in 0..max_iter {
        let df = f1 - f0;
        if df.norm() == 0.0 {
            return Ok(x1);
        }
        let x2 = x1 - f1 * (x1 - x0) / df;
        if !x2.is_finite() {
            break;
        }
        if (x2 - x1).norm() <= tol {
            return Ok(x2);
        }
        (x0, f0) = (x1, f1);
        x1 = x2;
        f1 = f(x1)?;
    }
    Err(Error::NonConvergence(format!("secant did not settle near {x1}")))
}

fn describe_nodes(values: &[Complex64]) -> String {
    let changes = values.windows(2).filter(|w| w[0].re.signum() != w[1].re.signum() && w[0].re != 0.0).count();
    let min = values.iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    format!("{changes} sign changes of Re psi on the grid; min |psi| = {min:.3e}")
}

fn normalize(states: &mut [SpinorState], h: f64) -> f64 {
    let dens: Vec<f64> = states.iter().map(SpinorState::density).collect();
    let n = simpson(h, &dens);
    let s = 1.0 / n.sqrt();
    // phase: the largest upper or lower sample becomes real and positive
    let pick = states
        .iter()
        .flat_map(|st| [st.psi1, st.psi2])
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = if pick.norm() > 0.0 { pick.conj() / pick.norm() } else { Complex64::new(1.0, 0.0) };
    for st in states.iter_mut() {
        st.psi1 *= s * phase;
        st.psi2 *= s * phase;
    }
    let dens: Vec<f64> = states.iter().map(SpinorState::density).collect();
    simpson(h, &dens)
}

/// Bound states of a reduced problem with eps in the bracket.
pub fn shoot(problem: &ReducedProblem, bracket: (f64, f64), cfg: &ShootConfig) -> Result<Vec<BoundStateRecord>> {
    cfg.validate()?;
    let threshold = problem.u.threshold();
    let lo = bracket.0;
    let hi = bracket.1.min(threshold - 1e-9 * threshold.abs().max(1.0));
    if !(lo < hi) {
        return Err(Error::NoBracket);
    }
    let l = half_width_for(problem.u.tail.default_half_width(), cfg.half_width);
    let icfg = &cfg.integrator;
    let n = cfg.scan_points;
    let eps_at = |i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    // sign changes only need a coarse solve; refinement uses the full config
    let scan_cfg = IntegratorConfig { rtol: icfg.rtol.max(1e-8), atol: icfg.atol.max(1e-10), ..*icfg };
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        values.push(matching(problem, eps_at(i).into(), l, &scan_cfg)?.2);
    }

    let mut found: Vec<(f64, f64)> = Vec::new();
    for i in 0..n - 1 {
        let (fa, fb) = (values[i].re, values[i + 1].re);
        if fa == 0.0 || fa.signum() == fb.signum() {
            continue;
        }
        let (mut a, mut b) = (eps_at(i), eps_at(i + 1));
        let mut ga = matching(problem, a.into(), l, icfg)?.2.re;
        for _ in 0..cfg.max_iterations {
            let c = 0.5 * (a + b);
            // the secant polish below finishes the job
            if (b - a) <= 1e-8 * c.abs().max(1.0) {
                break;
            }
            let gc = matching(problem, c.into(), l, icfg)?.2.re;
            if gc.signum() == ga.signum() {
                a = c;
                ga = gc;
            } else {
                b = c;
            }
        }
        let root = 0.5 * (a + b);
        let (_, scale_ref, check) = matching(problem, root.into(), l, icfg)?;
        if check.im.abs() > cfg.im_reject {
            continue;
        }
        // complex polish on the analytic determinant
        let f = |e: Complex64| -> Result<Complex64> {
            let (d, s, _) = matching(problem, e, l, icfg)?;
            Ok(d * (s - scale_ref).exp())
        };
        let step = 1e-7 * root.abs().max(1.0);
        let polished = secant(f, root.into(), (root + step).into(), 1e-14 * root.abs().max(1.0), cfg.max_iterations)
            .unwrap_or(root.into());
        let value = if (polished.re - root).abs() < 1e-6 * root.abs().max(1.0) { polished } else { root.into() };
        if !found.iter().any(|(e, _)| (e - value.re).abs() < 1e-9 * value.re.abs().max(1.0)) {
            found.push((value.re, value.im));
        }
    }

    let xs = analytic::grid(l, cfg.grid_points);
    let h = xs[1] - xs[0];
    let mut out = Vec::with_capacity(found.len());
    for (eps, eps_im) in found {
        out.push(reduced_record(problem, eps, eps_im, &xs, h, icfg)?);
    }
    Ok(out)
}

fn reduced_record(
    problem: &ReducedProblem,
    eps: f64,
    eps_im: f64,
    xs: &[f64],
    h: f64,
    cfg: &IntegratorConfig,
) -> Result<BoundStateRecord> {
    let sys = SchrodingerSystem { u: &problem.u, m: problem.m, eps: eps.into() };
    let (km, kp) = reduced_kappas(problem, eps.into());
    let one = Complex64::new(1.0, 0.0);
    let samples = two_sided_samples(&sys, [one, km], [one, -kp], xs, cfg)?;
    let energy = problem.map.energy(problem.m, eps)?;
    let mut spinor = Vec::with_capacity(xs.len());
    for (x, s) in xs.iter().zip(&samples) {
        spinor.push(problem.map.spinor(*x, s[0], s[1], energy)?);
    }
    let node_info = describe_nodes(&samples.iter().map(|s| s[0]).collect::<Vec<_>>());
    let norm = normalize(&mut spinor, h);
    let kind = if eps.abs() < 1e-6 && matches!(problem.map, SpinorMap::PseudoscalarUpper(_) | SpinorMap::PseudoscalarLower(_)) {
        StateKind::ZeroMode
    } else {
        StateKind::Bound
    };
    Ok(BoundStateRecord {
        energy,
        kappa: km.re,
        eps_eff: eps,
        eigen_im: eps_im,
        spinor,
        norm: Some(norm),
        node_info,
        kind,
        method: Method::Shoot,
        partner: problem.partner,
    })
}

/// Channel at complex energy with k = i kappa on the left.
fn pole_channel(model: &PotentialModel, kappa: Complex64) -> Result<(Complex64, AsymptoticChannel)> {
    let lim = model.limits;
    let m = model.m;
    let gap = (m + lim.s_minus) * (m + lim.s_minus) + lim.p_minus * lim.p_minus - kappa * kappa;
    let energy = lim.v_minus + gap.sqrt();
    let kappa_plus = branch_sqrt((m + lim.s_plus) * (m + lim.s_plus) + lim.p_plus * lim.p_plus - (energy - lim.v_plus).powi(2));
    let (km, kp) = (I * kappa, I * kappa_plus);
    let ratio = |k: Complex64, v: Complex64, s: Complex64, p: Complex64| -> Result<(Complex64, Complex64)> {
        let den = m + s + energy - v;
        if den.norm() < 1e-14 {
            return Err(Error::DegenerateChannel { side: "pole" });
        }
        Ok(((k + I * p) / den, (-k + I * p) / den))
    };
    let (c_minus, d_minus) = ratio(km, lim.v_minus, lim.s_minus, lim.p_minus)?;
    let (c_plus, d_plus) = ratio(kp, lim.v_plus, lim.s_plus, lim.p_plus)?;
    Ok((energy, AsymptoticChannel { k_minus: km, k_plus: kp, c_minus, c_plus, d_minus, d_plus }))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoleConfig {
    pub half_width: Option<f64>,
    pub scan_points: usize,
    pub grid_points: usize,
    /// Largest |Im kappa| accepted as a real pole.
    pub im_accept: f64,
    pub integrator: IntegratorConfig,
}

impl Default for PoleConfig {
    fn default() -> Self {
        Self {
            half_width: None,
            scan_points: 120,
            grid_points: analytic::GRID_POINTS,
            im_accept: 1e-6,
            integrator: IntegratorConfig::default(),
        }
    }
}

/// Coefficient b2+ of the left-decaying solution; it vanishes at poles of T.
fn pole_function(model: &PotentialModel, kappa: Complex64, l: f64, cfg: &IntegratorConfig) -> Result<(Complex64, f64)> {
    let (energy, ch) = pole_channel(model, kappa)?;
    let sys = DiracSystem { model, m: model.m, energy };
    let (a, b) = integrate_left_solution(&sys, &ch, l, cfg)?;
    Ok((b, b.norm() / (a.norm() + b.norm())))
}

/// Poles of T_LR at k = i kappa, kappa in the bracket.
pub fn transmission_poles(model: &PotentialModel, kappa_bracket: (f64, f64), cfg: &PoleConfig) -> Result<Vec<BoundStateRecord>> {
    cfg.integrator.validate()?;
    let (lo, hi) = kappa_bracket;
    if !(lo < hi) || cfg.scan_points < 3 {
        return Err(Error::NoBracket);
    }
    let l = half_width_for(model.default_half_width(), cfg.half_width);
    let icfg = &cfg.integrator;
    let n = cfg.scan_points;
    let kappa_at = |i: usize| lo + (hi - lo) * i as f64 / (n - 1) as f64;
    let mut scan = Vec::with_capacity(n);
    for i in 0..n {
        // thresholds and channel degeneracies inside the bracket are skipped
        scan.push(pole_function(model, kappa_at(i).into(), l, icfg).map(|v| v.1).unwrap_or(f64::INFINITY));
    }
    let mut found: Vec<Complex64> = Vec::new();
    for i in 0..n {
        let left = if i == 0 { f64::INFINITY } else { scan[i - 1] };
        let right = if i + 1 == n { f64::INFINITY } else { scan[i + 1] };
        if !(scan[i] <= left && scan[i] <= right && scan[i] < 0.5) {
            continue;
        }
        let k0 = kappa_at(i);
        let step = 0.25 * (hi - lo) / (n - 1) as f64;
        let Ok(root) = secant(|k| Ok(pole_function(model, k, l, icfg)?.0), k0.into(), (k0 + step).into(), 1e-13 * k0.abs().max(1.0), 100)
        else {
            continue;
        };
        if root.im.abs() > cfg.im_accept || root.re <= lo - step || root.re >= hi + step || root.re <= 0.0 {
            continue;
        }
        let Ok((_, size)) = pole_function(model, root, l, icfg) else { continue };
        if size > 1e-6 {
            continue;
        }
        if !found.iter().any(|r| (r - root).norm() < 1e-8 * root.norm().max(1.0)) {
            found.push(root);
        }
    }
    found.sort_by(|a, b| a.re.total_cmp(&b.re));

    let xs = analytic::grid(l, cfg.grid_points);
    let h = xs[1] - xs[0];
    let mut out = Vec::with_capacity(found.len());
    for kappa in found {
        let (energy, ch) = pole_channel(model, kappa)?;
        let sys = DiracSystem { model, m: model.m, energy };
        let one = Complex64::new(1.0, 0.0);
        let samples = two_sided_samples(&sys, [one, ch.d_minus], [one, ch.c_plus], &xs, icfg)?;
        let mut spinor: Vec<SpinorState> = xs.iter().zip(&samples).map(|(x, s)| SpinorState::new(*x, s[0], s[1])).collect();
        let norm = normalize(&mut spinor, h);
        let m = model.m;
        let node_info = describe_nodes(&spinor.iter().map(|s| s.psi1).collect::<Vec<_>>());
        let e = energy.re;
        out.push(BoundStateRecord {
            energy: e,
            kappa: kappa.re,
            eps_eff: (e * e - m * m) / (2.0 * m),
            eigen_im: energy.im.abs().max(kappa.im.abs()),
            spinor,
            norm: Some(norm),
            node_info,
            kind: if (e.abs() - m).abs() < 1e-9 { StateKind::ZeroMode } else { StateKind::Bound },
            method: Method::Pole,
            partner: None,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ZeroEnergyClass {
    ZeroMode {
        energy: f64,
        normalizable: bool,
        regime: Option<ZeroModeRegime>,
    },
    HalfBound {
        energy: f64,
    },
    None,
}

/// Nature of the k = 0 (or E = +-m) solution.
pub fn zero_energy_classify(model: &PotentialModel, cfg: &IntegratorConfig) -> Result<ZeroEnergyClass> {
    let m = model.m;
    match (&model.kind, model.class()) {
        (_, PotentialClass::Zero) => return Ok(ZeroEnergyClass::None),
        (ModelKind::Centrifugal { c_prime, mode }, _) => {
            let report = analytic::centrifugal_zero_mode(*c_prime, m, model.eps)?;
            let energy = if *mode == SymmetryMode::SpinSym { m } else { -m };
            return Ok(match report.regime {
                ZeroModeRegime::Normalizable | ZeroModeRegime::Ambiguous => {
                    ZeroEnergyClass::ZeroMode { energy, normalizable: report.bound_exists, regime: Some(report.regime) }
                }
                _ => ZeroEnergyClass::None,
            });
        }
        (_, PotentialClass::PurePseudoscalar) => {
            // psi2 = 0, psi1 = exp(int P) at E = m, or the mirror at E = -m
            let (pm, pp) = (model.limits.p_minus.re, model.limits.p_plus.re);
            if pm > 0.0 && pp < 0.0 {
                return Ok(ZeroEnergyClass::ZeroMode { energy: m, normalizable: true, regime: None });
            }
            if pm < 0.0 && pp > 0.0 {
                return Ok(ZeroEnergyClass::ZeroMode { energy: -m, normalizable: true, regime: None });
            }
        }
        _ => {}
    }
    threshold_classify(model, cfg)
}

/// Integrate the left-bounded threshold solution and fit its growth on the right.
fn threshold_classify(model: &PotentialModel, cfg: &IntegratorConfig) -> Result<ZeroEnergyClass> {
    let lim = model.limits;
    let m = model.m;
    let gap = (m + lim.s_minus) * (m + lim.s_minus) + lim.p_minus * lim.p_minus;
    let energy = lim.v_minus + gap.sqrt();
    if energy.im.abs() > 1e-12 {
        return Err(Error::UnsupportedModel(format!("{}: complex threshold energy", model.label)));
    }
    let right_gap = (energy - lim.v_plus).powi(2) - (m + lim.s_plus).powi(2) - lim.p_plus * lim.p_plus;
    if right_gap.norm() > 1e-9 {
        return Err(Error::UnsupportedModel(format!("{}: thresholds differ on the two sides", model.label)));
    }
    let sys = DiracSystem { model, m, energy };
    let l = cfg.half_width.unwrap_or_else(|| model.default_half_width());
    let a = sys.matrix(-l)?;
    let start = if a[0][1].norm() > 0.0 { [a[0][1], -a[0][0]] } else { [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] };
    let s = sweep(&sys, -l, start, &[l, 2.0 * l], cfg)?;
    let size = |p: &Sample| p.value(s[0].log_scale).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let ratio = size(&s[1]) / size(&s[0]);
    Ok(if ratio > 1.5 {
        ZeroEnergyClass::None
    } else if ratio < 0.5 {
        ZeroEnergyClass::ZeroMode { energy: energy.re, normalizable: true, regime: None }
    } else {
        ZeroEnergyClass::HalfBound { energy: energy.re }
    })
}
