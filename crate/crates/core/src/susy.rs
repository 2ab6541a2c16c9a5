//! Partner Hamiltonians built from a superpotential W.
//!
//! Both cases use A = (sigma d/dx + W)/sqrt(2m) and B = (-sigma d/dx + W)/sqrt(2m),
//! with H1 = AB and H2 = BA up to a constant:
//!
//! * pseudoscalar: W = P, sigma = +1, U1 = (P^2 + P')/(2m), U2 = (P^2 - P')/(2m).
//!   This is the exchanged labelling relative to some of the older literature.
//! * scalar mass: W = m + S, sigma = -1, U1 = (W^2 - m^2 - S')/(2m), so that
//!   AB = H1 + m/2.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formalism::{ScatteringResult, I, PT_TOLERANCE};
use crate::integrator::EffectivePotential;
use crate::potentials::{PotentialClass, PotentialModel, Tail};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SusyKind {
    Pseudoscalar,
    ScalarMass,
}

impl SusyKind {
    pub fn sigma(self) -> f64 {
        match self {
            SusyKind::Pseudoscalar => 1.0,
            SusyKind::ScalarMass => -1.0,
        }
    }
}

/// First-order operator (sign * d/dx + W)/sqrt(2m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderOp {
    pub derivative_sign: f64,
    pub scale: f64,
}

impl FirstOrderOp {
    pub fn describe(&self) -> String {
        let s = if self.derivative_sign > 0.0 { "+" } else { "-" };
        format!("({s}d/dx + W)/{:.6}", 1.0 / self.scale)
    }
}

type Field = Arc<dyn Fn(f64) -> Result<Complex64> + Send + Sync>;

#[derive(Clone)]
pub struct SusyPair {
    pub kind: SusyKind,
    pub m: f64,
    /// Limits of W at -inf and +inf.
    pub w_limits: (Complex64, Complex64),
    pub tail: Tail,
    /// L = A and M = B in the notation above.
    pub l_op: FirstOrderOp,
    pub m_op: FirstOrderOp,
    w: Field,
    w_prime: Option<Field>,
}

impl std::fmt::Debug for SusyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SusyPair")
            .field("kind", &self.kind)
            .field("m", &self.m)
            .field("w_limits", &self.w_limits)
            .field("l_op", &self.l_op.describe())
            .field("m_op", &self.m_op.describe())
            .finish()
    }
}

const FD_STEP: f64 = 1e-4;

/// Fourth-order central difference.
fn central4<F: Fn(f64) -> Result<Complex64>>(f: F, x: f64, h: f64) -> Result<Complex64> {
    Ok((f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h))
}

impl SusyPair {
    /// Pair from an explicit superpotential; w_prime None means finite differences.
    pub fn from_superpotential<W>(kind: SusyKind, m: f64, w: W, w_prime: Option<Field>, w_limits: (Complex64, Complex64), tail: Tail) -> Result<Self>
    where
        W: Fn(f64) -> Result<Complex64> + Send + Sync + 'static,
    {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {m}")));
        }
        let sigma = kind.sigma();
        let scale = 1.0 / (2.0 * m).sqrt();
        Ok(Self {
            kind,
            m,
            w_limits,
            tail,
            l_op: FirstOrderOp { derivative_sign: sigma, scale },
            m_op: FirstOrderOp { derivative_sign: -sigma, scale },
            w: Arc::new(w),
            w_prime,
        })
    }

    pub fn w(&self, x: f64) -> Result<Complex64> {
        (self.w)(x)
    }

    pub fn w_prime(&self, x: f64) -> Result<Complex64> {
        match &self.w_prime {
            Some(d) => d(x),
            None => central4(|t| (self.w)(t), x, FD_STEP * x.abs().max(1.0)),
        }
    }

    /// Constant separating AB from H1 (and BA from H2).
    pub fn offset(&self) -> f64 {
        match self.kind {
            SusyKind::Pseudoscalar => 0.0,
            SusyKind::ScalarMass => 0.5 * self.m,
        }
    }

    fn u(&self, x: f64, sign: f64) -> Result<Complex64> {
        let w = self.w(x)?;
        Ok((w * w + sign * self.kind.sigma() * self.w_prime(x)?) / (2.0 * self.m) - self.offset())
    }

    pub fn u1(&self, x: f64) -> Result<Complex64> {
        self.u(x, 1.0)
    }

    pub fn u2(&self, x: f64) -> Result<Complex64> {
        self.u(x, -1.0)
    }

    fn potential(&self, j: u8) -> EffectivePotential {
        let me = self.clone();
        let at = |w: Complex64| w * w / (2.0 * self.m) - self.offset();
        let limits = (at(self.w_limits.0), at(self.w_limits.1));
        let sign = if j == 1 { 1.0 } else { -1.0 };
        EffectivePotential::new(format!("U{j}"), limits, self.tail, move |x| me.u(x, sign))
    }

    pub fn u1_potential(&self) -> EffectivePotential {
        self.potential(1)
    }

    pub fn u2_potential(&self) -> EffectivePotential {
        self.potential(2)
    }

    /// Superpotential limits in the pseudoscalar form (d/dx + P) used by the maps.
    pub fn map_limits(&self) -> (Complex64, Complex64) {
        let s = self.kind.sigma();
        (s * self.w_limits.0, s * self.w_limits.1)
    }

    /// Scattering of U1 from that of U2 at the same energy.
    pub fn map_scattering(&self, result2: &ScatteringResult, k_minus: Complex64, k_plus: Complex64) -> Result<ScatteringResult> {
        let (pm, pp) = self.map_limits();
        map_partner_scattering(result2, pm, pp, k_minus, k_plus)
    }
}

/// Pair for a pure pseudoscalar (W = P) or pure scalar (W = m + S) model.
pub fn build_pair(model: &PotentialModel, kind: SusyKind) -> Result<SusyPair> {
    let class = model.class();
    let lim = model.limits;
    let m = model.m;
    let analytic = model.has_analytic_derivative();
    match kind {
        SusyKind::Pseudoscalar => {
            if !matches!(class, PotentialClass::PurePseudoscalar | PotentialClass::Zero) {
                return Err(Error::WrongPotentialClass("pure pseudoscalar"));
            }
            let (a, b) = (model.clone(), model.clone());
            let d: Option<Field> = analytic.then(|| Arc::new(move |x| Ok(b.derivative(x)?.p)) as Field);
            SusyPair::from_superpotential(kind, m, move |x| Ok(a.eval(x)?.p), d, (lim.p_minus, lim.p_plus), model.tail)
        }
        SusyKind::ScalarMass => {
            if !matches!(class, PotentialClass::PureScalar | PotentialClass::Zero) {
                return Err(Error::WrongPotentialClass("pure scalar"));
            }
            let (a, b) = (model.clone(), model.clone());
            let d: Option<Field> = analytic.then(|| Arc::new(move |x| Ok(b.derivative(x)?.s)) as Field);
            SusyPair::from_superpotential(kind, m, move |x| Ok(m + a.eval(x)?.s), d, (m + lim.s_minus, m + lim.s_plus), model.tail)
        }
    }
}

fn nonzero(z: Complex64, scale: f64) -> Result<Complex64> {
    if z.norm() <= 1e-12 * scale.max(1.0) {
        Err(Error::SingularMap)
    } else {
        Ok(z)
    }
}

/// Partner map from U2 amplitudes to U1 amplitudes for L = (d/dx + P)/sqrt(2m).
pub fn map_partner_scattering(
    result2: &ScatteringResult,
    p_minus: Complex64,
    p_plus: Complex64,
    k_minus: Complex64,
    k_plus: Complex64,
) -> Result<ScatteringResult> {
    let scale = k_minus.norm() + k_plus.norm() + p_minus.norm() + p_plus.norm();
    let left_in = nonzero(I * k_minus + p_minus, scale)?;
    let right_in = nonzero(-I * k_plus + p_plus, scale)?;
    let left_out = -I * k_minus + p_minus;
    let right_out = I * k_plus + p_plus;
    Ok(ScatteringResult::from_amplitudes(
        right_out / left_in * result2.t_lr,
        left_out / left_in * result2.r_lr,
        left_out / right_in * result2.t_rl,
        right_out / right_in * result2.r_rl,
        result2.nu_phase,
        result2.branch,
        PT_TOLERANCE,
    ))
}

fn uniform_step(xs: &[f64]) -> Result<f64> {
    if xs.len() < 5 {
        return Err(Error::InvalidParameter("need at least 5 grid points".into()));
    }
    let h = xs[1] - xs[0];
    let uniform = xs.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs());
    if !(h > 0.0) || !uniform {
        return Err(Error::InvalidParameter("grid must be uniform and increasing".into()));
    }
    Ok(h)
}

/// Fourth-order first derivative of samples, one-sided near the ends.
pub fn derivative_samples(h: f64, f: &[Complex64]) -> Vec<Complex64> {
    let n = f.len();
    assert!(n >= 5, "need at least 5 samples");
    let d = 12.0 * h;
    (0..n)
        .map(|i| match i {
            0 => (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / d,
            1 => (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / d,
            _ if i == n - 2 => (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / d,
            _ if i == n - 1 => (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / d,
            _ => (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / d,
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationResidual {
    /// max |LM f - (H1 + c) f| / max (|f''/2m| + |(U1 + c) f|)
    pub h1: f64,
    /// same for ML against H2
    pub h2: f64,
    /// Residuals on the grid with every other point dropped.
    pub coarse: f64,
}

impl FactorizationResidual {
    pub fn max(&self) -> f64 {
        self.h1.max(self.h2)
    }
}

fn factorization_once(pair: &SusyPair, xs: &[f64], f: &[Complex64]) -> Result<(f64, f64)> {
    let h = uniform_step(xs)?;
    let n = xs.len();
    if n < 9 {
        return Err(Error::InvalidParameter("need at least 9 grid points".into()));
    }
    let sigma = pair.kind.sigma();
    let scale = pair.l_op.scale;
    let w: Vec<Complex64> = xs.iter().map(|&x| pair.w(x)).collect::<Result<_>>()?;
    let apply = |sign: f64, g: &[Complex64]| -> Vec<Complex64> {
        let dg = derivative_samples(h, g);
        g.iter().zip(&dg).zip(&w).map(|((g, dg), w)| scale * (sign * dg + w * g)).collect()
    };
    let lm = apply(sigma, &apply(-sigma, f));
    let ml = apply(-sigma, &apply(sigma, f));
    // -f''/(2m) directly from a five-point second difference
    let mut worst = (0.0f64, 0.0f64);
    let mut size = (0.0f64, 0.0f64);
    for i in 4..n - 4 {
        let d2 = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h);
        let kin = -d2 / (2.0 * pair.m);
        let c = pair.offset();
        let h1 = kin + (pair.u1(xs[i])? + c) * f[i];
        let h2 = kin + (pair.u2(xs[i])? + c) * f[i];
        worst = (worst.0.max((lm[i] - h1).norm()), worst.1.max((ml[i] - h2).norm()));
        // relative to the separate terms, since H f may vanish identically
        let (t1, t2) = (kin.norm() + ((pair.u1(xs[i])? + c) * f[i]).norm(), kin.norm() + ((pair.u2(xs[i])? + c) * f[i]).norm());
        size = (size.0.max(t1), size.1.max(t2));
    }
    Ok((worst.0 / size.0.max(f64::MIN_POSITIVE), worst.1 / size.1.max(f64::MIN_POSITIVE)))
}

/// Residual threshold below which discretization is not investigated.
pub const FACTORIZATION_TOL: f64 = 1e-6;

/// Check H1 = LM and H2 = ML on a sampled test function.
///
/// If the residual exceeds `FACTORIZATION_TOL` but still drops by about
/// 2^4 from the coarse (2h) grid, the grid is the problem, not the pair.
pub fn verify_factorization(pair: &SusyPair, xs: &[f64], f: &[Complex64]) -> Result<FactorizationResidual> {
    if xs.len() != f.len() {
        return Err(Error::InvalidParameter("grid and samples differ in length".into()));
    }
    let (h1, h2) = factorization_once(pair, xs, f)?;
    let every_other = |v: &[f64]| v.iter().step_by(2).copied().collect::<Vec<_>>();
    let coarse = if xs.len() >= 18 {
        let fc: Vec<Complex64> = f.iter().step_by(2).copied().collect();
        let (c1, c2) = factorization_once(pair, &every_other(xs), &fc)?;
        c1.max(c2)
    } else {
        f64::NAN
    };
    let fine = h1.max(h2);
    if fine > FACTORIZATION_TOL && coarse > 8.0 * fine {
        return Err(Error::GridTooCoarse { coarse, fine });
    }
    Ok(FactorizationResidual { h1, h2, coarse })
}

/// psi1 = c0 L psi2, with c0 = i sqrt(2m)/(m - E) for the pseudoscalar pair
/// and c0 = sqrt(2m)/E for the scalar pair.
pub fn intertwine_bound_state(pair: &SusyPair, xs: &[f64], psi2: &[Complex64], energy: f64) -> Result<Vec<Complex64>> {
    let m = pair.m;
    let c0 = match pair.kind {
        SusyKind::Pseudoscalar => {
            if (energy - m).abs() <= 1e-12 * m {
                return Err(Error::ThresholdEnergy);
            }
            I * (2.0 * m).sqrt() / (m - energy)
        }
        SusyKind::ScalarMass => {
            if energy.abs() <= 1e-12 * m {
                return Err(Error::ThresholdEnergy);
            }
            Complex64::new((2.0 * m).sqrt() / energy, 0.0)
        }
    };
    if xs.len() != psi2.len() {
        return Err(Error::InvalidParameter("grid and samples differ in length".into()));
    }
    let h = uniform_step(xs)?;
    let d = derivative_samples(h, psi2);
    let sign = pair.l_op.derivative_sign;
    xs.iter()
        .zip(psi2.iter().zip(&d))
        .map(|(&x, (p, dp))| Ok(c0 * pair.l_op.scale * (sign * dp + pair.w(x)? * p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formalism::PtBranch;
    use crate::potentials::{make_nogami_toyama, make_scalar_one_bound, make_super_scarf, scalar_one_bound_constants};

    fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn nt_u2_is_poeschl_teller() {
        let (lambda, eps, m) = (2.0, 0.1, 1.0);
        let pair = build_pair(&make_nogami_toyama(lambda, eps, m).unwrap(), SusyKind::Pseudoscalar).unwrap();
        for x in grid(-6.0, 6.0, 61) {
            let z = Complex64::new(x, eps);
            let want = (lambda * lambda - 2.0 / (z.cosh() * z.cosh())) / (2.0 * m);
            assert!((pair.u2(x).unwrap() - want).norm() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn super_scarf_partners() {
        let (n, l, m) = (3.0, 1.0, 1.5);
        let pair = build_pair(&make_super_scarf(3, 1, m).unwrap(), SusyKind::Pseudoscalar).unwrap();
        for x in grid(-5.0, 5.0, 41) {
            let (ch, sh) = (x.cosh(), x.sinh());
            let u = |s: f64| (Complex64::new(n * n - (n * (n - s) + l * l) / (ch * ch), 0.0) + I * l * (2.0 * n - s) * sh / (ch * ch)) / (2.0 * m);
            assert!((pair.u1(x).unwrap() - u(1.0)).norm() < 1e-12);
            assert!((pair.u2(x).unwrap() - u(-1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn scalar_partners_are_shifted_wells() {
        let (cs, eps, m) = (1.0, 0.1, 1.0);
        let (kb, _, lb) = scalar_one_bound_constants(cs, m);
        let pair = build_pair(&make_scalar_one_bound(cs, eps, m).unwrap(), SusyKind::ScalarMass).unwrap();
        for x in grid(-8.0, 8.0, 81) {
            let z = Complex64::new(x, eps);
            let well = |s: f64| -kb * kb / (m * (kb * z + s * lb).cosh().powi(2));
            assert!((pair.u1(x).unwrap() - well(-1.0)).norm() < 1e-9, "x = {x}");
            assert!((pair.u2(x).unwrap() - well(1.0)).norm() < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn wrong_class() {
        let pair = build_pair(&make_super_scarf(2, 1, 1.0).unwrap(), SusyKind::ScalarMass);
        assert!(matches!(pair, Err(Error::WrongPotentialClass(_))));
    }

    #[test]
    fn tanh_factorizes() {
        let pair = SusyPair::from_superpotential(SusyKind::Pseudoscalar, 1.0, |x| Ok(x.tanh().into()), None, ((-1.0).into(), 1.0.into()), Tail::Exponential { rate: 2.0 }).unwrap();
        let xs = grid(-5.0, 5.0, 10_001);
        let f: Vec<Complex64> = xs.iter().map(|x| Complex64::new(1.0 / x.cosh(), 0.0)).collect();
        let r = verify_factorization(&pair, &xs, &f).unwrap();
        assert!(r.max() < 1e-6, "{r:?}");
    }

    #[test]
    fn constant_superpotential() {
        let c = 0.7;
        let pair = SusyPair::from_superpotential(SusyKind::Pseudoscalar, 1.0, move |_| Ok(c.into()), None, (c.into(), c.into()), Tail::Constant).unwrap();
        assert!((pair.u1(0.3).unwrap() - c * c / 2.0).norm() < 1e-12);
        let xs = grid(-3.0, 3.0, 6001);
        let f: Vec<Complex64> = xs.iter().map(|&x| (I * x).exp()).collect();
        let r = verify_factorization(&pair, &xs, &f).unwrap();
        assert!(r.max() < 1e-8, "{r:?}");
    }

    #[test]
    fn coarse_grid_is_reported() {
        let pair = SusyPair::from_superpotential(SusyKind::Pseudoscalar, 1.0, |x| Ok(x.tanh().into()), None, ((-1.0).into(), 1.0.into()), Tail::Exponential { rate: 2.0 }).unwrap();
        let xs = grid(-5.0, 5.0, 101);
        let f: Vec<Complex64> = xs.iter().map(|&x| (3.0 * I * x).exp() / x.cosh()).collect();
        assert!(matches!(verify_factorization(&pair, &xs, &f), Err(Error::GridTooCoarse { .. })));
    }

    #[test]
    fn wrong_potential_is_not_grid_error() {
        // W' deliberately wrong: the residual stays put under refinement
        let d: Field = Arc::new(|_| Ok(Complex64::new(0.0, 0.0)));
        let pair = SusyPair::from_superpotential(SusyKind::Pseudoscalar, 1.0, |x| Ok(x.tanh().into()), Some(d), ((-1.0).into(), 1.0.into()), Tail::Exponential { rate: 2.0 }).unwrap();
        let xs = grid(-5.0, 5.0, 2001);
        let f: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(1.0 / x.cosh(), 0.0)).collect();
        assert!(verify_factorization(&pair, &xs, &f).unwrap().max() > 1e-2);
    }

    #[test]
    fn map_examples() {
        let (lambda, k) = (2.0, Complex64::new(1.0, 0.0));
        let t2 = -(1.0 - I) / (1.0 + I);
        let r2 = ScatteringResult::from_amplitudes(t2, 0.0.into(), t2, 0.0.into(), 0.0, PtBranch::ConjugatePair, 1e-8);
        let r1 = map_partner_scattering(&r2, lambda.into(), (-lambda).into(), k, k).unwrap();
        let want = (I - 2.0) / (I + 2.0) * t2;
        assert!((r1.t_lr - want).norm() < 1e-15);
        assert_eq!(r1.r_lr, Complex64::new(0.0, 0.0));
        assert!((r1.t_lr.norm() - t2.norm()).abs() < 1e-15);
        // threshold where i k_- = -P_-
        let bad = map_partner_scattering(&r2, (-lambda * 0.5).into(), 0.0.into(), Complex64::new(0.0, -1.0), k);
        assert_eq!(bad, Err(Error::SingularMap));
    }

    #[test]
    fn partner_difference() {
        let pair = build_pair(&make_nogami_toyama(2.0, 0.1, 1.0).unwrap(), SusyKind::Pseudoscalar).unwrap();
        for x in grid(-4.0, 4.0, 33) {
            let fd = central4(|t| pair.w(t), x, 1e-3).unwrap();
            assert!((pair.u1(x).unwrap() - pair.u2(x).unwrap() - fd / pair.m).norm() < 1e-8);
        }
    }

    #[test]
    fn intertwine_edge_cases() {
        let pair = build_pair(&make_nogami_toyama(2.0, 0.1, 1.0).unwrap(), SusyKind::Pseudoscalar).unwrap();
        let xs = grid(-1.0, 1.0, 11);
        let zero = vec![Complex64::new(0.0, 0.0); 11];
        assert!(intertwine_bound_state(&pair, &xs, &zero, 2.0).unwrap().iter().all(|z| z.norm() == 0.0));
        assert_eq!(intertwine_bound_state(&pair, &xs, &zero, 1.0), Err(Error::ThresholdEnergy));
    }

    #[test]
    fn derivative_stencils_exact_on_quartics() {
        let h = 0.1;
        let xs = grid(0.0, 1.0, 11);
        let f: Vec<Complex64> = xs.iter().map(|x| Complex64::new(x.powi(4) - x, 0.0)).collect();
        for (x, d) in xs.iter().zip(derivative_samples(h, &f)) {
            assert!((d.re - (4.0 * x.powi(3) - 1.0)).abs() < 1e-11);
        }
    }
}
