//! Adaptive Gauss–Kronrod (7/15) quadrature and composite Simpson.

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub intervals: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> Result<Complex64>>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx)? + f(c + dx)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let error = ((kron - gauss) * h).norm();
    Ok(Panel { a, b, value, error })
}

/// Integrate a complex function over [a, b].
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let mut panels = vec![gk15(&mut f, a, b)?];
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= cfg.abs_tol.max(cfg.rel_tol * value.norm()) {
            return Ok(Quadrature { value, error, intervals: panels.len() });
        }
        if panels.len() >= cfg.max_intervals {
            return Err(Error::NonConvergence(format!(
                "quadrature on [{a}, {b}] stalled at error {error:e} after {} panels",
                panels.len()
            )));
        }
        let worst = (0..panels.len()).max_by(|&i, &j| panels[i].error.total_cmp(&panels[j].error)).unwrap_or(0);
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gk15(&mut f, p.a, mid)?);
        panels.push(gk15(&mut f, mid, p.b)?);
    }
}

/// Real-valued convenience wrapper.
pub fn integrate_real<F>(mut f: F, a: f64, b: f64, cfg: QuadConfig) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    Ok(integrate(|x| f(x).map(|v| Complex64::new(v, 0.0)), a, b, cfg)?.value.re)
}

/// Integrate over the whole real line through x = scale * tan(theta).
/// Integrands that overflow far out are taken as zero there.
pub fn integrate_line<F>(mut f: F, scale: f64, cfg: QuadConfig) -> Result<Quadrature>
where
    F: FnMut(f64) -> Result<Complex64>,
{
    let half = std::f64::consts::FRAC_PI_2;
    integrate(
        |t| {
            let x = scale * t.tan();
            let v = f(x)?;
            let c = t.cos();
            let w = v * (scale / (c * c));
            if w.is_finite() {
                Ok(w)
            } else if x.abs() > 50.0 * scale {
                Ok(Complex64::new(0.0, 0.0))
            } else {
                Err(Error::NonConvergence(format!("integrand not finite at x = {x}")))
            }
        },
        -half,
        half,
        cfg,
    )
}

/// Composite Simpson on a uniform grid with an odd number of samples.
pub fn simpson(h: f64, y: &[f64]) -> f64 {
    let n = y.len();
    assert!(n >= 3 && n % 2 == 1, "Simpson needs an odd sample count >= 3");
    let mut s = y[0] + y[n - 1];
    for (i, v) in y.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}
