//! Dormand–Prince 5(4) with PI step control on complex state vectors.

use num_complex::Complex64;

use crate::error::{Error, Result};

type State<const N: usize> = [Complex64; N];

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// PI controller constants (Hairer's dopri5 defaults).
const BETA: f64 = 0.04;
const SAFETY: f64 = 0.9;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

/// Stepper state carried across successive `advance_to` calls.
pub struct Dopri5<const N: usize> {
    pub x: f64,
    pub y: State<N>,
    h: f64,
    k1: State<N>,
    tol: Tolerances,
    pub steps: usize,
    pub rejected: usize,
    /// Sum of accepted local error estimates (relative to the state size).
    pub error_sum: f64,
    facold: f64,
}

fn combo<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (c, k) in terms {
        if *c != 0.0 {
            let s = h * c;
            for i in 0..N {
                out[i] += s * k[i];
            }
        }
    }
    out
}

impl<const N: usize> Dopri5<N> {
    pub fn new<F>(f: &F, x0: f64, y0: State<N>, h0: f64, tol: Tolerances) -> Result<Self>
    where
        F: Fn(f64, &State<N>) -> Result<State<N>>,
    {
        let k1 = f(x0, &y0)?;
        Ok(Self { x: x0, y: y0, h: h0, k1, tol, steps: 0, rejected: 0, error_sum: 0.0, facold: 1e-4 })
    }

    /// Replace the state (after a rescale) and refresh the stored slope.
    pub fn reset_state<F>(&mut self, f: &F, y: State<N>) -> Result<()>
    where
        F: Fn(f64, &State<N>) -> Result<State<N>>,
    {
        self.y = y;
        self.k1 = f(self.x, &self.y)?;
        Ok(())
    }

    /// Integrate to `x_target`, calling `on_step` after every accepted step.
    /// `on_step` may modify the state; it must return true if it did.
    pub fn advance_to<F, O>(&mut self, f: &F, x_target: f64, on_step: &mut O) -> Result<()>
    where
        F: Fn(f64, &State<N>) -> Result<State<N>>,
        O: FnMut(f64, &mut State<N>) -> bool,
    {
        let dir = (x_target - self.x).signum();
        if dir == 0.0 {
            return Ok(());
        }
        self.h = self.h.abs() * dir;
        let mut last_rejected = false;
        loop {
            let remaining = x_target - self.x;
            if remaining * dir <= 0.0 {
                return Ok(());
            }
            if self.steps + self.rejected >= self.tol.max_steps {
                return Err(Error::StepLimitExceeded(self.tol.max_steps));
            }
            let last = (self.h.abs() * 1.01) >= remaining.abs();
            let h = if last { remaining } else { self.h };
            if h.abs() <= 1e-14 * self.x.abs().max(1.0) {
                return Err(Error::NonConvergence(format!("step size underflow at x = {}", self.x)));
            }

            let (x, y, k1) = (self.x, &self.y, &self.k1);
            let k2 = f(x + C2 * h, &combo(y, h, &[(A21, k1)]))?;
            let k3 = f(x + C3 * h, &combo(y, h, &[(A31, k1), (A32, &k2)]))?;
            let k4 = f(x + C4 * h, &combo(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
            let k5 = f(x + C5 * h, &combo(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
            let k6 = f(x + h, &combo(y, h, &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]))?;
            let y_new = combo(y, h, &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let x_new = if last { x_target } else { x + h };
            let k7 = f(x_new, &y_new)?;

            let mut sq = 0.0;
            let mut worst = 0.0f64;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.tol.atol + self.tol.rtol * y[i].norm().max(y_new[i].norm());
                let r = e.norm() / scale;
                sq += r * r;
                worst = worst.max(e.norm() / (y[i].norm().max(y_new[i].norm()) + self.tol.atol));
            }
            let err = (sq / N as f64).sqrt();

            if !err.is_finite() {
                self.rejected += 1;
                self.h *= 0.1;
                last_rejected = true;
                continue;
            }

            let fac11 = err.powf(0.2 - BETA * 0.75);
            if err <= 1.0 {
                let fac = (fac11 / self.facold.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
                let mut h_new = h / fac;
                if last_rejected {
                    h_new = h_new.abs().min(h.abs()) * dir;
                }
                self.facold = err.max(1e-4);
                self.steps += 1;
                self.error_sum += worst;
                self.x = x_new;
                self.y = y_new;
                self.k1 = k7;
                if !last {
                    self.h = h_new;
                }
                last_rejected = false;
                let mut y_obs = self.y;
                if on_step(self.x, &mut y_obs) {
                    self.reset_state(f, y_obs)?;
                }
            } else {
                self.rejected += 1;
                self.h = h / (fac11 / SAFETY).min(1.0 / FAC_MIN);
                last_rejected = true;
            }
        }
    }
}
