//! Energy sweeps. Each energy is an independent solve, so the grid is
//! mapped either on the rayon pool or in a plain loop; results always come
//! back in grid order.

use crate::error::{Error, Result};
use crate::formalism::PhysicalParams;
use crate::integrator::{self, IntegratorConfig, Reduction, ScatterOutcome};
use crate::potentials::PotentialModel;

/// Ordered map over a slice, one item at a time.
pub fn map_sequential<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

/// Ordered map over a slice on the rayon pool.
#[cfg(feature = "parallel")]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Without the `parallel` feature this is the sequential map.
#[cfg(not(feature = "parallel"))]
pub fn map_parallel<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_sequential(items, f)
}

pub fn parallel_enabled() -> bool {
    cfg!(feature = "parallel")
}

/// `count` evenly spaced values in [min, max]; a single point is `min`.
pub fn energy_grid(min: f64, max: f64, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::InvalidParameter("grid count must be at least 1".into()));
    }
    if !(min.is_finite() && max.is_finite()) || (count > 1 && !(min < max)) {
        return Err(Error::InvalidParameter(format!("need min < max, got [{min}, {max}]")));
    }
    if count == 1 {
        return Ok(vec![min]);
    }
    let step = (max - min) / (count - 1) as f64;
    Ok((0..count).map(|i| if i + 1 == count { max } else { min + step * i as f64 }).collect())
}

/// Scattering at one Dirac energy. The `poeschl_teller` alias scatters
/// the lower partner equation of its pseudoscalar model instead.
pub fn scatter_energy(model: &PotentialModel, energy: f64, cfg: &IntegratorConfig) -> Result<ScatterOutcome> {
    let params = PhysicalParams::new(model.m, energy)?;
    if model.label == "poeschl_teller" {
        let (u, eps) = integrator::reduce_schrodinger(model, params, Reduction::PseudoScalar(2))?;
        return integrator::scatter_schrodinger(&u, model.m, eps, cfg);
    }
    integrator::scatter(model, params, cfg)
}

/// Scatter every energy; `parallel` picks the rayon path when compiled in.
pub fn scatter_sweep(model: &PotentialModel, energies: &[f64], cfg: &IntegratorConfig, parallel: bool) -> Vec<Result<ScatterOutcome>> {
    let run = |e: &f64| scatter_energy(model, *e, cfg);
    if parallel {
        map_parallel(energies, run)
    } else {
        map_sequential(energies, run)
    }
}
