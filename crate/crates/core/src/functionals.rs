//! Reversed-time reliability functionals.
//!
//! * reversed hazard rate `phi(t) = f(t) / F(t)`
//! * expected inactivity time `m(t) = E[t - X | X <= t] = ∫_a^t F(x) dx / F(t)`
//! * reversed aging intensity `L(t) = (b - t) phi(t) / ∫_t^b phi(u) du`
//!
//! The plain accessors ([`rhr`], [`eit`], [`rai`]) use a model's closed forms
//! when it has them. The `*_numeric` / integral-form variants use only the
//! model's CDF and density and never consult closed forms, so the two paths
//! check each other.
//!
//! `L(t)` is not defined at or below the lower endpoint. For `t >= b` it is
//! reported as 0, while its left limit at `b` is 1: the value jumps at `b`.

use serde::Serialize;

use crate::distributions::DistributionModel;
use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

/// Tolerance for inner inactivity-time integrals, tight enough for the
/// finite-difference derivative in the identity check.
pub const EIT_TOL: Tolerance = Tolerance {
    rel: 1e-13,
    abs: 1e-15,
    max_depth: 50,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FunctionalValue {
    pub t: f64,
    pub phi: f64,
    pub m: f64,
    pub rai: Option<f64>,
}

fn check_left_open(model: &DistributionModel, t: f64) -> Result<()> {
    let s = model.support();
    if t.is_finite() && t > s.lower && t <= s.upper {
        Ok(())
    } else {
        Err(model.support_error(t))
    }
}

/// Reversed hazard rate on `(a, b]`.
pub fn rhr(model: &DistributionModel, t: f64) -> Result<f64> {
    check_left_open(model, t)?;
    match model.rhr_closed(t) {
        Some(v) => Ok(v),
        None => rhr_numeric(model, t),
    }
}

/// `f(t) / F(t)` from the density and CDF alone.
pub fn rhr_numeric(model: &DistributionModel, t: f64) -> Result<f64> {
    check_left_open(model, t)?;
    let cdf = model.cdf(t);
    if cdf == 0.0 {
        return Err(Error::ZeroMass(t));
    }
    Ok(model.density(t) / cdf)
}

/// Expected inactivity time on `(a, b]`.
pub fn eit(model: &DistributionModel, t: f64) -> Result<f64> {
    check_left_open(model, t)?;
    match model.eit_closed(t) {
        Some(v) => Ok(v),
        None => eit_numeric(model, t, &EIT_TOL),
    }
}

/// `∫_a^t F(x) / F(t) dx` by quadrature, computed in log space so that
/// deep left tails do not underflow.
pub fn eit_numeric(model: &DistributionModel, t: f64, tol: &Tolerance) -> Result<f64> {
    check_left_open(model, t)?;
    let log_ft = model.log_cdf(t);
    if log_ft == f64::NEG_INFINITY {
        return Err(Error::ZeroMass(t));
    }
    let lower = model.support().lower;
    quadrature::integrate(|x| (model.log_cdf(x) - log_ft).exp(), lower, t, tol).converged_value()
}

/// Reversed aging intensity.
///
/// Errors for `t <= a` and for unbounded supports; 0 for `t >= b`; the
/// limit value 1 when `ln F(t)` is numerically zero just below `b`.
pub fn rai(model: &DistributionModel, t: f64) -> Result<f64> {
    let s = model.support();
    if !s.upper.is_finite() {
        return Err(Error::UnboundedSupport);
    }
    if t.is_nan() || t <= s.lower {
        return Err(model.support_error(t));
    }
    if t >= s.upper {
        return Ok(0.0);
    }
    match model.rai_closed(t) {
        Some(v) => Ok(v),
        None => rai_integral_form(model, t, &Tolerance::default()),
    }
}

/// `(b - t) phi(t) / ∫_t^b phi(u) du` with `phi = f / F` and quadrature.
pub fn rai_integral_form(model: &DistributionModel, t: f64, tol: &Tolerance) -> Result<f64> {
    let s = model.support();
    if !s.upper.is_finite() {
        return Err(Error::UnboundedSupport);
    }
    if t.is_nan() || t <= s.lower {
        return Err(model.support_error(t));
    }
    if t >= s.upper {
        return Ok(0.0);
    }
    let phi_t = rhr_numeric(model, t)?;
    let area = integrated_rhr(model, t, tol)?;
    if area == 0.0 {
        return Ok(1.0);
    }
    Ok((s.upper - t) * phi_t / area)
}

/// `∫_t^b phi(u) du` using `phi = f / F`.
fn integrated_rhr(model: &DistributionModel, t: f64, tol: &Tolerance) -> Result<f64> {
    let b = model.support().upper;
    quadrature::integrate(
        |u| {
            let f = model.density(u);
            if f == 0.0 {
                0.0
            } else {
                f / model.cdf(u)
            }
        },
        t,
        b,
        tol,
    )
    .converged_value()
}

/// Reconstructs `F(t) = exp(-∫_t^b phi(u) du)` from the reversed hazard rate.
pub fn cdf_from_rhr(model: &DistributionModel, t: f64, tol: &Tolerance) -> Result<f64> {
    check_left_open(model, t)?;
    Ok((-integrated_rhr(model, t, tol)?).exp())
}

/// `max |phi(t) m(t) - (1 - m'(t))|` over the grid, with `m'` by central
/// differences of step `max(1e-6, 1e-6 |t|)`.
pub fn rhr_eit_identity_residual(model: &DistributionModel, grid: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in grid {
        let h = (1e-6 * t.abs()).max(1e-6);
        let up = eit(model, t + h)?;
        let down = eit(model, t - h)?;
        let slope = (up - down) / (2.0 * h);
        let residual = rhr(model, t)? * eit(model, t)? - (1.0 - slope);
        worst = worst.max(residual.abs());
    }
    Ok(worst)
}

/// All three functionals at `t`; `rai` is absent for unbounded supports.
pub fn evaluate(model: &DistributionModel, t: f64) -> Result<FunctionalValue> {
    let rai = if model.support().upper.is_finite() {
        Some(rai(model, t)?)
    } else {
        None
    };
    Ok(FunctionalValue {
        t,
        phi: rhr(model, t)?,
        m: eit(model, t)?,
        rai,
    })
}

/// `n` interior points at the quantiles `(i + 1/2) / n`.
pub fn probability_grid(model: &DistributionModel, n: usize) -> Result<Vec<f64>> {
    (0..n)
        .map(|i| model.quantile((i as f64 + 0.5) / n as f64))
        .collect()
}
