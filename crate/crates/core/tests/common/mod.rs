//! Independent reference quadrature: double-exponential trapezoid rules.
//! Shares no code with the library's Gauss–Kronrod engine.

#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

const STEP: f64 = 1.0 / 64.0;

fn trapezoid(t_lo: f64, t_hi: f64, node: impl Fn(f64) -> (f64, f64), f: &impl Fn(f64) -> f64) -> f64 {
    let n = ((t_hi - t_lo) / STEP).round() as i64;
    let mut sum = 0.0;
    for i in 0..=n {
        let t = t_lo + i as f64 * STEP;
        let (x, w) = node(t);
        if w == 0.0 || !w.is_finite() {
            continue;
        }
        let y = f(x);
        if y.is_finite() {
            sum += w * y;
        }
    }
    sum * STEP
}

/// `∫_a^b f` by tanh-sinh; tolerates integrable endpoint singularities.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let h = 0.5 * (b - a);
    trapezoid(
        -4.0,
        4.0,
        |t| {
            let u = FRAC_PI_2 * t.sinh();
            let ch = u.cosh();
            // distances to the endpoints, computed without cancellation
            let from_a = 2.0 * h / (1.0 + (-2.0 * u).exp());
            let x = if u <= 0.0 { a + from_a } else { b - 2.0 * h / (1.0 + (2.0 * u).exp()) };
            (x, h * FRAC_PI_2 * t.cosh() / (ch * ch))
        },
        &f,
    )
}

/// `∫_{-inf}^b f` by the exp-sinh substitution `x = b - exp(pi/2 sinh t)`.
pub fn exp_sinh_lower(f: impl Fn(f64) -> f64, b: f64) -> f64 {
    trapezoid(
        -4.5,
        4.5,
        |t| {
            let e = (FRAC_PI_2 * t.sinh()).exp();
            (b - e, FRAC_PI_2 * t.cosh() * e)
        },
        &f,
    )
}

/// `∫_a^inf f` by `x = a + exp(pi/2 sinh t)`.
pub fn exp_sinh_upper(f: impl Fn(f64) -> f64, a: f64) -> f64 {
    trapezoid(
        -4.5,
        4.5,
        |t| {
            let e = (FRAC_PI_2 * t.sinh()).exp();
            (a + e, FRAC_PI_2 * t.cosh() * e)
        },
        &f,
    )
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}
