mod common;

use common::*;

#[test]
fn reference_rules_reproduce_known_integrals() {
    assert!(rel_err(tanh_sinh(|x| x.powf(-0.5), 0.0, 1.0), 2.0) < 1e-10);
    assert!(rel_err(tanh_sinh(|x| x.ln(), 0.0, 1.0), -1.0) < 1e-10);
    assert!(rel_err(exp_sinh_lower(f64::exp, 0.0), 1.0) < 1e-10);
    let gauss = exp_sinh_lower(|x| (-x * x).exp(), 0.0);
    assert!(rel_err(gauss, std::f64::consts::PI.sqrt() / 2.0) < 1e-10);
    assert!(rel_err(exp_sinh_upper(|x| 1.0 / (x * x), 1.0), 1.0) < 1e-10);
}
