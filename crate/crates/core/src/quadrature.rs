//! Expectation engine.
//!
//! Integrals are computed with an adaptive 21-point Gauss-Kronrod rule. The
//! rule never evaluates the integrand at an interval endpoint, so integrable
//! endpoint singularities such as `x^(-1/2)` are admissible. When the global
//! adaptive pass cannot meet the tolerance, each half of the interval is
//! re-integrated as a sequence of dyadic shells converging to its outer
//! endpoint. The decay of the shell contributions separates integrable
//! singularities (geometric decay, extrapolated) from divergent ones
//! (contributions that stop shrinking).
//!
//! Semi-infinite ranges are mapped onto `(0, 1)` with `x = hi - u / (1 - u)`
//! (or the mirrored map for an infinite upper limit), so a tail that fails to
//! decay shows up as a non-decaying transformed integrand at `u = 1`.

use rand::distributions::{Distribution, Open01};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distributions::DistributionModel;
use crate::empirics::SampleSet;
use crate::error::{Error, Result};

/// Absolute and relative tolerances plus the dyadic refinement budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_depth: u32,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rel: 1e-9,
            abs: 1e-12,
            max_depth: 50,
        }
    }
}

impl Tolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Tolerance {
            rel,
            abs,
            ..Tolerance::default()
        }
    }

    fn bound(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum QuadStatus {
    Converged,
    Divergent,
    MaxDepth,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub err_estimate: f64,
    pub status: QuadStatus,
}

impl QuadResult {
    pub fn is_converged(&self) -> bool {
        self.status == QuadStatus::Converged
    }

    /// The value if converged, otherwise a `Quadrature` error.
    pub fn converged_value(&self) -> Result<f64> {
        if self.is_converged() {
            Ok(self.value)
        } else {
            Err(Error::Quadrature {
                status: self.status,
                value: self.value,
            })
        }
    }
}

// Kronrod abscissae; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

// Global adaptive pass budget (segments).
const MAX_SEGMENTS: usize = 400;
const SHELL_SEGMENTS: usize = 120;

// Shell-sequence classification thresholds.
const DECAY_RATIO: f64 = 0.9;
const STALL_RATIO: f64 = 0.97;
const STALL_RUN: usize = 5;
// Ratios above this are a warm-up toward the anchor, not a divergent tail.
const STALL_CAP: f64 = 16.0;
// Panels of the first adaptive pass; one panel can miss a narrow peak.
const INITIAL_PANELS: usize = 4;

#[derive(Debug, Clone, Copy)]
struct Segment {
    lo: f64,
    hi: f64,
    value: f64,
    err: f64,
}

/// One 21-point Gauss-Kronrod panel. Returns `None` if the integrand is not
/// finite at any node.
fn gk21<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Option<Segment> {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    if !fc.is_finite() {
        return None;
    }
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    let mut res_abs = kron.abs();
    let mut fv1 = [0.0; 10];
    let mut fv2 = [0.0; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        if !f1.is_finite() || !f2.is_finite() {
            return None;
        }
        fv1[j] = f1;
        fv2[j] = f2;
        kron += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kron;
    let mut res_asc = WGK[10] * (fc - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kron * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((kron - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Some(Segment { lo, hi, value, err })
}

enum Pass {
    Converged { value: f64, err: f64 },
    Exhausted { value: f64, err: f64 },
    NonFinite,
}

/// Global adaptive bisection on `[lo, hi]`.
fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    lo: f64,
    hi: f64,
    tol: &Tolerance,
    max_segments: usize,
    panels: usize,
) -> Pass {
    let min_width = (hi - lo) * 0.5f64.powi(tol.max_depth as i32);
    let step = (hi - lo) / panels as f64;
    let mut segments = Vec::with_capacity(max_segments + 2);
    for i in 0..panels {
        let a = lo + step * i as f64;
        let b = if i + 1 == panels { hi } else { a + step };
        match gk21(f, a, b) {
            Some(s) => segments.push(s),
            None => return Pass::NonFinite,
        }
    }
    loop {
        let value: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.err).sum();
        if err <= tol.bound(value) {
            return Pass::Converged { value, err };
        }
        if segments.len() >= max_segments {
            return Pass::Exhausted { value, err };
        }
        let worst = segments
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                let mid = 0.5 * (s.lo + s.hi);
                s.hi - s.lo > min_width && mid > s.lo && mid < s.hi
            })
            .max_by(|a, b| a.1.err.total_cmp(&b.1.err))
            .map(|(i, _)| i);
        let Some(i) = worst else {
            return Pass::Exhausted { value, err };
        };
        let s = segments.swap_remove(i);
        let mid = 0.5 * (s.lo + s.hi);
        match (gk21(f, s.lo, mid), gk21(f, mid, s.hi)) {
            (Some(a), Some(b)) => {
                segments.push(a);
                segments.push(b);
            }
            _ => return Pass::NonFinite,
        }
    }
}

/// Geometric tail beyond the last shell from the latest increment ratio,
/// with the disagreement against the previous ratio as its error.
fn extrapolate(incs: &[f64], last_signed: f64) -> (f64, f64) {
    let k = incs.len();
    let q1 = incs[k - 1] / incs[k - 2];
    let q2 = incs[k - 2] / incs[k - 3];
    let tail = last_signed * q1 / (1.0 - q1);
    let alt = last_signed * q2 / (1.0 - q2);
    if !(q1.is_finite() && q2.is_finite() && q1 < 1.0 && q2 < 1.0) {
        return (tail, f64::INFINITY);
    }
    (tail, (tail - alt).abs())
}

/// Integrates over the half interval between `anchor` and `anchor + width`
/// (width may be negative) as dyadic shells shrinking toward `anchor`.
fn shell_sweep<F: Fn(f64) -> f64>(f: &F, anchor: f64, width: f64, tol: &Tolerance) -> QuadResult {
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut last_signed = 0.0;
    let mut incs: Vec<f64> = Vec::new();
    let floor = 64.0 * f64::EPSILON * anchor.abs();
    let shell_tol = Tolerance {
        rel: tol.rel * 0.1,
        abs: tol.abs * 0.01,
        max_depth: tol.max_depth,
    };

    let ratio = |incs: &[f64], i: usize| -> f64 {
        let (prev, cur) = (incs[i - 1], incs[i]);
        if prev == 0.0 {
            if cur == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            cur / prev
        }
    };

    for n in 0..=tol.max_depth {
        let outer = width * 0.5f64.powi(n as i32);
        let inner = 0.5 * outer;
        if inner.abs() <= floor || anchor + inner == anchor {
            break;
        }
        let (a, b) = if width > 0.0 {
            (anchor + inner, anchor + outer)
        } else {
            (anchor + outer, anchor + inner)
        };
        match adaptive(f, a, b, &shell_tol, SHELL_SEGMENTS, 1) {
            Pass::Converged { value, err: e } => {
                sum += value;
                err += e;
                last_signed = value;
                incs.push(value.abs());
            }
            Pass::Exhausted { value, err: e } => {
                return QuadResult {
                    value: sum + value,
                    err_estimate: err + e,
                    status: QuadStatus::MaxDepth,
                }
            }
            Pass::NonFinite => {
                return QuadResult {
                    value: sum,
                    err_estimate: f64::INFINITY,
                    status: QuadStatus::Divergent,
                }
            }
        }
        let tail_tol = 0.25 * tol.bound(sum);
        let k = incs.len();
        if k >= 4 {
            if incs[k - 1] == 0.0 && incs[k - 2] == 0.0 {
                return QuadResult {
                    value: sum,
                    err_estimate: err,
                    status: QuadStatus::Converged,
                };
            }
            let q = (k - 3..k).map(|i| ratio(&incs, i)).fold(0.0, f64::max);
            if q < DECAY_RATIO {
                let (tail, tail_err) = extrapolate(&incs, last_signed);
                if tail_err <= tail_tol {
                    return QuadResult {
                        value: sum + tail,
                        err_estimate: err + tail_err,
                        status: QuadStatus::Converged,
                    };
                }
            }
        }
        if k > STALL_RUN
            && (k - STALL_RUN..k).all(|i| (STALL_RATIO..=STALL_CAP).contains(&ratio(&incs, i)))
            && incs[k - 1] > tail_tol
        {
            return QuadResult {
                value: sum,
                err_estimate: f64::INFINITY,
                status: QuadStatus::Divergent,
            };
        }
    }

    // Depth budget or floating-point floor reached.
    let k = incs.len();
    let tail_tol = 0.25 * tol.bound(sum);
    if k < 2 {
        let status = if err <= tol.bound(sum) {
            QuadStatus::Converged
        } else {
            QuadStatus::MaxDepth
        };
        return QuadResult {
            value: sum,
            err_estimate: err,
            status,
        };
    }
    let q = ratio(&incs, k - 1);
    if q < STALL_RATIO {
        let (tail, tail_err) = if k >= 3 {
            extrapolate(&incs, last_signed)
        } else {
            let t = last_signed * q / (1.0 - q);
            (t, t.abs())
        };
        let status = if tail_err <= tail_tol {
            QuadStatus::Converged
        } else {
            QuadStatus::MaxDepth
        };
        QuadResult {
            value: sum + tail,
            err_estimate: err + tail_err,
            status,
        }
    } else if incs[k - 1] <= tail_tol {
        QuadResult {
            value: sum,
            err_estimate: err + incs[k - 1],
            status: QuadStatus::Converged,
        }
    } else {
        QuadResult {
            value: sum,
            err_estimate: f64::INFINITY,
            status: QuadStatus::Divergent,
        }
    }
}

/// Adaptive integral of `f` over the finite interval `(lo, hi)`.
pub fn integrate_finite<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: &Tolerance) -> QuadResult {
    assert!(
        lo.is_finite() && hi.is_finite(),
        "integrate_finite needs finite limits"
    );
    if lo == hi {
        return QuadResult {
            value: 0.0,
            err_estimate: 0.0,
            status: QuadStatus::Converged,
        };
    }
    if lo > hi {
        let r = integrate_finite(f, hi, lo, tol);
        return QuadResult {
            value: -r.value,
            ..r
        };
    }
    if let Pass::Converged { value, err } = adaptive(&f, lo, hi, tol, MAX_SEGMENTS, INITIAL_PANELS) {
        return QuadResult {
            value,
            err_estimate: err,
            status: QuadStatus::Converged,
        };
    }
    let mid = 0.5 * (lo + hi);
    let left = shell_sweep(&f, lo, mid - lo, tol);
    let right = shell_sweep(&f, hi, mid - hi, tol);
    let value = left.value + right.value;
    let err_estimate = left.err_estimate + right.err_estimate;
    let status = match (left.status, right.status) {
        (QuadStatus::Divergent, _) | (_, QuadStatus::Divergent) => QuadStatus::Divergent,
        (QuadStatus::Converged, QuadStatus::Converged) if err_estimate <= tol.bound(value) => {
            QuadStatus::Converged
        }
        _ => QuadStatus::MaxDepth,
    };
    QuadResult {
        value,
        err_estimate,
        status,
    }
}

/// Integral of `f` over `(-inf, hi]` via `x = hi - u / (1 - u)`.
pub fn integrate_lower_unbounded<F: Fn(f64) -> f64>(f: F, hi: f64, tol: &Tolerance) -> QuadResult {
    let g = |u: f64| {
        let v = 1.0 - u;
        let y = f(hi - u / v);
        if y == 0.0 {
            0.0
        } else {
            y / (v * v)
        }
    };
    integrate_finite(g, 0.0, 1.0, tol)
}

/// Integral of `f` over `[lo, +inf)` via `x = lo + u / (1 - u)`.
pub fn integrate_upper_unbounded<F: Fn(f64) -> f64>(f: F, lo: f64, tol: &Tolerance) -> QuadResult {
    let g = |u: f64| {
        let v = 1.0 - u;
        let y = f(lo + u / v);
        if y == 0.0 {
            0.0
        } else {
            y / (v * v)
        }
    };
    integrate_finite(g, 0.0, 1.0, tol)
}

/// Dispatches on which limits are infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: &Tolerance) -> QuadResult {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => integrate_finite(f, lo, hi, tol),
        (false, true) => integrate_lower_unbounded(f, hi, tol),
        (true, false) => integrate_upper_unbounded(f, lo, tol),
        (false, false) => {
            let a = integrate_lower_unbounded(&f, 0.0, tol);
            let b = integrate_upper_unbounded(&f, 0.0, tol);
            combine(&[a, b])
        }
    }
}

/// Sum of several partial results; the worst status wins.
pub fn combine(parts: &[QuadResult]) -> QuadResult {
    let value = parts.iter().map(|r| r.value).sum();
    let err_estimate = parts.iter().map(|r| r.err_estimate).sum();
    let status = if parts.iter().any(|r| r.status == QuadStatus::Divergent) {
        QuadStatus::Divergent
    } else if parts.iter().any(|r| r.status == QuadStatus::MaxDepth) {
        QuadStatus::MaxDepth
    } else {
        QuadStatus::Converged
    };
    QuadResult {
        value,
        err_estimate,
        status,
    }
}

/// `E[g(X)] = ∫ g(x) f(x) dx` over the model's support, signs preserved.
///
/// Points where the density vanishes (including underflow in far tails)
/// contribute zero without evaluating `g`.
pub fn expectation<G: Fn(f64) -> f64>(model: &DistributionModel, g: G, tol: &Tolerance) -> QuadResult {
    let s = model.support();
    integrate(
        |x| {
            let d = model.density(x);
            if d == 0.0 {
                0.0
            } else {
                g(x) * d
            }
        },
        s.lower,
        s.upper,
        tol,
    )
}

/// `∫_a^t F(x) dx`, the numerator of the expected inactivity time.
pub fn cdf_cumulative_integral(model: &DistributionModel, t: f64, tol: &Tolerance) -> Result<f64> {
    let s = model.support();
    if !(t > s.lower && t <= s.upper) || !t.is_finite() {
        return Err(Error::Support {
            t,
            lower: s.lower,
            upper: s.upper,
        });
    }
    integrate(|x| model.cdf(x), s.lower, t, tol).converged_value()
}

/// `n` inverse-CDF draws from a ChaCha stream seeded with `seed`.
pub fn sample_inverse_cdf(model: &DistributionModel, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..n)
        .map(|_| {
            let p: f64 = Open01.sample(&mut rng);
            model.quantile(p)
        })
        .collect::<Result<Vec<_>>>()?;
    SampleSet::new(values)
}

/// Sample mean of `g` and its standard error.
pub fn mc_expectation<G: Fn(f64) -> f64>(samples: &SampleSet, g: G) -> Result<(f64, f64)> {
    let n = samples.len();
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for (i, &x) in samples.values().iter().enumerate() {
        let y = g(x);
        if !y.is_finite() {
            return Err(Error::NonFiniteWeight { index: i, x });
        }
        // Welford update
        let delta = y - mean;
        mean += delta / (i + 1) as f64;
        m2 += delta * (y - mean);
    }
    let stderr = if n > 1 {
        (m2 / (n - 1) as f64 / n as f64).sqrt()
    } else {
        0.0
    };
    Ok((mean, stderr))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn kronrod_weights_integrate_constants() {
        let r = integrate_finite(|_| 1.0, -1.0, 1.0, &tol());
        assert!((r.value - 2.0).abs() < 1e-15);
        let r = integrate_finite(|x| x.powi(30), -1.0, 1.0, &tol());
        assert!((r.value - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn linear_integrand() {
        let r = integrate_finite(|x| x, 0.0, 1.0, &tol());
        assert_eq!(r.status, QuadStatus::Converged);
        assert!((r.value - 0.5).abs() <= 1e-10);
        assert!(r.err_estimate <= 1e-10);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let r = integrate_finite(|x| x.powf(-0.5), 0.0, 1.0, &tol());
        assert_eq!(r.status, QuadStatus::Converged);
        assert!((r.value - 2.0).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn harmonic_divergence() {
        let r = integrate_finite(|x| 1.0 / x, 0.0, 1.0, &tol());
        assert_eq!(r.status, QuadStatus::Divergent);
        let r = integrate_finite(|x| 1.0 / (x * x), 0.0, 1.0, &tol());
        assert_eq!(r.status, QuadStatus::Divergent);
        let r = integrate_finite(|x| 1.0 / (1.0 - x), 0.0, 1.0, &tol());
        assert_eq!(r.status, QuadStatus::Divergent);
    }

    #[test]
    fn singularity_at_nonzero_endpoint() {
        let r = integrate_finite(|x: f64| (x + 2.0).powf(-0.5), -2.0, 0.0, &tol());
        assert_eq!(r.status, QuadStatus::Converged);
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn lower_unbounded_examples() {
        let r = integrate_lower_unbounded(f64::exp, 0.0, &tol());
        assert!((r.value - 1.0).abs() < 1e-8);
        let r = integrate_lower_unbounded(|x: f64| (-x * x / 2.0).exp() * -x, 0.0, &tol());
        assert!((r.value - 1.0).abs() < 1e-8);
        let r = integrate_lower_unbounded(|x: f64| 1.0 / (1.0 + x * x), 0.0, &tol());
        assert_eq!(r.status, QuadStatus::Converged);
        assert!((r.value - std::f64::consts::FRAC_PI_2).abs() < 1e-8, "{r:?}");
    }

    #[test]
    fn lower_unbounded_divergent_tail() {
        let r = integrate_lower_unbounded(|x: f64| 1.0 / (1.0 - x), 0.0, &tol());
        assert_eq!(r.status, QuadStatus::Divergent);
        let r = integrate_lower_unbounded(|_| 1.0, 0.0, &tol());
        assert_eq!(r.status, QuadStatus::Divergent);
    }

    #[test]
    fn upper_unbounded() {
        let r = integrate_upper_unbounded(|x: f64| (-x).exp(), 0.0, &tol());
        assert!((r.value - 1.0).abs() < 1e-9);
        let r = integrate_upper_unbounded(|x: f64| 1.0 / x, 1.0, &tol());
        assert_eq!(r.status, QuadStatus::Divergent);
    }

    #[test]
    fn truncated_tails_agree_with_unbounded() {
        let cases: [fn(f64) -> f64; 3] = [
            |x| x.exp(),
            |x| (-x * x).exp(),
            |x| 1.0 / (1.0 + x * x).powi(2),
        ];
        for g in cases {
            let full = integrate_lower_unbounded(g, 0.5, &tol()).value;
            let cut = integrate_finite(g, -60.0, 0.5, &tol()).value;
            let cut_far = integrate_finite(g, -4000.0, 0.5, &tol()).value;
            assert!((full - cut_far).abs() < 1e-9, "{full} vs {cut_far}");
            assert!((full - cut).abs() < 1e-5);
        }
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let r = integrate_finite(|x| x * x, 1.0, 0.0, &tol());
        assert!((r.value + 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn nonfinite_interior_value_is_divergent() {
        let r = integrate_finite(|x: f64| 1.0 / (x - 0.5), 0.0, 1.0, &tol());
        assert_ne!(r.status, QuadStatus::Converged);
    }

    #[test]
    fn mc_arithmetic() {
        let s = SampleSet::new(vec![3.0, 1.0, 2.0]).unwrap();
        let (m, se) = mc_expectation(&s, |x| x).unwrap();
        assert!((m - 2.0).abs() < 1e-15);
        assert!((se - (1.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn mc_rejects_nonfinite_weight() {
        let s = SampleSet::new(vec![0.0, 1.0]).unwrap();
        assert!(matches!(
            mc_expectation(&s, |x| 1.0 / x),
            Err(Error::NonFiniteWeight { index: 0, .. })
        ));
    }
}
