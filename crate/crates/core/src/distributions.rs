//! Closed-form distribution families on right-bounded supports.
//!
//! Every family is defined through its log-CDF, density and reversed hazard
//! rate, each written out independently so that the numerical paths in
//! [`crate::functionals`] can cross-check them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadStatus, Tolerance};

/// The open-closed interval `(lower, upper]` carrying all probability mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportInterval {
    pub lower: f64,
    pub upper: f64,
}

impl SupportInterval {
    pub fn is_nonnegative(&self) -> bool {
        self.lower >= 0.0
    }

    pub fn is_nonpositive(&self) -> bool {
        self.upper <= 0.0
    }

    pub fn has_finite_upper(&self) -> bool {
        self.upper.is_finite()
    }

    /// True when `t` is strictly inside the support.
    pub fn contains_open(&self, t: f64) -> bool {
        t > self.lower && t < self.upper
    }
}

/// A family tag with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    /// `F(t) = exp(gamma (t - b))` on `(-inf, b]`.
    Type3Ev { gamma: f64, b: f64 },
    /// `F(x) = (x / b)^c` on `(0, b]`.
    Power { b: f64, c: f64 },
    /// `F(x) = exp(-nu x^-delta)` on `(0, inf)`.
    InverseWeibull { nu: f64, delta: f64 },
    /// `F(x) = exp(-alpha (e^-x - e^-b))` on `(-inf, b]`.
    TruncEvPower { alpha: f64, b: f64 },
    /// `F(x) = exp(-theta (a^-x - a^-b))` on `(-inf, b]`.
    BaseALinkedRhr { theta: f64, a: f64, b: f64 },
    /// `F(x) = exp(-theta x^(k+1))` on `(-inf, 0]`, `k` odd.
    ReflectedWeibull { theta: f64, k: u32 },
    /// `F(x) = (x / b)^k exp(theta (x^(k+1) - b^(k+1)))` on `(0, b]`.
    FiniteRange { theta: f64, b: f64, k: u32 },
    /// The distribution whose inactivity time is `xi (alpha + beta x)`.
    LinearMit { xi: f64, alpha: f64, beta: f64, b: f64 },
    /// `F(x) = e^(x - b) exp(theta (e^x - e^b))` on `(-inf, b]`.
    ExpLinkedEit { theta: f64, b: f64 },
    /// `F(x) = e^(gamma (x - b)) exp(delta (a^x - a^b))` on `(-inf, b]`.
    BaseALinkedEit { gamma: f64, delta: f64, a: f64, b: f64 },
    Uniform { a: f64, b: f64 },
}

/// Functional form of the reversed hazard rate, up to a positive constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RhrShape {
    Constant,
    /// `phi(x) ∝ |x|^exponent`.
    Power { exponent: f64 },
    /// `phi(x) ∝ base^-x`.
    ExpDecay { base: f64 },
    General,
}

/// Functional form of the expected inactivity time, up to a positive constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EitShape {
    /// `m(x) ∝ alpha + beta x`.
    Affine { alpha: f64, beta: f64 },
    General,
}

const TAGS: [&str; 11] = [
    "type3ev",
    "power",
    "invweibull",
    "truncev",
    "basearhr",
    "reflweibull",
    "finiterange",
    "linearmit",
    "expeit",
    "baseaeit",
    "uniform",
];

impl FamilySpec {
    /// All family tags accepted by the text form.
    pub fn tags() -> &'static [&'static str] {
        &TAGS
    }

    pub fn tag(&self) -> &'static str {
        match self {
            FamilySpec::Type3Ev { .. } => "type3ev",
            FamilySpec::Power { .. } => "power",
            FamilySpec::InverseWeibull { .. } => "invweibull",
            FamilySpec::TruncEvPower { .. } => "truncev",
            FamilySpec::BaseALinkedRhr { .. } => "basearhr",
            FamilySpec::ReflectedWeibull { .. } => "reflweibull",
            FamilySpec::FiniteRange { .. } => "finiterange",
            FamilySpec::LinearMit { .. } => "linearmit",
            FamilySpec::ExpLinkedEit { .. } => "expeit",
            FamilySpec::BaseALinkedEit { .. } => "baseaeit",
            FamilySpec::Uniform { .. } => "uniform",
        }
    }

    /// Parameters in canonical order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            FamilySpec::Type3Ev { gamma, b } => vec![("gamma", gamma), ("b", b)],
            FamilySpec::Power { b, c } => vec![("b", b), ("c", c)],
            FamilySpec::InverseWeibull { nu, delta } => vec![("nu", nu), ("delta", delta)],
            FamilySpec::TruncEvPower { alpha, b } => vec![("alpha", alpha), ("b", b)],
            FamilySpec::BaseALinkedRhr { theta, a, b } => {
                vec![("theta", theta), ("a", a), ("b", b)]
            }
            FamilySpec::ReflectedWeibull { theta, k } => vec![("theta", theta), ("k", k as f64)],
            FamilySpec::FiniteRange { theta, b, k } => {
                vec![("theta", theta), ("b", b), ("k", k as f64)]
            }
            FamilySpec::LinearMit { xi, alpha, beta, b } => {
                vec![("xi", xi), ("alpha", alpha), ("beta", beta), ("b", b)]
            }
            FamilySpec::ExpLinkedEit { theta, b } => vec![("theta", theta), ("b", b)],
            FamilySpec::BaseALinkedEit { gamma, delta, a, b } => {
                vec![("gamma", gamma), ("delta", delta), ("a", a), ("b", b)]
            }
            FamilySpec::Uniform { a, b } => vec![("a", a), ("b", b)],
        }
    }

    fn fail(&self, constraint: &str) -> Error {
        Error::Parameter {
            family: self.tag().to_string(),
            constraint: constraint.to_string(),
        }
    }

    /// Checks the family's parameter constraints.
    pub fn validate(&self) -> Result<()> {
        if self.params().iter().any(|(_, v)| !v.is_finite()) {
            return Err(self.fail("parameters must be finite"));
        }
        let ok = |cond: bool, msg: &str| if cond { Ok(()) } else { Err(self.fail(msg)) };
        match *self {
            FamilySpec::Type3Ev { gamma, b } => {
                ok(gamma > 0.0, "gamma > 0")?;
                ok(b >= 0.0, "b >= 0")
            }
            FamilySpec::Power { b, c } => {
                ok(b > 0.0, "b > 0")?;
                ok(c > 0.0, "c > 0")
            }
            FamilySpec::InverseWeibull { nu, delta } => {
                ok(nu > 0.0, "nu > 0")?;
                ok(delta > 0.0, "delta > 0")
            }
            FamilySpec::TruncEvPower { alpha, .. } => ok(alpha > 0.0, "alpha > 0"),
            FamilySpec::BaseALinkedRhr { theta, a, .. } => {
                ok(theta > 0.0, "theta > 0")?;
                ok(a > 1.0, "a > 1")
            }
            FamilySpec::ReflectedWeibull { theta, k } => {
                ok(theta > 0.0, "theta > 0")?;
                ok(k % 2 == 1, "k odd positive integer")
            }
            FamilySpec::FiniteRange { theta, b, k } => {
                ok(theta > 0.0, "theta > 0")?;
                ok(b > 0.0, "b > 0")?;
                ok(k >= 1, "k positive integer")
            }
            FamilySpec::LinearMit { xi, alpha, beta, b } => {
                ok(xi > 0.0, "xi > 0")?;
                if beta == 0.0 {
                    ok(alpha > 0.0, "alpha > 0 when beta = 0")
                } else {
                    ok(alpha + beta * b > 0.0, "alpha + beta b > 0")?;
                    ok(xi * beta < 1.0, "xi beta < 1")
                }
            }
            FamilySpec::ExpLinkedEit { theta, .. } => ok(theta > 0.0, "theta > 0"),
            FamilySpec::BaseALinkedEit { gamma, delta, a, .. } => {
                ok(gamma > 0.0, "gamma > 0")?;
                ok(delta > 0.0, "delta > 0")?;
                ok(a > 1.0, "a > 1")
            }
            FamilySpec::Uniform { a, b } => ok(a < b, "a < b"),
        }
    }

    fn from_params(tag: &str, params: &ParamMap) -> Result<FamilySpec> {
        let mut p = params.clone();
        let spec = match tag {
            "type3ev" => FamilySpec::Type3Ev {
                gamma: p.take("gamma")?,
                b: p.take("b")?,
            },
            "power" => FamilySpec::Power {
                b: p.take("b")?,
                c: p.take("c")?,
            },
            "invweibull" => FamilySpec::InverseWeibull {
                nu: p.take("nu")?,
                delta: p.take("delta")?,
            },
            "truncev" => FamilySpec::TruncEvPower {
                alpha: p.take("alpha")?,
                b: p.take("b")?,
            },
            "basearhr" => FamilySpec::BaseALinkedRhr {
                theta: p.take("theta")?,
                a: p.take("a")?,
                b: p.take("b")?,
            },
            "reflweibull" => FamilySpec::ReflectedWeibull {
                theta: p.take("theta")?,
                k: p.take_int_or("k", 1)?,
            },
            "finiterange" => FamilySpec::FiniteRange {
                theta: p.take("theta")?,
                b: p.take("b")?,
                k: p.take_int_or("k", 1)?,
            },
            "linearmit" => FamilySpec::LinearMit {
                xi: p.take("xi")?,
                alpha: p.take("alpha")?,
                beta: p.take("beta")?,
                b: p.take("b")?,
            },
            "expeit" => FamilySpec::ExpLinkedEit {
                theta: p.take("theta")?,
                b: p.take("b")?,
            },
            "baseaeit" => {
                let a = p.take("a")?;
                FamilySpec::BaseALinkedEit {
                    gamma: p.take_or("gamma", a.ln()),
                    delta: p.take("delta")?,
                    a,
                    b: p.take("b")?,
                }
            }
            "uniform" => FamilySpec::Uniform {
                a: p.take_or("a", 0.0),
                b: p.take("b")?,
            },
            other => {
                return Err(Error::Parse {
                    input: other.to_string(),
                    reason: format!("unknown family; expected one of {}", TAGS.join(", ")),
                })
            }
        };
        p.finish(tag)?;
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.tag())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses `family:key=value,...`; case-insensitive, keys in any order.
    fn from_str(s: &str) -> Result<Self> {
        let (tag, params) = parse_tagged(s)?;
        FamilySpec::from_params(&tag, &params)
    }
}

/// Named real parameters from the `tag:key=value,...` text form.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamMap {
    values: BTreeMap<String, f64>,
}

impl ParamMap {
    pub fn new() -> Self {
        ParamMap::default()
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.values.insert(key.to_string(), value);
        self
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn take(&mut self, key: &str) -> Result<f64> {
        self.values.remove(key).ok_or_else(|| Error::Parse {
            input: key.to_string(),
            reason: "missing required parameter".to_string(),
        })
    }

    pub fn take_or(&mut self, key: &str, default: f64) -> f64 {
        self.values.remove(key).unwrap_or(default)
    }

    pub fn take_int_or(&mut self, key: &str, default: u32) -> Result<u32> {
        match self.values.remove(key) {
            None => Ok(default),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => Ok(v as u32),
            Some(v) => Err(Error::Parse {
                input: format!("{key}={v}"),
                reason: "expected a nonnegative integer".to_string(),
            }),
        }
    }

    /// Errors if any parameter was not consumed.
    pub fn finish(self, context: &str) -> Result<()> {
        match self.values.keys().next() {
            None => Ok(()),
            Some(k) => Err(Error::Parse {
                input: k.clone(),
                reason: format!("unknown parameter for {context}"),
            }),
        }
    }
}

/// Splits `tag:key=value,key=value` into a lowercase tag and its parameters.
pub fn parse_tagged(s: &str) -> Result<(String, ParamMap)> {
    let s = s.trim().to_ascii_lowercase();
    let (tag, rest) = match s.split_once(':') {
        Some((t, r)) => (t.trim().to_string(), r),
        None => (s.clone(), ""),
    };
    if tag.is_empty() {
        return Err(Error::Parse {
            input: s,
            reason: "empty tag".to_string(),
        });
    }
    let mut params = ParamMap::new();
    for item in rest.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::Parse {
            input: item.to_string(),
            reason: "expected key=value".to_string(),
        })?;
        let value: f64 = v.trim().parse().map_err(|_| Error::Parse {
            input: item.to_string(),
            reason: "value is not a number".to_string(),
        })?;
        if params.values.insert(k.trim().to_string(), value).is_some() {
            return Err(Error::Parse {
                input: item.to_string(),
                reason: "duplicate parameter".to_string(),
            });
        }
    }
    Ok((tag, params))
}

/// Raw moments and derived ratios of a model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentSet {
    pub mu: f64,
    pub sigma2: f64,
    pub raw: BTreeMap<u32, f64>,
    /// `b / mu`, absent when `mu = 0` or `b` is infinite.
    pub eta: Option<f64>,
    /// `sigma / mu`, absent when `mu = 0`.
    pub c_ratio: Option<f64>,
}

/// A validated family instance. Immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DistributionModel {
    spec: FamilySpec,
    support: SupportInterval,
}

/// Builds a model after checking the family constraints.
pub fn make_distribution(spec: FamilySpec) -> Result<DistributionModel> {
    DistributionModel::new(spec)
}

impl FromStr for DistributionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DistributionModel::new(s.parse()?)
    }
}

impl DistributionModel {
    pub fn new(spec: FamilySpec) -> Result<Self> {
        spec.validate()?;
        let support = match spec {
            FamilySpec::Type3Ev { b, .. }
            | FamilySpec::TruncEvPower { b, .. }
            | FamilySpec::BaseALinkedRhr { b, .. }
            | FamilySpec::ExpLinkedEit { b, .. }
            | FamilySpec::BaseALinkedEit { b, .. } => SupportInterval {
                lower: f64::NEG_INFINITY,
                upper: b,
            },
            FamilySpec::Power { b, .. } | FamilySpec::FiniteRange { b, .. } => {
                SupportInterval { lower: 0.0, upper: b }
            }
            FamilySpec::InverseWeibull { .. } => SupportInterval {
                lower: 0.0,
                upper: f64::INFINITY,
            },
            FamilySpec::ReflectedWeibull { .. } => SupportInterval {
                lower: f64::NEG_INFINITY,
                upper: 0.0,
            },
            FamilySpec::LinearMit { alpha, beta, b, .. } => SupportInterval {
                lower: if beta > 0.0 {
                    -alpha / beta
                } else {
                    f64::NEG_INFINITY
                },
                upper: b,
            },
            FamilySpec::Uniform { a, b } => SupportInterval { lower: a, upper: b },
        };
        Ok(DistributionModel { spec, support })
    }

    pub fn spec(&self) -> &FamilySpec {
        &self.spec
    }

    pub fn support(&self) -> SupportInterval {
        self.support
    }

    /// `(1 - xi beta) / (xi beta)` and `alpha + beta b` for the sloped LinearMit cases.
    fn linear_mit_power(xi: f64, alpha: f64, beta: f64, b: f64) -> (f64, f64) {
        let slope = xi * beta;
        ((1.0 - slope) / slope, alpha + beta * b)
    }

    /// `ln F(t)` for `t` strictly inside the support (or at the upper end).
    fn log_cdf_inside(&self, t: f64) -> f64 {
        match self.spec {
            FamilySpec::Type3Ev { gamma, b } => gamma * (t - b),
            FamilySpec::Power { b, c } => c * (t / b).ln(),
            FamilySpec::InverseWeibull { nu, delta } => -nu * t.powf(-delta),
            FamilySpec::TruncEvPower { alpha, b } => -alpha * ((-t).exp() - (-b).exp()),
            FamilySpec::BaseALinkedRhr { theta, a, b } => -theta * (a.powf(-t) - a.powf(-b)),
            FamilySpec::ReflectedWeibull { theta, k } => -theta * t.abs().powi(k as i32 + 1),
            FamilySpec::FiniteRange { theta, b, k } => {
                let e = k as i32 + 1;
                k as f64 * (t / b).ln() + theta * (t.powi(e) - b.powi(e))
            }
            FamilySpec::LinearMit { xi, alpha, beta, b } => {
                if beta == 0.0 {
                    (t - b) / (xi * alpha)
                } else {
                    let (r, s) = Self::linear_mit_power(xi, alpha, beta, b);
                    r * ((alpha + beta * t) / s).ln()
                }
            }
            FamilySpec::ExpLinkedEit { theta, b } => (t - b) + theta * (t.exp() - b.exp()),
            FamilySpec::BaseALinkedEit { gamma, delta, a, b } => {
                gamma * (t - b) + delta * (a.powf(t) - a.powf(b))
            }
            FamilySpec::Uniform { a, b } => ((t - a) / (b - a)).ln(),
        }
    }

    /// `ln F(t)`: `-inf` at or below the lower end, 0 at or above the upper end.
    pub fn log_cdf(&self, t: f64) -> f64 {
        if t <= self.support.lower {
            f64::NEG_INFINITY
        } else if t >= self.support.upper {
            0.0
        } else {
            self.log_cdf_inside(t).min(0.0)
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        if t <= self.support.lower {
            0.0
        } else if t >= self.support.upper {
            1.0
        } else {
            self.log_cdf_inside(t).exp().min(1.0)
        }
    }

    /// Same as [`cdf`](Self::cdf); total on the real line.
    pub fn cdf_at(&self, t: f64) -> f64 {
        self.cdf(t)
    }

    /// Density on `(a, b]` (the left limit at `b`), zero elsewhere.
    pub fn density(&self, t: f64) -> f64 {
        if t <= self.support.lower || t > self.support.upper {
            return 0.0;
        }
        match self.spec {
            FamilySpec::Type3Ev { gamma, b } => gamma * (gamma * (t - b)).exp(),
            FamilySpec::Power { b, c } => c * t.powf(c - 1.0) / b.powf(c),
            FamilySpec::InverseWeibull { nu, delta } => {
                nu * delta * t.powf(-delta - 1.0) * (-nu * t.powf(-delta)).exp()
            }
            FamilySpec::TruncEvPower { alpha, b } => {
                alpha * (-t - alpha * ((-t).exp() - (-b).exp())).exp()
            }
            FamilySpec::BaseALinkedRhr { theta, a, b } => {
                let lna = a.ln();
                theta * lna * (-t * lna - theta * (a.powf(-t) - a.powf(-b))).exp()
            }
            FamilySpec::ReflectedWeibull { theta, k } => {
                let y = t.abs();
                theta * (k + 1) as f64 * y.powi(k as i32) * (-theta * y.powi(k as i32 + 1)).exp()
            }
            FamilySpec::FiniteRange { theta, b, k } => {
                let e = k as i32 + 1;
                let kf = k as f64;
                let base = (kf * t.powi(k as i32 - 1) + theta * (k + 1) as f64 * t.powi(2 * k as i32))
                    / b.powi(k as i32);
                base * (theta * (t.powi(e) - b.powi(e))).exp()
            }
            FamilySpec::LinearMit { xi, alpha, beta, b } => {
                if beta == 0.0 {
                    let scale = xi * alpha;
                    ((t - b) / scale).exp() / scale
                } else {
                    let (r, s) = Self::linear_mit_power(xi, alpha, beta, b);
                    let u = alpha + beta * t;
                    r * beta * u.powf(r - 1.0) / s.powf(r)
                }
            }
            FamilySpec::ExpLinkedEit { theta, b } => {
                let et = t.exp();
                (1.0 + theta * et) * ((t - b) + theta * (et - b.exp())).exp()
            }
            FamilySpec::BaseALinkedEit { gamma, delta, a, b } => {
                let at = a.powf(t);
                (gamma + delta * a.ln() * at) * (gamma * (t - b) + delta * (at - a.powf(b))).exp()
            }
            FamilySpec::Uniform { a, b } => 1.0 / (b - a),
        }
    }

    /// Density at an interior point.
    pub fn pdf_at(&self, t: f64) -> Result<f64> {
        if !self.support.contains_open(t) {
            return Err(self.support_error(t));
        }
        Ok(self.density(t))
    }

    pub(crate) fn support_error(&self, t: f64) -> Error {
        Error::Support {
            t,
            lower: self.support.lower,
            upper: self.support.upper,
        }
    }

    /// Inverse CDF; closed form where available, safeguarded Newton otherwise.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(p));
        }
        let lp = p.ln();
        let x = match self.spec {
            FamilySpec::Type3Ev { gamma, b } => b + lp / gamma,
            FamilySpec::Power { b, c } => b * p.powf(1.0 / c),
            FamilySpec::InverseWeibull { nu, delta } => (-lp / nu).powf(-1.0 / delta),
            FamilySpec::TruncEvPower { alpha, b } => -((-b).exp() - lp / alpha).ln(),
            FamilySpec::BaseALinkedRhr { theta, a, b } => {
                -(a.powf(-b) - lp / theta).ln() / a.ln()
            }
            FamilySpec::ReflectedWeibull { theta, k } => {
                -(-lp / theta).powf(1.0 / (k + 1) as f64)
            }
            FamilySpec::LinearMit { xi, alpha, beta, b } => {
                if beta == 0.0 {
                    b + xi * alpha * lp
                } else {
                    let (r, s) = Self::linear_mit_power(xi, alpha, beta, b);
                    (s * (lp / r).exp() - alpha) / beta
                }
            }
            FamilySpec::Uniform { a, b } => a + p * (b - a),
            FamilySpec::FiniteRange { b, k, .. } => {
                self.solve_log_cdf(lp, b * p.powf(1.0 / k as f64), b)
            }
            FamilySpec::ExpLinkedEit { b, .. } => self.solve_log_cdf(lp, b + lp, b),
            FamilySpec::BaseALinkedEit { gamma, b, .. } => self.solve_log_cdf(lp, b + lp / gamma, b),
        };
        Ok(x)
    }

    /// Root of `ln F(x) = target` in `[lo, hi]`, where `ln F(lo) <= target`.
    fn solve_log_cdf(&self, target: f64, mut lo: f64, mut hi: f64) -> f64 {
        let mut x = 0.5 * (lo + hi);
        for _ in 0..300 {
            let g = self.log_cdf_inside(x) - target;
            if g == 0.0 {
                return x;
            }
            if g < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let slope = self.rhr_closed(x).unwrap_or(f64::NAN);
            let newton = x - g / slope;
            let next = if newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            let scale = x.abs().max(1e-300);
            if (next - x).abs() <= 4.0 * f64::EPSILON * scale || hi - lo <= 4.0 * f64::EPSILON * scale {
                return next;
            }
            x = next;
        }
        x
    }

    /// Closed-form reversed hazard rate `f/F`, valid on `(a, b]`.
    pub fn rhr_closed(&self, t: f64) -> Option<f64> {
        let v = match self.spec {
            FamilySpec::Type3Ev { gamma, .. } => gamma,
            FamilySpec::Power { c, .. } => c / t,
            FamilySpec::InverseWeibull { nu, delta } => nu * delta * t.powf(-delta - 1.0),
            FamilySpec::TruncEvPower { alpha, .. } => alpha * (-t).exp(),
            FamilySpec::BaseALinkedRhr { theta, a, .. } => theta * a.ln() * a.powf(-t),
            FamilySpec::ReflectedWeibull { theta, k } => {
                theta * (k + 1) as f64 * t.abs().powi(k as i32)
            }
            FamilySpec::FiniteRange { theta, k, .. } => {
                k as f64 / t + theta * (k + 1) as f64 * t.powi(k as i32)
            }
            FamilySpec::LinearMit { xi, alpha, beta, .. } => (1.0 - xi * beta) / (xi * (alpha + beta * t)),
            FamilySpec::ExpLinkedEit { theta, .. } => 1.0 + theta * t.exp(),
            FamilySpec::BaseALinkedEit { gamma, delta, a, .. } => gamma + delta * a.ln() * a.powf(t),
            FamilySpec::Uniform { a, .. } => 1.0 / (t - a),
        };
        Some(v)
    }

    /// Closed-form expected inactivity time, where one has been derived.
    pub fn eit_closed(&self, t: f64) -> Option<f64> {
        match self.spec {
            FamilySpec::Type3Ev { gamma, .. } => Some(1.0 / gamma),
            FamilySpec::Power { c, .. } => Some(t / (c + 1.0)),
            FamilySpec::Uniform { a, .. } => Some((t - a) / 2.0),
            FamilySpec::LinearMit { xi, alpha, beta, .. } => Some(xi * (alpha + beta * t)),
            FamilySpec::FiniteRange { theta, k, .. } => {
                let z = theta * t.powi(k as i32 + 1);
                Some(-(-z).exp_m1() / (theta * (k + 1) as f64 * t.powi(k as i32)))
            }
            FamilySpec::ExpLinkedEit { theta, .. } => {
                let z = theta * t.exp();
                Some(-(-z).exp_m1() / z)
            }
            FamilySpec::BaseALinkedEit { gamma, delta, a, .. } if (gamma - a.ln()).abs() <= 1e-14 * gamma => {
                let z = delta * a.powf(t);
                Some(-(-z).exp_m1() / (z * a.ln()))
            }
            FamilySpec::ReflectedWeibull { theta, k } => {
                // m(t) = e^z Γ(s, z) / ((k+1) θ^s) with s = 1/(k+1), z = θ|t|^(k+1)
                let s = 1.0 / (k + 1) as f64;
                let z = theta * t.abs().powi(k as i32 + 1);
                Some(scaled_upper_gamma(s, z) / ((k + 1) as f64 * theta.powf(s)))
            }
            _ => None,
        }
    }

    /// Closed-form reversed aging intensity `(t - b) phi(t) / ln F(t)` on `(a, b)`.
    pub fn rai_closed(&self, t: f64) -> Option<f64> {
        let b = self.support.upper;
        if !b.is_finite() {
            return None;
        }
        let phi = self.rhr_closed(t)?;
        let lf = self.log_cdf_inside(t);
        if lf.abs() < 1e-12 {
            return Some(1.0);
        }
        Some((t - b) * phi / lf)
    }

    pub fn rhr_shape(&self) -> RhrShape {
        match self.spec {
            FamilySpec::Type3Ev { .. } => RhrShape::Constant,
            FamilySpec::Power { .. } => RhrShape::Power { exponent: -1.0 },
            FamilySpec::InverseWeibull { delta, .. } => RhrShape::Power {
                exponent: -delta - 1.0,
            },
            FamilySpec::TruncEvPower { .. } => RhrShape::ExpDecay {
                base: std::f64::consts::E,
            },
            FamilySpec::BaseALinkedRhr { a, .. } => RhrShape::ExpDecay { base: a },
            FamilySpec::ReflectedWeibull { k, .. } => RhrShape::Power { exponent: k as f64 },
            FamilySpec::LinearMit { beta, alpha, .. } => {
                if beta == 0.0 {
                    RhrShape::Constant
                } else if alpha == 0.0 {
                    RhrShape::Power { exponent: -1.0 }
                } else {
                    RhrShape::General
                }
            }
            FamilySpec::Uniform { a: 0.0, .. } => RhrShape::Power { exponent: -1.0 },
            _ => RhrShape::General,
        }
    }

    pub fn eit_shape(&self) -> EitShape {
        match self.spec {
            FamilySpec::Type3Ev { .. } => EitShape::Affine {
                alpha: 1.0,
                beta: 0.0,
            },
            FamilySpec::Power { .. } => EitShape::Affine {
                alpha: 0.0,
                beta: 1.0,
            },
            FamilySpec::LinearMit { alpha, beta, .. } => EitShape::Affine { alpha, beta },
            FamilySpec::Uniform { a, .. } => EitShape::Affine {
                alpha: -a,
                beta: 1.0,
            },
            _ => EitShape::General,
        }
    }

    /// k-th raw moment; closed form where derived, quadrature otherwise.
    pub fn raw_moment(&self, k: u32) -> Result<f64> {
        match self.raw_moment_closed(k) {
            Some(r) => r,
            None => self.raw_moment_numeric(k, &Tolerance::default()),
        }
    }

    /// k-th raw moment by quadrature only.
    pub fn raw_moment_numeric(&self, k: u32, tol: &Tolerance) -> Result<f64> {
        if k == 0 {
            return Ok(1.0);
        }
        let r = quadrature::expectation(self, |x| x.powi(k as i32), tol);
        match r.status {
            QuadStatus::Converged => Ok(r.value),
            QuadStatus::Divergent => Err(Error::DivergentMoment(k)),
            QuadStatus::MaxDepth => Err(Error::Quadrature {
                status: r.status,
                value: r.value,
            }),
        }
    }

    fn raw_moment_closed(&self, k: u32) -> Option<Result<f64>> {
        if k == 0 {
            return Some(Ok(1.0));
        }
        let kf = k as f64;
        let v = match self.spec {
            FamilySpec::Type3Ev { gamma, b } => shifted_exponential_moment(b, 1.0 / gamma, k),
            FamilySpec::LinearMit { xi, alpha, beta: 0.0, b } => {
                shifted_exponential_moment(b, xi * alpha, k)
            }
            FamilySpec::LinearMit { xi, alpha, beta, b } => {
                // U = alpha + beta X has E[U^j] = s^j r / (r + j)
                let (r, s) = Self::linear_mit_power(xi, alpha, beta, b);
                if r < 0.0 && r + kf >= 0.0 {
                    return Some(Err(Error::DivergentMoment(k)));
                }
                let mut acc = 0.0;
                for j in 0..=k {
                    let eu = s.powi(j as i32) * r / (r + j as f64);
                    acc += binomial(k, j) * eu * (-alpha).powi((k - j) as i32);
                }
                acc / beta.powi(k as i32)
            }
            FamilySpec::Power { b, c } => c * b.powi(k as i32) / (c + kf),
            FamilySpec::Uniform { a, b } => {
                (b.powi(k as i32 + 1) - a.powi(k as i32 + 1)) / ((kf + 1.0) * (b - a))
            }
            FamilySpec::InverseWeibull { nu, delta } => {
                if kf >= delta {
                    return Some(Err(Error::DivergentMoment(k)));
                }
                nu.powf(kf / delta) * gamma(1.0 - kf / delta)
            }
            FamilySpec::ReflectedWeibull { theta, k: shape } => {
                let e = (shape + 1) as f64;
                let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
                sign * theta.powf(-kf / e) * gamma(1.0 + kf / e)
            }
            _ => return None,
        };
        Some(Ok(v))
    }

    /// Mean, variance and the requested raw moments.
    pub fn moment_set(&self, orders: &[u32]) -> Result<MomentSet> {
        let mut raw = BTreeMap::new();
        for &k in orders.iter().chain([1u32, 2].iter()) {
            if let std::collections::btree_map::Entry::Vacant(e) = raw.entry(k) {
                e.insert(self.raw_moment(k)?);
            }
        }
        let mu = raw[&1];
        let sigma2 = raw[&2] - mu * mu;
        let (eta, c_ratio) = if mu != 0.0 {
            let b = self.support.upper;
            (
                b.is_finite().then_some(b / mu),
                Some(sigma2.max(0.0).sqrt() / mu),
            )
        } else {
            (None, None)
        };
        Ok(MomentSet {
            mu,
            sigma2,
            raw,
            eta,
            c_ratio,
        })
    }
}

/// Raw moment of `b - scale * E` with `E` standard exponential.
fn shifted_exponential_moment(b: f64, scale: f64, k: u32) -> f64 {
    let mut acc = 0.0;
    let mut fact = 1.0;
    for j in 0..=k {
        if j > 0 {
            fact *= j as f64;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        acc += binomial(k, j) * b.powi((k - j) as i32) * sign * fact * scale.powi(j as i32);
    }
    acc
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `e^z Γ(s, z)` for `0 < s < 1`, stable for large `z`.
fn scaled_upper_gamma(s: f64, z: f64) -> f64 {
    if z < 50.0 {
        return gamma(s) * gamma_ur(s, z) * z.exp();
    }
    // Asymptotic series z^(s-1) Σ (s-1)(s-2)...(s-j) / z^j
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..30 {
        term *= (s - j as f64) / z;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    z.powf(s - 1.0) * sum
}
