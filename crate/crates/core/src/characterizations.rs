//! The twenty characterization inequalities as checkable specs.
//!
//! Every check is a Cauchy–Schwarz bound, either in product form
//! `E[w1] E[w2] >= rhs` or as a single expectation against a moment
//! expression. Verdicts compare `lhs / rhs` with 1, which is the direction
//! Cauchy–Schwarz guarantees whatever the sign of `rhs`. When `rhs < 0`
//! (moment-form checks on nonpositive supports) that can disagree with the
//! inequality read literally; `printed_direction_holds` records the literal
//! reading separately.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::distributions::{
    parse_tagged, DistributionModel, EitShape, FamilySpec, ParamMap, RhrShape, SupportInterval,
};
use crate::error::{Error, Result};
use crate::functionals;
use crate::quadrature::{self, QuadResult, QuadStatus, Tolerance};

pub const DEFAULT_EQ_TOL: f64 = 1e-4;

#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TheoremId {
    T2_1,
    T2_2,
    T2_4,
    T2_5,
    T2_6,
    T2_7,
    T2_8,
    T2_9,
    T2_10,
    T3_1,
    T3_2,
    T3_3,
    T3_4,
    T3_5,
    T3_6,
    T3_7,
    T4_1,
    T4_2,
    T4_3,
    T4_4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 20] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::T2_4,
        TheoremId::T2_5,
        TheoremId::T2_6,
        TheoremId::T2_7,
        TheoremId::T2_8,
        TheoremId::T2_9,
        TheoremId::T2_10,
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T3_4,
        TheoremId::T3_5,
        TheoremId::T3_6,
        TheoremId::T3_7,
        TheoremId::T4_1,
        TheoremId::T4_2,
        TheoremId::T4_3,
        TheoremId::T4_4,
    ];

    /// Checks whose printed equality family does not reproduce the
    /// inactivity-time form required for equality. Never asserted.
    pub fn is_suspect(self) -> bool {
        matches!(
            self,
            TheoremId::T3_2 | TheoremId::T3_3 | TheoremId::T3_6 | TheoremId::T3_7
        )
    }

    fn name(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2_1",
            TheoremId::T2_2 => "T2_2",
            TheoremId::T2_4 => "T2_4",
            TheoremId::T2_5 => "T2_5",
            TheoremId::T2_6 => "T2_6",
            TheoremId::T2_7 => "T2_7",
            TheoremId::T2_8 => "T2_8",
            TheoremId::T2_9 => "T2_9",
            TheoremId::T2_10 => "T2_10",
            TheoremId::T3_1 => "T3_1",
            TheoremId::T3_2 => "T3_2",
            TheoremId::T3_3 => "T3_3",
            TheoremId::T3_4 => "T3_4",
            TheoremId::T3_5 => "T3_5",
            TheoremId::T3_6 => "T3_6",
            TheoremId::T3_7 => "T3_7",
            TheoremId::T4_1 => "T4_1",
            TheoremId::T4_2 => "T4_2",
            TheoremId::T4_3 => "T4_3",
            TheoremId::T4_4 => "T4_4",
        }
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('.', "_");
        TheoremId::ALL
            .iter()
            .copied()
            .find(|id| id.name() == norm)
            .ok_or_else(|| Error::Parse {
                input: s.to_string(),
                reason: "unknown theorem id".to_string(),
            })
    }
}

/// The x-dependent factor of a weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scale {
    One,
    /// `x^e`
    Pow(i32),
    /// `base^(sign x)`
    BaseExp { base: f64, sign: f64 },
    /// `(alpha + beta x)^e`
    Affine { alpha: f64, beta: f64, power: i32 },
}

/// `scale(x) * phi^rhr * m^eit * L^rai`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weight {
    pub scale: Scale,
    pub rhr: i32,
    pub eit: i32,
    pub rai: i32,
}

impl Weight {
    fn new(scale: Scale, rhr: i32, eit: i32, rai: i32) -> Self {
        Weight {
            scale,
            rhr,
            eit,
            rai,
        }
    }

    /// Value at `x`, or NaN where a functional cannot be evaluated.
    pub fn eval(&self, model: &DistributionModel, x: f64, inner: &Tolerance) -> f64 {
        self.try_eval(model, x, inner).unwrap_or(f64::NAN)
    }

    fn try_eval(&self, model: &DistributionModel, x: f64, inner: &Tolerance) -> Result<f64> {
        let mut v = match self.scale {
            Scale::One => 1.0,
            Scale::Pow(e) => x.powi(e),
            Scale::BaseExp { base, sign } => (sign * base.ln() * x).exp(),
            Scale::Affine { alpha, beta, power } => (alpha + beta * x).powi(power),
        };
        if self.rhr != 0 {
            v *= functionals::rhr(model, x)?.powi(self.rhr);
        }
        if self.eit != 0 {
            let m = match model.eit_closed(x) {
                Some(m) => m,
                None => functionals::eit_numeric(model, x, inner)?,
            };
            v *= m.powi(self.eit);
        }
        if self.rai != 0 {
            v *= functionals::rai(model, x)?.powi(self.rai);
        }
        Ok(v)
    }
}

fn power_label(out: &mut Vec<String>, base: &str, e: i32) {
    match e {
        0 => {}
        1 => out.push(base.to_string()),
        _ => out.push(format!("{base}^{e}")),
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.scale {
            Scale::One => {}
            Scale::Pow(e) => power_label(&mut parts, "x", e),
            Scale::BaseExp { base, sign } => {
                let b = if base == std::f64::consts::E {
                    "e".to_string()
                } else {
                    format!("{base}")
                };
                let x = if sign < 0.0 { "-x" } else { "x" };
                parts.push(format!("{b}^{x}"));
            }
            Scale::Affine { alpha, beta, power } => {
                power_label(&mut parts, &format!("({alpha}+{beta}x)"), power)
            }
        }
        power_label(&mut parts, "phi", self.rhr);
        power_label(&mut parts, "m", self.eit);
        power_label(&mut parts, "L", self.rai);
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Right-hand side of a check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rhs {
    One,
    /// `mu_k^2`
    MomentSquared(u32),
    /// `2 / (eta^2 - (1 + c^2))`
    MeanRatioForm,
    /// `(k + 1) mu_k^2 / (b^(k+1) - mu_(k+1))`
    ShiftedMomentForm(u32),
    /// `2 / (b^2 - (1 + c^2) mu^2)`
    SecondMomentForm,
    /// `(k + 1) / (b^(k+1) - mu_(k+1))`
    ReciprocalMomentForm(u32),
}

/// Sign condition on `x` (or on `alpha + beta x`) over the open support.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignRequirement {
    Any,
    Nonnegative,
    SignDefinite,
    AffineSignDefinite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Requirement {
    pub sign: SignRequirement,
    pub finite_b: bool,
}

/// One theorem with its integer, base and affine parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckSpec {
    pub id: TheoremId,
    pub k: Option<u32>,
    pub base: Option<f64>,
    pub affine: Option<(f64, f64)>,
}

impl CheckSpec {
    /// The spec with its default parameters.
    pub fn new(id: TheoremId) -> Self {
        use TheoremId::*;
        let k = match id {
            T2_4 | T2_8 | T3_3 => Some(2),
            T2_10 => Some(3),
            T4_2 | T4_4 => Some(1),
            _ => None,
        };
        let base = matches!(id, T2_6 | T3_7).then_some(2.0);
        let affine = (id == T3_5).then_some((1.0, 0.5));
        CheckSpec {
            id,
            k,
            base,
            affine,
        }
    }

    pub fn with_k(mut self, k: u32) -> Result<Self> {
        if self.k.is_none() {
            return Err(self.param_error("takes no k"));
        }
        self.k = Some(k);
        self.validate()?;
        Ok(self)
    }

    pub fn with_base(mut self, a: f64) -> Result<Self> {
        if self.base.is_none() {
            return Err(self.param_error("takes no base"));
        }
        self.base = Some(a);
        self.validate()?;
        Ok(self)
    }

    pub fn with_affine(mut self, alpha: f64, beta: f64) -> Result<Self> {
        if self.affine.is_none() {
            return Err(self.param_error("takes no alpha/beta"));
        }
        self.affine = Some((alpha, beta));
        self.validate()?;
        Ok(self)
    }

    fn param_error(&self, constraint: &str) -> Error {
        Error::Parameter {
            family: self.id.to_string(),
            constraint: constraint.to_string(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        use TheoremId::*;
        if let Some(k) = self.k {
            let ok = match self.id {
                T2_4 => k >= 2,
                T2_8 | T3_3 => k >= 1,
                T2_10 => k % 2 == 1,
                _ => true,
            };
            if !ok {
                return Err(self.param_error(match self.id {
                    T2_4 => "k >= 2",
                    T2_10 => "k odd and positive",
                    _ => "k >= 1",
                }));
            }
        }
        if let Some(a) = self.base {
            if !(a > 1.0 && a.is_finite()) {
                return Err(self.param_error("base a > 1"));
            }
        }
        if let Some((alpha, beta)) = self.affine {
            if !(alpha.is_finite() && beta.is_finite()) || (alpha == 0.0 && beta == 0.0) {
                return Err(self.param_error("alpha, beta finite and not both zero"));
            }
        }
        Ok(())
    }

    fn k_or(&self) -> i32 {
        self.k.unwrap_or(1) as i32
    }

    fn base_or(&self) -> f64 {
        self.base.unwrap_or(2.0)
    }

    /// The one or two expectations multiplied on the left.
    pub fn weights(&self) -> Vec<Weight> {
        use TheoremId::*;
        let k = self.k_or();
        let e = std::f64::consts::E;
        let w = Weight::new;
        let exp = |base: f64, sign: f64| Scale::BaseExp { base, sign };
        match self.id {
            T2_1 => vec![w(Scale::One, -1, 0, 0), w(Scale::One, 1, 0, 0)],
            T2_2 => vec![w(Scale::Pow(-1), -1, 0, 0), w(Scale::Pow(1), 1, 0, 0)],
            T2_4 => vec![w(Scale::Pow(-k), -1, 0, 0), w(Scale::Pow(k), 1, 0, 0)],
            T2_5 => vec![w(exp(e, -1.0), -1, 0, 0), w(exp(e, 1.0), 1, 0, 0)],
            T2_6 => {
                let a = self.base_or();
                vec![w(exp(a, -1.0), -1, 0, 0), w(exp(a, 1.0), 1, 0, 0)]
            }
            T2_7 => vec![w(Scale::Pow(1), 1, 0, 0)],
            T2_8 => vec![w(Scale::Pow(k), 1, 0, 0)],
            T2_9 => vec![w(Scale::Pow(-1), 1, 0, 0)],
            T2_10 => vec![w(Scale::Pow(-k), 1, 0, 0)],
            T3_1 => vec![w(Scale::One, 0, -1, 0), w(Scale::One, 0, 1, 0)],
            T3_2 => vec![w(Scale::Pow(-1), 0, -1, 0), w(Scale::Pow(1), 0, 1, 0)],
            T3_3 => vec![w(Scale::Pow(-k), 0, -1, 0), w(Scale::Pow(k), 0, 1, 0)],
            T3_4 => vec![w(Scale::Pow(-1), 0, 1, 0), w(Scale::Pow(1), 0, -1, 0)],
            T3_5 => {
                let (alpha, beta) = self.affine.unwrap_or((1.0, 0.5));
                let aff = |power| Scale::Affine { alpha, beta, power };
                vec![w(aff(-1), 0, 1, 0), w(aff(1), 0, -1, 0)]
            }
            T3_6 => vec![w(exp(e, -1.0), 0, -1, 0), w(exp(e, 1.0), 0, 1, 0)],
            T3_7 => {
                let a = self.base_or();
                vec![w(exp(a, -1.0), 0, -1, 0), w(exp(a, 1.0), 0, 1, 0)]
            }
            T4_1 => vec![w(Scale::One, -1, 1, 0), w(Scale::One, 1, -1, 0)],
            T4_2 => vec![w(Scale::Pow(k), -1, 1, 0), w(Scale::Pow(k), 1, -1, 0)],
            T4_3 => vec![w(Scale::One, -1, 0, 1), w(Scale::One, 1, 0, -1)],
            T4_4 => vec![w(Scale::Pow(k), -1, 0, 1), w(Scale::Pow(k), 1, 0, -1)],
        }
    }

    pub fn rhs(&self) -> Rhs {
        use TheoremId::*;
        let k = self.k.unwrap_or(1);
        match self.id {
            T2_7 => Rhs::MeanRatioForm,
            T2_8 => Rhs::ShiftedMomentForm(k),
            T2_9 => Rhs::SecondMomentForm,
            T2_10 => Rhs::ReciprocalMomentForm(k),
            T4_2 | T4_4 => Rhs::MomentSquared(k),
            _ => Rhs::One,
        }
    }

    pub fn requirement(&self) -> Requirement {
        use SignRequirement::*;
        use TheoremId::*;
        let odd_k = self.k.is_some_and(|k| k % 2 == 1);
        let odd_sign = if odd_k { SignDefinite } else { Any };
        let (sign, finite_b) = match self.id {
            T2_2 | T2_4 | T3_2 | T3_3 => (Nonnegative, false),
            T2_7 | T2_9 => (SignDefinite, true),
            T2_8 | T2_10 => (odd_sign, true),
            T3_4 => (SignDefinite, false),
            T3_5 => (AffineSignDefinite, false),
            T4_2 => (odd_sign, false),
            T4_3 => (Any, true),
            T4_4 => (odd_sign, true),
            _ => (Any, false),
        };
        Requirement { sign, finite_b }
    }

    /// Whether the support of `model` satisfies the requirement.
    pub fn applies_to(&self, model: &DistributionModel) -> bool {
        let s = model.support();
        let req = self.requirement();
        if req.finite_b && !s.has_finite_upper() {
            return false;
        }
        match req.sign {
            SignRequirement::Any => true,
            SignRequirement::Nonnegative => s.is_nonnegative(),
            SignRequirement::SignDefinite => s.is_nonnegative() || s.is_nonpositive(),
            SignRequirement::AffineSignDefinite => {
                let (alpha, beta) = self.affine.unwrap_or((1.0, 0.5));
                affine_sign_definite(alpha, beta, s)
            }
        }
    }

    /// Whether `model` is a member of this check's equality family, judged
    /// from the functional form of its reversed hazard rate or inactivity time.
    pub fn expects_equality(&self, model: &DistributionModel) -> bool {
        use TheoremId::*;
        if self.id.is_suspect() || !self.applies_to(model) {
            return false;
        }
        let k = self.k.unwrap_or(1) as f64;
        let rhr = model.rhr_shape();
        let power = |p: f64| matches!(rhr, RhrShape::Power { exponent } if close(exponent, p));
        match self.id {
            T2_1 | T2_7 | T2_8 | T4_1 | T4_2 | T4_3 | T4_4 => rhr == RhrShape::Constant,
            T2_2 => power(-1.0),
            T2_4 => power(-k),
            T2_9 => power(1.0) && model.support().is_nonpositive(),
            T2_10 => power(k) && model.support().is_nonpositive(),
            T2_5 => matches!(rhr, RhrShape::ExpDecay { base } if close(base, std::f64::consts::E)),
            T2_6 => matches!(rhr, RhrShape::ExpDecay { base } if close(base, self.base_or())),
            T3_1 => matches!(model.eit_shape(), EitShape::Affine { beta, .. } if beta == 0.0),
            T3_4 => matches!(
                model.eit_shape(),
                EitShape::Affine { alpha, beta } if alpha == 0.0 && beta != 0.0
            ),
            T3_5 => {
                let (a0, b0) = self.affine.unwrap_or((1.0, 0.5));
                match model.eit_shape() {
                    EitShape::Affine { alpha, beta } => {
                        let cross = alpha * b0 - beta * a0;
                        let scale = (alpha.hypot(beta)) * (a0.hypot(b0));
                        cross.abs() <= 1e-12 * scale && alpha * a0 + beta * b0 > 0.0
                    }
                    EitShape::General => false,
                }
            }
            T3_2 | T3_3 | T3_6 | T3_7 => false,
        }
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

/// Sign of `alpha + beta x` at a support endpoint, taking limits at infinity.
fn affine_end(alpha: f64, beta: f64, x: f64) -> f64 {
    if x.is_infinite() {
        if beta == 0.0 {
            alpha
        } else {
            beta * x
        }
    } else {
        alpha + beta * x
    }
}

fn affine_sign_definite(alpha: f64, beta: f64, s: SupportInterval) -> bool {
    let lo = affine_end(alpha, beta, s.lower);
    let hi = affine_end(alpha, beta, s.upper);
    (lo >= 0.0 && hi >= 0.0 && (lo > 0.0 || hi > 0.0))
        || (lo <= 0.0 && hi <= 0.0 && (lo < 0.0 || hi < 0.0))
}

impl fmt::Display for CheckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        let mut parts = Vec::new();
        if let Some(k) = self.k {
            parts.push(format!("k={k}"));
        }
        if let Some(a) = self.base {
            parts.push(format!("a={a}"));
        }
        if let Some((alpha, beta)) = self.affine {
            parts.push(format!("alpha={alpha}"));
            parts.push(format!("beta={beta}"));
        }
        if !parts.is_empty() {
            write!(f, ":{}", parts.join(","))?;
        }
        Ok(())
    }
}

/// `T2_4`, `T2_4:k=3`, `T2_6:a=3`, `T3_5:alpha=1,beta=-0.5`.
impl FromStr for CheckSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (tag, mut params) = parse_tagged(s)?;
        let mut spec = CheckSpec::new(tag.parse()?);
        if spec.k.is_some() {
            let k = spec.k.unwrap_or(1);
            spec.k = Some(params.take_int_or("k", k)?);
        }
        if let Some(a) = spec.base {
            spec.base = Some(params.take_or("a", a));
        }
        if let Some((alpha, beta)) = spec.affine {
            spec.affine = Some((params.take_or("alpha", alpha), params.take_or("beta", beta)));
        }
        params.finish(&spec.id.to_string())?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Exactly one spec per theorem, with default parameters.
pub fn theorem_catalog() -> Vec<CheckSpec> {
    TheoremId::ALL.iter().map(|&id| CheckSpec::new(id)).collect()
}

/// The model for which the check is claimed to be tight. Parameters not in
/// `params` take defaults; unknown keys are rejected.
pub fn equality_family(spec: &CheckSpec, params: &ParamMap) -> Result<DistributionModel> {
    use TheoremId::*;
    let mut p = params.clone();
    let k = spec.k.unwrap_or(1);
    let family = match spec.id {
        T2_1 | T2_7 | T2_8 | T3_1 | T4_2 | T4_3 | T4_4 => FamilySpec::Type3Ev {
            gamma: p.take_or("gamma", 1.0),
            b: p.take_or("b", 0.0),
        },
        T4_1 => {
            let mu = p.take_or("mu", -1.0);
            let b = p.take_or("b", 0.0);
            FamilySpec::Type3Ev {
                gamma: 1.0 / (b - mu),
                b,
            }
        }
        T2_2 => FamilySpec::Power {
            b: p.take_or("b", 1.0),
            c: p.take_or("c", 2.0),
        },
        T2_4 => {
            let theta = p.take_or("theta", 1.0);
            let d = (k - 1) as f64;
            FamilySpec::InverseWeibull {
                nu: theta / d,
                delta: d,
            }
        }
        T2_5 => FamilySpec::TruncEvPower {
            alpha: p.take_or("alpha", 1.0),
            b: p.take_or("b", 0.0),
        },
        T2_6 => FamilySpec::BaseALinkedRhr {
            theta: p.take_or("theta", 1.0),
            a: spec.base_or(),
            b: p.take_or("b", 0.0),
        },
        T2_9 | T2_10 => FamilySpec::ReflectedWeibull {
            theta: p.take_or("theta", 0.5),
            k: if spec.id == T2_9 { 1 } else { k },
        },
        T3_2 | T3_3 => FamilySpec::FiniteRange {
            theta: p.take_or("theta", 0.5),
            b: p.take_or("b", 1.0),
            k: if spec.id == T3_2 { 1 } else { k },
        },
        T3_4 => FamilySpec::LinearMit {
            xi: p.take_or("xi", 1.0),
            alpha: 0.0,
            beta: p.take_or("beta", 0.5),
            b: p.take_or("b", 1.0),
        },
        T3_5 => {
            let (alpha, beta) = spec.affine.unwrap_or((1.0, 0.5));
            FamilySpec::LinearMit {
                xi: p.take_or("xi", 0.5),
                alpha,
                beta,
                b: p.take_or("b", 0.0),
            }
        }
        T3_6 => FamilySpec::ExpLinkedEit {
            theta: p.take_or("theta", 1.0),
            b: p.take_or("b", 0.0),
        },
        T3_7 => {
            let a = spec.base_or();
            FamilySpec::BaseALinkedEit {
                gamma: a.ln(),
                delta: p.take_or("delta", 1.0),
                a,
                b: p.take_or("b", 0.0),
            }
        }
    };
    p.finish(&format!("equality family of {}", spec.id))?;
    DistributionModel::new(family)
}

/// The eleven default families of the verification matrix.
pub fn default_families() -> Vec<DistributionModel> {
    [
        "type3ev:gamma=1,b=0",
        "power:b=1,c=2",
        "invweibull:nu=1,delta=1",
        "truncev:alpha=1,b=0",
        "basearhr:theta=1,a=2,b=0",
        "reflweibull:theta=0.5,k=1",
        "finiterange:theta=0.5,b=1,k=1",
        "linearmit:xi=0.5,alpha=1,beta=0.5,b=0",
        "expeit:theta=1,b=0",
        "baseaeit:delta=1,a=2,b=0",
        "uniform:a=0,b=1",
    ]
    .iter()
    .map(|s| s.parse().expect("default family parses"))
    .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Equality,
    StrictInequality,
    Divergent,
    DomainMismatch,
    /// A component hit the refinement budget without converging or diverging.
    Unresolved,
    /// Converged with `ratio < 1 - eq_tol`.
    Violation,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckConfig {
    pub tol: Tolerance,
    pub eq_tol: f64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            tol: Tolerance::default(),
            eq_tol: DEFAULT_EQ_TOL,
        }
    }
}

impl CheckConfig {
    /// Tolerance for inactivity-time integrals nested inside an expectation.
    fn inner_tol(&self) -> Tolerance {
        Tolerance {
            rel: (self.tol.rel * 1e-2).max(1e-14),
            abs: self.tol.abs * 1e-2,
            max_depth: self.tol.max_depth,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentReport {
    pub weight: String,
    pub value: f64,
    pub err_estimate: f64,
    pub status: QuadStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub theorem: TheoremId,
    pub check: String,
    pub family: String,
    pub model: String,
    pub params: BTreeMap<String, f64>,
    pub lhs: Option<f64>,
    pub rhs: Option<f64>,
    pub gap: Option<f64>,
    pub ratio: Option<f64>,
    pub verdict: Verdict,
    /// `lhs >= rhs - eq_tol |rhs|` read literally; absent unless converged.
    pub printed_direction_holds: Option<bool>,
    pub expected_equality: bool,
    pub suspect: bool,
    /// `1 - xi beta` for inactivity-time-linear models under T3_4/T3_5.
    pub p: Option<f64>,
    pub eq_tol: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub components: Vec<ComponentReport>,
    pub err_estimates: Vec<f64>,
}

impl CheckReport {
    fn skeleton(spec: &CheckSpec, model: &DistributionModel, config: &CheckConfig) -> Self {
        let p = match (spec.id, model.spec()) {
            (TheoremId::T3_4 | TheoremId::T3_5, FamilySpec::LinearMit { xi, beta, .. }) => {
                Some(1.0 - xi * beta)
            }
            _ => None,
        };
        CheckReport {
            theorem: spec.id,
            check: spec.to_string(),
            family: model.spec().tag().to_string(),
            model: model.spec().to_string(),
            params: model
                .spec()
                .params()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
            lhs: None,
            rhs: None,
            gap: None,
            ratio: None,
            verdict: Verdict::DomainMismatch,
            printed_direction_holds: None,
            expected_equality: spec.expects_equality(model),
            suspect: spec.id.is_suspect(),
            p,
            eq_tol: config.eq_tol,
            rel_tol: config.tol.rel,
            abs_tol: config.tol.abs,
            components: Vec::new(),
            err_estimates: Vec::new(),
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(
            self.verdict,
            Verdict::Equality | Verdict::StrictInequality | Verdict::Violation
        )
    }
}

enum RhsOutcome {
    Value(f64),
    Mismatch,
    Failed(Verdict),
}

fn moment(model: &DistributionModel, k: u32) -> std::result::Result<f64, Verdict> {
    model.raw_moment(k).map_err(|e| match e {
        Error::DivergentMoment(_) => Verdict::Divergent,
        _ => Verdict::Unresolved,
    })
}

fn evaluate_rhs(rhs: Rhs, model: &DistributionModel) -> RhsOutcome {
    let b = model.support().upper;
    let ratio_of = |num: f64, den: f64| {
        if den == 0.0 || !den.is_finite() {
            RhsOutcome::Mismatch
        } else {
            RhsOutcome::Value(num / den)
        }
    };
    let run = || -> std::result::Result<RhsOutcome, Verdict> {
        Ok(match rhs {
            Rhs::One => RhsOutcome::Value(1.0),
            Rhs::MomentSquared(k) => RhsOutcome::Value(moment(model, k)?.powi(2)),
            Rhs::MeanRatioForm => {
                let ms = model.moment_set(&[]).map_err(|e| match e {
                    Error::DivergentMoment(_) => Verdict::Divergent,
                    _ => Verdict::Unresolved,
                })?;
                match (ms.eta, ms.c_ratio) {
                    (Some(eta), Some(c)) => ratio_of(2.0, eta * eta - (1.0 + c * c)),
                    _ => RhsOutcome::Mismatch,
                }
            }
            Rhs::SecondMomentForm => {
                let ms = model.moment_set(&[]).map_err(|e| match e {
                    Error::DivergentMoment(_) => Verdict::Divergent,
                    _ => Verdict::Unresolved,
                })?;
                ratio_of(2.0, b * b - (ms.sigma2 + ms.mu * ms.mu))
            }
            Rhs::ShiftedMomentForm(k) => {
                let mk = moment(model, k)?;
                let mk1 = moment(model, k + 1)?;
                ratio_of((k + 1) as f64 * mk * mk, b.powi(k as i32 + 1) - mk1)
            }
            Rhs::ReciprocalMomentForm(k) => {
                let mk1 = moment(model, k + 1)?;
                ratio_of((k + 1) as f64, b.powi(k as i32 + 1) - mk1)
            }
        })
    };
    run().unwrap_or_else(RhsOutcome::Failed)
}

/// Runs one check. Every failure mode is reported as a verdict.
pub fn run_check(spec: &CheckSpec, model: &DistributionModel, config: &CheckConfig) -> CheckReport {
    let mut report = CheckReport::skeleton(spec, model, config);
    if !spec.applies_to(model) {
        return report;
    }
    let inner = config.inner_tol();
    let results: Vec<(Weight, QuadResult)> = spec
        .weights()
        .into_iter()
        .map(|w| {
            let r = quadrature::expectation(model, |x| w.eval(model, x, &inner), &config.tol);
            (w, r)
        })
        .collect();
    report.components = results
        .iter()
        .map(|(w, r)| ComponentReport {
            weight: w.to_string(),
            value: r.value,
            err_estimate: r.err_estimate,
            status: r.status,
        })
        .collect();
    report.err_estimates = results.iter().map(|(_, r)| r.err_estimate).collect();

    if results.iter().any(|(_, r)| r.status == QuadStatus::Divergent) {
        report.verdict = Verdict::Divergent;
        return report;
    }
    if results.iter().any(|(_, r)| r.status != QuadStatus::Converged) {
        report.verdict = Verdict::Unresolved;
        return report;
    }
    let rhs = match evaluate_rhs(spec.rhs(), model) {
        RhsOutcome::Value(v) => v,
        RhsOutcome::Mismatch => {
            report.verdict = Verdict::DomainMismatch;
            return report;
        }
        RhsOutcome::Failed(v) => {
            report.verdict = v;
            return report;
        }
    };
    let lhs: f64 = results.iter().map(|(_, r)| r.value).product();
    let gap = lhs - rhs;
    report.lhs = Some(lhs);
    report.rhs = Some(rhs);
    report.gap = Some(gap);
    report.printed_direction_holds = Some(gap >= -config.eq_tol * rhs.abs());
    let excess = if rhs != 0.0 {
        let ratio = lhs / rhs;
        report.ratio = Some(ratio);
        ratio - 1.0
    } else {
        gap
    };
    report.verdict = if excess.abs() <= config.eq_tol {
        Verdict::Equality
    } else if excess > 0.0 {
        Verdict::StrictInequality
    } else {
        Verdict::Violation
    };
    report
}

/// All (spec, model) cells, spec-major. Cells run in parallel; the output
/// order does not depend on scheduling.
pub fn run_matrix(
    models: &[DistributionModel],
    specs: &[CheckSpec],
    config: &CheckConfig,
) -> Vec<CheckReport> {
    let cells: Vec<(usize, usize)> = (0..specs.len())
        .flat_map(|s| (0..models.len()).map(move |m| (s, m)))
        .collect();
    cells
        .par_iter()
        .map(|&(s, m)| run_check(&specs[s], &models[m], config))
        .collect()
}
