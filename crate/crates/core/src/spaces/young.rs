use std::fmt;

use serde::{Deserialize, Serialize};

use super::fundamental::FundamentalFn;
use crate::error::{Error, Result};
use crate::funcrep::{Atom, PowLogFn};

/// Growth of a Young function near infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Asymptote {
    /// `t^p (log t)^a`.
    PowerLog { p: f64, a: f64 },
    /// `exp(t^beta)`.
    Exponential { beta: f64 },
    /// `∞ · χ_(1,∞)`.
    LInfinity,
}

impl Asymptote {
    /// Descriptor of the Orlicz space whose fundamental function is the
    /// atom `c t^a (log 2/t)^b`.
    pub fn from_fundamental_atom(a: f64, b: f64) -> Result<Asymptote> {
        if a == 0.0 && b == 0.0 {
            Ok(Asymptote::LInfinity)
        } else if a == 0.0 && b < 0.0 {
            Ok(Asymptote::Exponential { beta: 1.0 / -b })
        } else if a > 0.0 && a <= 1.0 {
            Ok(Asymptote::PowerLog { p: 1.0 / a, a: b / a })
        } else {
            Err(Error::Domain(format!(
                "t^{a} log^{b} is not the fundamental function of an Orlicz space"
            )))
        }
    }

    /// Equality of descriptors up to a relative tolerance on the exponents.
    pub fn approx_eq(&self, other: &Asymptote, tol: f64) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= tol * x.abs().max(y.abs()).max(1.0);
        match (self, other) {
            (Asymptote::PowerLog { p, a }, Asymptote::PowerLog { p: q, a: b }) => {
                close(*p, *q) && close(*a, *b)
            }
            (Asymptote::Exponential { beta }, Asymptote::Exponential { beta: b }) => close(*beta, *b),
            (Asymptote::LInfinity, Asymptote::LInfinity) => true,
            _ => false,
        }
    }
}

impl fmt::Display for Asymptote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Asymptote::PowerLog { p, a } => write!(f, "t^{p} log^{a} t"),
            Asymptote::Exponential { beta } => write!(f, "exp(t^{beta})"),
            Asymptote::LInfinity => write!(f, "L^inf"),
        }
    }
}

/// A Young function given by its near-infinity form, joined linearly to the
/// origin below a threshold where the form is convex with `tA'(t) ≥ A(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum YoungFn {
    /// `t^p` everywhere.
    Power { p: f64 },
    /// `t^p (1 + log t)^a` for `t ≥ join`, linear below.
    PowerLog { p: f64, a: f64, join: f64 },
    /// `exp(t^beta)` for `t ≥ join`, linear below.
    Exponential { beta: f64, join: f64 },
    /// `exp(t^beta) − 1` everywhere (`beta ≥ 1`).
    ExpMinusOne { beta: f64 },
    /// `0` on `[0, 1]`, `∞` beyond.
    LInfinity,
    /// Inverse of `u ↦ 1/φ(1/u)` for a fundamental function `φ`.
    Fundamental(FundamentalTable),
}

/// A fundamental function together with `(log s, log φ(s))` on a
/// log-spaced set of `s` down to `1e-300`, used to bracket inversions.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalTable {
    phi: FundamentalFn,
    log_s: Vec<f64>,
    log_phi: Vec<f64>,
    asymptote: Asymptote,
    label: String,
}

/// JSON form accepted in Young files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum YoungSpec {
    Power { p: f64 },
    PowerLog { p: f64, a: f64 },
    Exponential { beta: f64 },
    ExpMinusOne { beta: f64 },
    Linf,
    Fundamental { phi: String },
}

impl YoungFn {
    pub fn power(p: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite()) {
            return Err(Error::Parameter(format!("power Young function needs p ≥ 1, got {p}")));
        }
        Ok(YoungFn::Power { p })
    }

    /// `t^p (log t)^a` near infinity.
    pub fn power_log(p: f64, a: f64) -> Result<Self> {
        if !(p >= 1.0 && p.is_finite() && a.is_finite()) || (p == 1.0 && a < 0.0) {
            return Err(Error::Parameter(format!(
                "t^{p} log^{a} t is not equivalent to a Young function"
            )));
        }
        if a == 0.0 {
            return Ok(YoungFn::Power { p });
        }
        // With L = 1 + log t: elasticity p + a/L ≥ 1 and the convexity
        // polynomial (p−1)pL² + ((p−1)a + (a−1)p + p)L + (a−1)a ≥ 0.
        let mut l0: f64 = 1.0;
        if a < 0.0 {
            l0 = l0.max(-a / (p - 1.0));
        }
        let qa = (p - 1.0) * p;
        let qb = (p - 1.0) * a + (a - 1.0) * p + p;
        let qc = (a - 1.0) * a;
        if qa > 0.0 {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc >= 0.0 {
                l0 = l0.max((-qb + disc.sqrt()) / (2.0 * qa));
            }
        } else if qb > 0.0 {
            l0 = l0.max(-qc / qb);
        }
        let join = (l0 - 1.0).exp();
        Ok(YoungFn::PowerLog { p, a, join })
    }

    pub fn exponential(beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Parameter(format!("exponential Young function needs β > 0, got {beta}")));
        }
        let join = (1.0 / beta).powf(1.0 / beta).max(1.0);
        Ok(YoungFn::Exponential { beta, join })
    }

    pub fn exp_minus_one(beta: f64) -> Result<Self> {
        if !(beta >= 1.0 && beta.is_finite()) {
            return Err(Error::Parameter(format!("exp(t^β) − 1 is convex only for β ≥ 1, got {beta}")));
        }
        Ok(YoungFn::ExpMinusOne { beta })
    }

    pub fn linf() -> Self {
        YoungFn::LInfinity
    }

    pub fn from_spec(spec: &YoungSpec) -> Result<Self> {
        match spec {
            YoungSpec::Power { p } => YoungFn::power(*p),
            YoungSpec::PowerLog { p, a } => YoungFn::power_log(*p, *a),
            YoungSpec::Exponential { beta } => YoungFn::exponential(*beta),
            YoungSpec::ExpMinusOne { beta } => YoungFn::exp_minus_one(*beta),
            YoungSpec::Linf => Ok(YoungFn::LInfinity),
            YoungSpec::Fundamental { phi } => {
                let f: PowLogFn = phi.parse()?;
                super::orlicz::fundamental_orlicz(&FundamentalFn::from_powlog(f)?)
            }
        }
    }

    pub fn to_spec(&self) -> YoungSpec {
        match self {
            YoungFn::Power { p } => YoungSpec::Power { p: *p },
            YoungFn::PowerLog { p, a, .. } => YoungSpec::PowerLog { p: *p, a: *a },
            YoungFn::Exponential { beta, .. } => YoungSpec::Exponential { beta: *beta },
            YoungFn::ExpMinusOne { beta } => YoungSpec::ExpMinusOne { beta: *beta },
            YoungFn::LInfinity => YoungSpec::Linf,
            YoungFn::Fundamental(t) => YoungSpec::Fundamental { phi: t.label.clone() },
        }
    }

    /// Parse the JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: YoungSpec = serde_json::from_str(text)
            .map_err(|e| Error::parse(text.trim(), format!("Young function JSON ({e})")))?;
        YoungFn::from_spec(&spec)
    }

    pub(crate) fn from_table(
        phi: FundamentalFn,
        log_s: Vec<f64>,
        log_phi: Vec<f64>,
        asymptote: Asymptote,
        label: String,
    ) -> Self {
        YoungFn::Fundamental(FundamentalTable {
            phi,
            log_s,
            log_phi,
            asymptote,
            label,
        })
    }

    pub fn asymptote(&self) -> Asymptote {
        match self {
            YoungFn::Power { p } => Asymptote::PowerLog { p: *p, a: 0.0 },
            YoungFn::PowerLog { p, a, .. } => Asymptote::PowerLog { p: *p, a: *a },
            YoungFn::Exponential { beta, .. } | YoungFn::ExpMinusOne { beta } => {
                Asymptote::Exponential { beta: *beta }
            }
            YoungFn::LInfinity => Asymptote::LInfinity,
            YoungFn::Fundamental(t) => t.asymptote,
        }
    }

    /// `A(t)` for `t ≥ 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t.is_infinite() {
            return f64::INFINITY;
        }
        match self {
            YoungFn::Power { p } => t.powf(*p),
            YoungFn::PowerLog { p, a, join } => {
                let g = |x: f64| x.powf(*p) * (1.0 + x.ln()).powf(*a);
                if t >= *join {
                    g(t)
                } else {
                    g(*join) / join * t
                }
            }
            YoungFn::Exponential { beta, join } => {
                if t >= *join {
                    t.powf(*beta).exp()
                } else {
                    join.powf(*beta).exp() / join * t
                }
            }
            YoungFn::ExpMinusOne { beta } => t.powf(*beta).exp_m1(),
            YoungFn::LInfinity => {
                if t <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            YoungFn::Fundamental(tab) => tab.eval(t),
        }
    }

    /// Right-continuous generalized inverse `sup{t : A(t) ≤ s}`.
    pub fn inverse(&self, s: f64) -> f64 {
        if s.is_infinite() {
            return match self {
                YoungFn::LInfinity => 1.0,
                _ => f64::INFINITY,
            };
        }
        if s < 0.0 {
            return 0.0;
        }
        match self {
            YoungFn::Power { p } => s.powf(1.0 / p),
            YoungFn::PowerLog { p, a, join } => {
                let gj = join.powf(*p) * (1.0 + join.ln()).powf(*a);
                if s <= gj {
                    return s * join / gj;
                }
                // Solve p·x + a·log(1 + x) = log s for x = log t ≥ log(join).
                let target = s.ln();
                let h = |x: f64| p * x + a * (1.0 + x).ln() - target;
                let mut lo = join.ln();
                let mut hi = lo.max(1.0);
                while h(hi) < 0.0 {
                    hi *= 2.0;
                }
                let mut x = 0.5 * (lo + hi);
                for _ in 0..200 {
                    let hx = h(x);
                    if hx > 0.0 {
                        hi = x;
                    } else {
                        lo = x;
                    }
                    let step = hx / (p + a / (1.0 + x));
                    let mut nx = x - step;
                    if !(nx > lo && nx < hi) {
                        nx = 0.5 * (lo + hi);
                    }
                    if (nx - x).abs() <= 1e-16 * x.abs().max(1.0) {
                        x = nx;
                        break;
                    }
                    x = nx;
                }
                x.exp()
            }
            YoungFn::Exponential { beta, join } => {
                let gj = join.powf(*beta).exp();
                if s <= gj {
                    s * join / gj
                } else {
                    s.ln().powf(1.0 / beta)
                }
            }
            YoungFn::ExpMinusOne { beta } => s.ln_1p().powf(1.0 / beta),
            YoungFn::LInfinity => 1.0,
            YoungFn::Fundamental(tab) => tab.inverse(s),
        }
    }
}

impl FundamentalTable {
    fn phi_at_log(&self, ls: f64) -> f64 {
        self.phi.eval(ls.exp())
    }

    /// `A^{-1}(u) = 1/φ(1/u)` for `u ≥ 1`, linear below.
    fn inverse(&self, u: f64) -> f64 {
        let at_one = 1.0 / self.phi.eval(1.0);
        if u <= 1.0 {
            return u * at_one;
        }
        1.0 / self.phi_at_log(-u.ln())
    }

    /// The `u` with `1/φ(1/u) = t`, i.e. `φ(1/u) = 1/t`: a table guess
    /// refined by secant steps on the exact `φ`.
    fn eval(&self, t: f64) -> f64 {
        let at_one = 1.0 / self.phi.eval(1.0);
        if t <= at_one {
            return t / at_one;
        }
        let target = -t.ln();
        let phi0 = self.phi.phi0();
        if phi0 > 0.0 && target <= phi0.ln() * (1.0 + 1e-15) {
            return f64::INFINITY;
        }
        let last = self.log_s.len() - 1;
        let (x0, x1, y0, y1) = if target < self.log_phi[0] {
            (self.log_s[0], self.log_s[1], self.log_phi[0], self.log_phi[1])
        } else {
            let k = self.log_phi.partition_point(|&v| v < target).clamp(1, last);
            (self.log_s[k - 1], self.log_s[k], self.log_phi[k - 1], self.log_phi[k])
        };
        let slope = (y1 - y0) / (x1 - x0);
        if !(slope > 0.0) {
            return if target < y0 { f64::INFINITY } else { (-x1).exp() };
        }
        let mut x = x0 + (target - y0) / slope;
        for _ in 0..8 {
            let y = self.phi_at_log(x).ln();
            let step = (target - y) / slope;
            x += step;
            if step.abs() <= 1e-15 * x.abs().max(1.0) {
                break;
            }
        }
        (-x).exp()
    }
}

/// Descriptor of a single-atom fundamental function.
pub(crate) fn atom_asymptote(a: &Atom) -> Result<Asymptote> {
    Asymptote::from_fundamental_atom(a.power, a.log_power)
}
