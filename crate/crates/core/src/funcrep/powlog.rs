use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::quad::{log2t, quad_powlog};
use crate::error::{Error, Result};

/// One term `coeff · t^power · (log 2/t)^log_power` on `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub coeff: f64,
    pub power: f64,
    pub log_power: f64,
}

impl Atom {
    pub fn new(coeff: f64, power: f64, log_power: f64) -> Self {
        Atom {
            coeff,
            power,
            log_power,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        let l = log2t(t);
        let mut v = self.coeff;
        if self.power != 0.0 {
            v *= t.powf(self.power);
        }
        if self.log_power != 0.0 {
            v *= l.powf(self.log_power);
        }
        v
    }

    /// Limit of the atom as `t → 0+`, sign included.
    pub fn limit_at_zero(&self) -> f64 {
        let magnitude = if self.power > 0.0 {
            0.0
        } else if self.power < 0.0 {
            f64::INFINITY
        } else if self.log_power > 0.0 {
            f64::INFINITY
        } else if self.log_power < 0.0 {
            0.0
        } else {
            1.0
        };
        if magnitude == 0.0 {
            0.0
        } else {
            self.coeff * magnitude
        }
    }

    /// `∫_{lo}^{hi}` of the atom; `lo = 0` allowed.
    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        let q = quad_powlog(self.power, self.log_power, lo, hi);
        if q == 0.0 {
            0.0
        } else {
            self.coeff * q
        }
    }

    /// Interior critical point of `t^a (log 2/t)^b` on `(0, 1)`, if any.
    ///
    /// The derivative vanishes where `a · log(2/t) = b`.
    pub fn critical_point(&self) -> Option<f64> {
        if self.power == 0.0 || self.log_power == 0.0 {
            return None;
        }
        let l = self.log_power / self.power;
        if l > std::f64::consts::LN_2 {
            Some(2.0 * (-l).exp())
        } else {
            None
        }
    }

    /// Supremum of the atom over `[lo, hi]` (`lo = 0` means the limit at zero).
    pub fn sup_on(&self, lo: f64, hi: f64) -> f64 {
        let mut best = self.eval(hi);
        if lo > 0.0 {
            best = best.max(self.eval(lo));
        } else {
            best = best.max(self.limit_at_zero());
        }
        if let Some(c) = self.critical_point() {
            if c > lo && c < hi {
                best = best.max(self.eval(c));
            }
        }
        best
    }
}

/// A finite sum of power-log atoms, kept sorted by `(power, log_power)` with
/// no repeated exponent pair and no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PowLogFn {
    atoms: Vec<Atom>,
}

impl PowLogFn {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut v: Vec<Atom> = Vec::new();
        for a in atoms {
            if !(a.coeff.is_finite() && a.power.is_finite() && a.log_power.is_finite()) {
                return Err(Error::Parameter(format!("non-finite atom {a:?}")));
            }
            v.push(a);
        }
        v.sort_by(|x, y| {
            x.power
                .total_cmp(&y.power)
                .then(x.log_power.total_cmp(&y.log_power))
        });
        let mut merged: Vec<Atom> = Vec::with_capacity(v.len());
        for a in v {
            match merged.last_mut() {
                Some(last) if last.power == a.power && last.log_power == a.log_power => {
                    last.coeff += a.coeff;
                }
                _ => merged.push(a),
            }
        }
        merged.retain(|a| a.coeff != 0.0);
        Ok(PowLogFn { atoms: merged })
    }

    /// `c · t^a · (log 2/t)^b`.
    pub fn atom(c: f64, a: f64, b: f64) -> Self {
        PowLogFn::new([Atom::new(c, a, b)]).expect("finite atom")
    }

    pub fn constant(c: f64) -> Self {
        PowLogFn::atom(c, 0.0, 0.0)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn single(&self) -> Option<Atom> {
        match self.atoms.as_slice() {
            [a] => Some(*a),
            _ => None,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.atoms.iter().map(|a| a.eval(t)).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        PowLogFn::new(self.atoms.iter().map(|a| Atom::new(a.coeff * c, a.power, a.log_power)))
            .expect("finite")
    }

    pub fn add(&self, other: &PowLogFn) -> Self {
        PowLogFn::new(self.atoms.iter().chain(other.atoms.iter()).copied()).expect("finite")
    }

    /// Multiply every atom by `t^a (log 2/t)^b`.
    pub fn shift(&self, a: f64, b: f64) -> Self {
        PowLogFn::new(
            self.atoms
                .iter()
                .map(|x| Atom::new(x.coeff, x.power + a, x.log_power + b)),
        )
        .expect("finite")
    }

    /// The atom that dominates as `t → 0+`: smallest power, then largest log power.
    pub fn leading_at_zero(&self) -> Option<Atom> {
        self.atoms.iter().copied().min_by(|x, y| {
            x.power
                .total_cmp(&y.power)
                .then(y.log_power.total_cmp(&x.log_power))
        })
    }

    pub fn limit_at_zero(&self) -> f64 {
        match self.leading_at_zero() {
            None => 0.0,
            Some(lead) => {
                let l = lead.limit_at_zero();
                if l.is_infinite() {
                    l
                } else {
                    self.atoms
                        .iter()
                        .map(|a| a.limit_at_zero())
                        .filter(|v| v.is_finite())
                        .sum()
                }
            }
        }
    }

    pub fn integral(&self, lo: f64, hi: f64) -> f64 {
        self.atoms.iter().map(|a| a.integral(lo, hi)).sum()
    }

    pub fn derivative(&self, t: f64) -> f64 {
        // d/dt t^a L^b = t^{a-1} L^{b-1} (a L - b)
        let l = log2t(t);
        self.atoms
            .iter()
            .map(|x| x.coeff * t.powf(x.power - 1.0) * l.powf(x.log_power - 1.0) * (x.power * l - x.log_power))
            .sum()
    }

    /// Checks non-negativity and monotone decrease on a dense log-spaced probe
    /// set covering `(1e-300, 1]`.
    pub fn is_nonincreasing_nonneg(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let mut prev = f64::INFINITY;
        for k in 0..=3000 {
            let t = 10f64.powf(-300.0 + 0.1 * k as f64).min(1.0);
            let v = self.eval(t);
            if v < 0.0 || v > prev * (1.0 + 1e-12) + 1e-300 {
                return false;
            }
            prev = v;
        }
        true
    }
}

impl fmt::Display for PowLogFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "0*t^0*log^0");
        }
        let parts: Vec<String> = self
            .atoms
            .iter()
            .map(|a| format!("{}*t^{}*log^{}", a.coeff, a.power, a.log_power))
            .collect();
        write!(f, "{}", parts.join(";"))
    }
}

fn parse_num(s: &str, rule: &str) -> Result<f64> {
    let s = s.trim();
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::parse(s, rule))
}

impl FromStr for PowLogFn {
    type Err = Error;

    /// Parses `c*t^a*log^b;c*t^a*log^b;...`.
    fn from_str(s: &str) -> Result<Self> {
        const RULE: &str = "atom `c*t^a*log^b`";
        let mut atoms = Vec::new();
        for raw in s.split(';') {
            let raw = raw.trim();
            if raw.is_empty() {
                continue;
            }
            let fields: Vec<&str> = raw.split('*').collect();
            if fields.len() != 3 {
                return Err(Error::parse(raw, RULE));
            }
            let c = parse_num(fields[0], "coefficient")?;
            let a = fields[1]
                .trim()
                .strip_prefix("t^")
                .ok_or_else(|| Error::parse(fields[1], "`t^<power>`"))?;
            let b = fields[2]
                .trim()
                .strip_prefix("log^")
                .ok_or_else(|| Error::parse(fields[2], "`log^<power>`"))?;
            atoms.push(Atom::new(c, parse_num(a, "power")?, parse_num(b, "log power")?));
        }
        if atoms.is_empty() {
            return Err(Error::parse(s, RULE));
        }
        PowLogFn::new(atoms)
    }
}
