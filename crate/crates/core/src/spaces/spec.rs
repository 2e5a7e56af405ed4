use std::fmt;

use super::fundamental::FundamentalFn;
use super::young::YoungFn;
use crate::error::{Error, Result};
use crate::funcrep::PowLogFn;

/// An r.i. space on `(0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum SpaceSpec {
    Lebesgue(f64),
    Lorentz { p: f64, q: f64 },
    /// `L^{p,q;ζ}`, weight `t^{1/p − 1/q} (log 2/t)^ζ`.
    LorentzZygmund { p: f64, q: f64, zeta: f64 },
    Orlicz(YoungFn),
    Lambda(FundamentalFn),
    Marcinkiewicz(FundamentalFn),
}

/// Whether the parameters define an r.i. (quasi)norm.
pub fn validate_spec(s: &SpaceSpec) -> bool {
    let inf = f64::INFINITY;
    match *s {
        SpaceSpec::Lebesgue(p) => p >= 1.0,
        SpaceSpec::Lorentz { p, q } => {
            (p > 1.0 && p < inf && q >= 1.0) || (p == 1.0 && q == 1.0) || (p == inf && q == inf)
        }
        SpaceSpec::LorentzZygmund { p, q, zeta } => {
            if !zeta.is_finite() {
                return false;
            }
            (p > 1.0 && p < inf && q >= 1.0)
                || (p == 1.0 && q == 1.0 && zeta >= 0.0)
                || (p == inf && q == inf && zeta <= 0.0)
                || (p == inf && q >= 1.0 && q < inf && zeta + 1.0 / q < 0.0)
        }
        SpaceSpec::Orlicz(_) => true,
        SpaceSpec::Lambda(ref phi) | SpaceSpec::Marcinkiewicz(ref phi) => {
            phi.quasiconcavity_defect(phi.grid()) <= super::QUASICONCAVE_SLACK
        }
    }
}

impl SpaceSpec {
    /// `exp L^beta`.
    pub fn exp_l(beta: f64) -> Result<Self> {
        Ok(SpaceSpec::Orlicz(YoungFn::exponential(beta)?))
    }

    /// `L^p log^a L`.
    pub fn l_log_l(p: f64, a: f64) -> Result<Self> {
        Ok(SpaceSpec::Orlicz(YoungFn::power_log(p, a)?))
    }

    pub fn require_valid(&self) -> Result<()> {
        if validate_spec(self) {
            Ok(())
        } else {
            Err(Error::Spec(self.to_string()))
        }
    }

    /// Parse the text form. `Orlicz:` takes inline JSON or a path to a JSON
    /// file.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (tag, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(text, "`<tag>:<parameters>`"))?;
        let nums = |n: usize, rule: &str| -> Result<Vec<f64>> {
            let fields: Vec<&str> = rest.split(',').collect();
            if fields.len() != n {
                return Err(Error::parse(rest, rule));
            }
            fields.iter().map(|f| parse_real(f)).collect()
        };
        match tag.trim() {
            "L" => Ok(SpaceSpec::Lebesgue(nums(1, "`L:p`")?[0])),
            "Lor" => {
                let v = nums(2, "`Lor:p,q`")?;
                Ok(SpaceSpec::Lorentz { p: v[0], q: v[1] })
            }
            "LZ" => {
                let fields: Vec<&str> = rest.split(',').collect();
                if fields.len() != 3 {
                    return Err(Error::parse(rest, "`LZ:p,q,zeta`"));
                }
                let z = fields[2].trim();
                let z = z
                    .strip_prefix("zeta=")
                    .or_else(|| z.strip_prefix("alpha="))
                    .unwrap_or(z);
                Ok(SpaceSpec::LorentzZygmund {
                    p: parse_real(fields[0])?,
                    q: parse_real(fields[1])?,
                    zeta: parse_real(z)?,
                })
            }
            "expL" => SpaceSpec::exp_l(nums(1, "`expL:beta`")?[0]),
            "LlogL" => {
                let v = nums(2, "`LlogL:p,a`")?;
                SpaceSpec::l_log_l(v[0], v[1])
            }
            "Orlicz" => {
                let body = rest.trim();
                let json = if body.starts_with('{') {
                    body.to_string()
                } else {
                    std::fs::read_to_string(body)
                        .map_err(|e| Error::parse(body, format!("readable Young file ({e})")))?
                };
                Ok(SpaceSpec::Orlicz(YoungFn::from_json(&json)?))
            }
            "Lambda" => Ok(SpaceSpec::Lambda(FundamentalFn::from_powlog(rest.parse::<PowLogFn>()?)?)),
            "Marc" => Ok(SpaceSpec::Marcinkiewicz(FundamentalFn::from_powlog(
                rest.parse::<PowLogFn>()?,
            )?)),
            other => Err(Error::parse(
                other,
                "one of L, Lor, LZ, expL, LlogL, Orlicz, Lambda, Marc",
            )),
        }
    }
}

/// A real number or `inf`; simple fractions `a/b` are accepted.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    if matches!(s, "inf" | "+inf" | "infinity" | "∞") {
        return Ok(f64::INFINITY);
    }
    let v = if let Some((n, d)) = s.split_once('/') {
        match (n.trim().parse::<f64>(), d.trim().parse::<f64>()) {
            (Ok(n), Ok(d)) if d != 0.0 => Some(n / d),
            _ => None,
        }
    } else {
        s.parse::<f64>().ok()
    };
    v.filter(|v| !v.is_nan()).ok_or_else(|| Error::parse(s, "real number or `inf`"))
}

fn fmt_real(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x}")
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Lebesgue(p) => write!(f, "L:{}", fmt_real(*p)),
            SpaceSpec::Lorentz { p, q } => write!(f, "Lor:{},{}", fmt_real(*p), fmt_real(*q)),
            SpaceSpec::LorentzZygmund { p, q, zeta } => {
                write!(f, "LZ:{},{},{}", fmt_real(*p), fmt_real(*q), fmt_real(*zeta))
            }
            SpaceSpec::Orlicz(a) => match a {
                YoungFn::Exponential { beta, .. } => write!(f, "expL:{beta}"),
                YoungFn::PowerLog { p, a, .. } => write!(f, "LlogL:{p},{a}"),
                other => write!(
                    f,
                    "Orlicz:{}",
                    serde_json::to_string(&other.to_spec()).unwrap_or_default()
                ),
            },
            SpaceSpec::Lambda(phi) => write!(f, "Lambda:{}", phi.label()),
            SpaceSpec::Marcinkiewicz(phi) => write!(f, "Marc:{}", phi.label()),
        }
    }
}
