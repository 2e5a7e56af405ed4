use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcrep::{default_grid, Grid, GridFn, PowLogFn};

/// How `φ` is stored.
#[derive(Debug, Clone, PartialEq)]
pub enum Phi {
    PowLog(PowLogFn),
    /// Node samples, interpolated linearly in `(log t, log φ)`.
    Grid(GridFn),
}

/// Least concave majorant `φ̄` of `φ` on `[0, 1]`, including the point
/// `(0, φ(0+))`.
#[derive(Debug, Clone, PartialEq)]
pub enum Majorant {
    /// `φ` is already concave.
    Exact,
    /// Vertices of the upper hull, linear in `t` between them.
    Hull(Vec<(f64, f64)>),
}

/// A fundamental function with its concave majorant.
#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalFn {
    phi: Phi,
    phi0: f64,
    majorant: Majorant,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiSample {
    pub t: f64,
    pub phi: f64,
    pub majorant: f64,
}

impl FundamentalFn {
    pub fn from_powlog(f: PowLogFn) -> Result<Self> {
        let grid = default_grid();
        check_positive(grid.nodes().iter().map(|&t| f.eval(t)))?;
        let phi0 = f.limit_at_zero().max(0.0);
        if phi0.is_infinite() {
            return Err(Error::Domain("fundamental function is unbounded at 0".into()));
        }
        let phi = Phi::PowLog(f);
        let majorant = if is_concave_on(&phi, grid) {
            Majorant::Exact
        } else {
            Majorant::Hull(hull(&phi, phi0, grid))
        };
        Ok(FundamentalFn { phi, phi0, majorant })
    }

    /// From node samples; `phi0` is the value at `0+`.
    pub fn from_grid(f: GridFn, phi0: f64) -> Result<Self> {
        check_positive(f.values().iter().copied())?;
        let grid = f.grid().clone();
        let phi = Phi::Grid(f);
        let majorant = Majorant::Hull(hull(&phi, phi0, &grid));
        Ok(FundamentalFn { phi, phi0, majorant })
    }

    pub fn phi(&self) -> &Phi {
        &self.phi
    }

    pub fn phi0(&self) -> f64 {
        self.phi0
    }

    pub fn as_powlog(&self) -> Option<&PowLogFn> {
        match &self.phi {
            Phi::PowLog(f) => Some(f),
            Phi::Grid(_) => None,
        }
    }

    pub fn majorant(&self) -> &Majorant {
        &self.majorant
    }

    /// Grid the function is tied to (its own, or the default one).
    pub fn grid(&self) -> &Grid {
        match &self.phi {
            Phi::PowLog(_) => default_grid(),
            Phi::Grid(g) => g.grid(),
        }
    }

    /// `φ(t)` for `t ∈ (0, 1]`; `φ(1)` beyond 1 and `φ(0+)` at 0.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return self.phi0;
        }
        let t = t.min(1.0);
        match &self.phi {
            Phi::PowLog(f) => f.eval(t),
            Phi::Grid(g) => {
                let nodes = g.grid().nodes();
                let v = g.values();
                let k = nodes.partition_point(|&x| x < t);
                if k < nodes.len() && nodes[k] == t {
                    return v[k];
                }
                let k = k.clamp(1, nodes.len() - 1);
                let (x0, x1) = (nodes[k - 1].ln(), nodes[k].ln());
                let (y0, y1) = (v[k - 1].ln(), v[k].ln());
                let mut slope = (y1 - y0) / (x1 - x0);
                if t < nodes[0] {
                    slope = slope.max(0.0);
                }
                (y0 + (t.ln() - x0) * slope).exp().max(self.phi0)
            }
        }
    }

    /// `φ̄(t)`; `φ̄(0) = 0` and `φ̄(0+) = φ(0+)`.
    pub fn majorant_eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match &self.majorant {
            Majorant::Exact => self.eval(t),
            Majorant::Hull(v) => {
                let t = t.min(1.0);
                let k = v.partition_point(|&(x, _)| x < t).clamp(1, v.len() - 1);
                let ((x0, y0), (x1, y1)) = (v[k - 1], v[k]);
                y0 + (t - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }

    /// Largest factor by which `φ` or `t/φ` decreases between two nodes of
    /// `grid`; 1 for a quasiconcave function.
    pub fn quasiconcavity_defect(&self, grid: &Grid) -> f64 {
        let mut worst: f64 = 1.0;
        let mut max_phi: f64 = 0.0;
        let mut max_ratio: f64 = 0.0;
        for &t in grid.nodes() {
            let p = self.eval(t);
            let r = t / p;
            if p > 0.0 {
                worst = worst.max(max_phi / p);
            }
            if r > 0.0 {
                worst = worst.max(max_ratio / r);
            }
            max_phi = max_phi.max(p);
            max_ratio = max_ratio.max(r);
        }
        worst
    }

    pub fn is_quasiconcave(&self, grid: &Grid) -> bool {
        self.quasiconcavity_defect(grid) <= 1.0 + 1e-9
    }

    pub fn samples(&self, grid: &Grid) -> Vec<PhiSample> {
        grid.nodes()
            .iter()
            .map(|&t| PhiSample {
                t,
                phi: self.eval(t),
                majorant: self.majorant_eval(t),
            })
            .collect()
    }

    /// Text form: the power-log expression, or `grid` for sampled functions.
    pub fn label(&self) -> String {
        match &self.phi {
            Phi::PowLog(f) => f.to_string(),
            Phi::Grid(g) => format!("grid({}, {})", g.grid().t_min(), g.grid().points_per_decade()),
        }
    }

    /// Samples `(log s, log φ(s))` from `1e-300` to 1 at `ppd` points per
    /// decade.
    pub(crate) fn log_table(&self, ppd: usize) -> (Vec<f64>, Vec<f64>) {
        let n = 300 * ppd;
        let mut xs = Vec::with_capacity(n + 1);
        let mut ys = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let ls = -300.0 * std::f64::consts::LN_10 * (1.0 - k as f64 / n as f64);
            let v = self.eval(ls.exp());
            if v > 0.0 && v.is_finite() {
                xs.push(ls);
                ys.push(v.ln());
            }
        }
        // Keep log φ non-decreasing so the inverse is well defined.
        for k in 1..ys.len() {
            if ys[k] < ys[k - 1] {
                ys[k] = ys[k - 1];
            }
        }
        (xs, ys)
    }
}

fn check_positive(values: impl Iterator<Item = f64>) -> Result<()> {
    for v in values {
        if !(v > 0.0) || v.is_infinite() {
            return Err(Error::Domain(format!(
                "fundamental function must be positive and finite on (0, 1], found {v}"
            )));
        }
    }
    Ok(())
}

fn is_concave_on(phi: &Phi, grid: &Grid) -> bool {
    let f = |t: f64| match phi {
        Phi::PowLog(p) => p.eval(t),
        Phi::Grid(g) => g.interpolate(t),
    };
    let pts: Vec<(f64, f64)> = grid.nodes().iter().map(|&t| (t, f(t))).collect();
    pts.windows(3).all(|w| {
        let ((x0, y0), (x1, y1), (x2, y2)) = (w[0], w[1], w[2]);
        let chord = y0 + (x1 - x0) * (y2 - y0) / (x2 - x0);
        y1 >= chord * (1.0 - 1e-12)
    })
}

/// Upper hull of `(0, phi0)` and the node samples, by a monotone-chain pass.
fn hull(phi: &Phi, phi0: f64, grid: &Grid) -> Vec<(f64, f64)> {
    let f = |t: f64| match phi {
        Phi::PowLog(p) => p.eval(t),
        Phi::Grid(g) => g.interpolate(t),
    };
    let mut h: Vec<(f64, f64)> = vec![(0.0, phi0)];
    for &t in grid.nodes() {
        let p = (t, f(t));
        while h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                h.pop();
            } else {
                break;
            }
        }
        h.push(p);
    }
    h
}
