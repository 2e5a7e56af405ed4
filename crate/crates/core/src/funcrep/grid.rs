use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::quad::log2t;
use crate::error::{Error, Result};

/// Default smallest node.
pub const DEFAULT_T_MIN: f64 = 1e-30;
/// Default resolution.
pub const DEFAULT_POINTS_PER_DECADE: u32 = 64;

/// Logarithmically spaced nodes on `[t_min, 1]`, uniform in `u = log(2/t)`.
///
/// Node `i` stands for the cell `(t_{i-1}, t_i]`, with `t_{-1} = 0`, so the
/// cells partition `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    t_min: f64,
    points_per_decade: u32,
    nodes: Vec<f64>,
}

/// Build a log grid with `ceil(ppd · log10(1/t_min)) + 1` nodes ending at 1.
pub fn make_log_grid(t_min: f64, points_per_decade: u32) -> Result<Grid> {
    if !(t_min > 0.0 && t_min <= 1e-3) {
        return Err(Error::Parameter(format!("t_min must lie in (0, 1e-3], got {t_min}")));
    }
    if points_per_decade == 0 {
        return Err(Error::Parameter("points_per_decade must be positive".into()));
    }
    let decades = -t_min.log10();
    let raw = points_per_decade as f64 * decades;
    // Snap values within rounding noise of an integer.
    let cells = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw.ceil() } as usize;
    let n = cells + 1;
    if n < 16 {
        return Err(Error::Parameter(format!(
            "grid would have {n} nodes; at least 16 are required"
        )));
    }
    Ok(Grid::from_parts(t_min, points_per_decade, n))
}

impl Grid {
    fn from_parts(t_min: f64, points_per_decade: u32, n: usize) -> Self {
        let log_min = t_min.ln();
        let last = (n - 1) as f64;
        let mut nodes: Vec<f64> = (0..n)
            .map(|i| (log_min * (1.0 - i as f64 / last)).exp())
            .collect();
        nodes[0] = t_min;
        nodes[n - 1] = 1.0;
        Grid {
            t_min,
            points_per_decade,
            nodes,
        }
    }

    /// Grid built without the node-count floor; used for tiny explicit grids.
    pub fn small(t_min: f64, points_per_decade: u32) -> Result<Self> {
        if !(t_min > 0.0 && t_min < 1.0) || points_per_decade == 0 {
            return Err(Error::Parameter(format!("bad grid ({t_min}, {points_per_decade})")));
        }
        let raw = points_per_decade as f64 * -t_min.log10();
        let cells = if (raw - raw.round()).abs() < 1e-9 { raw.round() } else { raw.ceil() } as usize;
        Ok(Grid::from_parts(t_min, points_per_decade, cells.max(1) + 1))
    }

    pub fn default_grid() -> Self {
        make_log_grid(DEFAULT_T_MIN, DEFAULT_POINTS_PER_DECADE).expect("default grid")
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }
    pub fn points_per_decade(&self) -> u32 {
        self.points_per_decade
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn len(&self) -> usize {
        self.nodes.len()
    }
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Step in `u` between consecutive nodes.
    pub fn du(&self) -> f64 {
        -self.t_min.ln() / (self.len() - 1) as f64
    }

    /// Lower end of the cell belonging to node `i`.
    pub fn cell_lo(&self, i: usize) -> f64 {
        if i == 0 {
            0.0
        } else {
            self.nodes[i - 1]
        }
    }

    pub fn cell_measure(&self, i: usize) -> f64 {
        self.nodes[i] - self.cell_lo(i)
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self.len() == other.len()
            && self.t_min == other.t_min
            && self.points_per_decade == other.points_per_decade
    }

    /// Index of the first node `≥ t` (with relative slack), or `len()`.
    pub fn first_at_or_above(&self, t: f64) -> usize {
        let t = t * (1.0 - 1e-12);
        self.nodes.partition_point(|&x| x < t)
    }

    /// Rebuild a grid from its node list (as read from a file).
    pub fn from_nodes(nodes: &[f64]) -> Result<Self> {
        if nodes.len() < 16 {
            return Err(Error::Shape(format!("{} nodes; at least 16 required", nodes.len())));
        }
        let t_min = nodes[0];
        let last = *nodes.last().unwrap();
        if (last - 1.0).abs() > 1e-12 {
            return Err(Error::Shape(format!("last node must be 1, got {last}")));
        }
        let ppd = ((nodes.len() - 1) as f64 / -t_min.log10()).round() as u32;
        let g = make_log_grid(t_min, ppd.max(1))?;
        if g.len() != nodes.len()
            || g
                .nodes
                .iter()
                .zip(nodes)
                .any(|(a, b)| (a - b).abs() > 1e-9 * a.abs())
        {
            return Err(Error::Shape("nodes are not a logarithmic grid".into()));
        }
        Ok(g)
    }
}

/// Samples of a function at the nodes of a [`Grid`]; `+∞` is allowed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFn {
    grid: Grid,
    values: Vec<f64>,
}

impl GridFn {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} values for {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("NaN sample".into()));
        }
        Ok(GridFn { grid, values })
    }

    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.nodes().iter().map(|&t| f(t)).collect();
        GridFn {
            grid: grid.clone(),
            values,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> GridFn {
        let values = self
            .grid
            .nodes()
            .iter()
            .zip(&self.values)
            .map(|(&t, &v)| f(t, v))
            .collect();
        GridFn {
            grid: self.grid.clone(),
            values,
        }
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[1] <= w[0])
    }

    /// Value at `t` by linear interpolation in `u`; constant below `t_min`.
    pub fn interpolate(&self, t: f64) -> f64 {
        let nodes = self.grid.nodes();
        if t <= nodes[0] {
            return self.values[0];
        }
        if t >= 1.0 {
            return self.values[nodes.len() - 1];
        }
        let j = nodes.partition_point(|&x| x < t);
        let (t0, t1) = (nodes[j - 1], nodes[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        if v0.is_infinite() || v1.is_infinite() {
            return f64::INFINITY;
        }
        let w = (log2t(t0) - log2t(t)) / (log2t(t0) - log2t(t1));
        v0 + w * (v1 - v0)
    }

    /// Trapezoid rule in `u = log(2/t)` over `[lo, hi]`; the integrand is
    /// `f(t) · t`, linear between nodes. Endpoints off the grid are
    /// interpolated. A cell touching `+∞` makes the result `+∞`.
    pub fn integrate(&self, lo: f64, hi: f64) -> Result<f64> {
        let nodes = self.grid.nodes();
        let t_min = nodes[0];
        if !(lo < hi) || lo < t_min * (1.0 - 1e-12) || hi > 1.0 + 1e-12 {
            return Err(Error::Range {
                lo,
                hi,
                span_lo: t_min,
                span_hi: 1.0,
            });
        }
        let lo = lo.max(t_min);
        let hi = hi.min(1.0);
        let mut pts: Vec<(f64, f64)> = vec![(lo, self.interpolate(lo))];
        let start = nodes.partition_point(|&x| x <= lo);
        for (k, &t) in nodes.iter().enumerate().skip(start) {
            if t >= hi {
                break;
            }
            pts.push((t, self.values[k]));
        }
        pts.push((hi, self.interpolate(hi)));
        let mut total = 0.0;
        for w in pts.windows(2) {
            let ((t0, v0), (t1, v1)) = (w[0], w[1]);
            if v0.is_infinite() || v1.is_infinite() {
                return Ok(f64::INFINITY);
            }
            let du = log2t(t0) - log2t(t1);
            total += 0.5 * du * (v0 * t0 + v1 * t1);
        }
        Ok(total)
    }

    /// Supremum over the nodes lying in `[lo, hi]`.
    pub fn sup_on(&self, lo: f64, hi: f64) -> Result<f64> {
        let nodes = self.grid.nodes();
        let i0 = self.grid.first_at_or_above(lo);
        let i1 = nodes.partition_point(|&x| x <= hi * (1.0 + 1e-12));
        if i0 >= i1 {
            return Err(Error::Range {
                lo,
                hi,
                span_lo: nodes[0],
                span_hi: 1.0,
            });
        }
        Ok(self.values[i0..i1].iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Write the `t,value` CSV form.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Parameter(format!("csv write failed: {e}"));
        wr.write_record(["t", "value"]).map_err(io)?;
        for (t, v) in self.grid.nodes().iter().zip(&self.values) {
            wr.write_record([format_value(*t), format_value(*v)]).map_err(io)?;
        }
        wr.flush().map_err(|e| Error::Parameter(e.to_string()))
    }

    /// Read the `t,value` CSV form; `inf` is accepted as a value.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut rd = csv::Reader::from_reader(r);
        let headers = rd
            .headers()
            .map_err(|e| Error::parse(e.to_string(), "CSV header `t,value`"))?
            .clone();
        if headers.len() != 2 || headers.get(0) != Some("t") || headers.get(1) != Some("value") {
            return Err(Error::parse(headers.iter().collect::<Vec<_>>().join(","), "CSV header `t,value`"));
        }
        let mut ts = Vec::new();
        let mut vs = Vec::new();
        for rec in rd.records() {
            let rec = rec.map_err(|e| Error::parse(e.to_string(), "CSV row `t,value`"))?;
            let t = parse_value(rec.get(0).unwrap_or(""))?;
            let v = parse_value(rec.get(1).unwrap_or(""))?;
            ts.push(t);
            vs.push(v);
        }
        let grid = Grid::from_nodes(&ts)?;
        GridFn::new(grid, vs)
    }
}

pub(crate) fn format_value(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

fn parse_value(s: &str) -> Result<f64> {
    let s = s.trim();
    match s {
        "inf" | "+inf" | "Inf" | "infinity" => Ok(f64::INFINITY),
        _ => s
            .parse::<f64>()
            .ok()
            .filter(|v| !v.is_nan())
            .ok_or_else(|| Error::parse(s, "real number or `inf`")),
    }
}
