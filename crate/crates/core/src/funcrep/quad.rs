//! Quadrature primitives.
//!
//! Everything here works in the coordinate `u = log(2/t)`, which maps `(0, 1]`
//! onto `[log 2, ∞)` and turns the power-log atoms `t^a (log 2/t)^b` into
//! `2^{a+1} e^{-(a+1)u} u^b` after including the Jacobian `dt = -t du`.

use std::collections::BinaryHeap;
use std::f64::consts::LN_2;

/// Relative tolerance used by [`quad_powlog`].
pub const QUAD_RTOL: f64 = 1e-12;

const MAX_SEGMENTS: usize = 4000;

// Gauss–Kronrod 7/15 nodes and weights on [-1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let pair = f(c - dx) + f(c + dx);
        kron += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// Globally adaptive Gauss–Kronrod quadrature of `f` over a finite `[a, b]`.
///
/// Bisects the segment with the largest error estimate until the summed
/// estimate drops below `rtol · |integral|` (or a tiny absolute floor).
pub fn adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rtol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    if a > b {
        return -adaptive(f, b, a, rtol);
    }
    let (v, e) = gk15(&f, a, b);
    if !v.is_finite() {
        return v;
    }
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value: v, err: e });
    let mut total = v;
    let mut total_err = e;
    let mut n = 1;
    while total_err > rtol * total.abs().max(1e-300) && n < MAX_SEGMENTS {
        let Some(seg) = heap.pop() else { break };
        let mid = 0.5 * (seg.a + seg.b);
        if mid <= seg.a || mid >= seg.b {
            heap.push(seg);
            break;
        }
        let (v1, e1) = gk15(&f, seg.a, mid);
        let (v2, e2) = gk15(&f, mid, seg.b);
        total += v1 + v2 - seg.value;
        total_err += e1 + e2 - seg.err;
        heap.push(Segment { a: seg.a, b: mid, value: v1, err: e1 });
        heap.push(Segment { a: mid, b: seg.b, value: v2, err: e2 });
        n += 1;
    }
    // Re-sum to shed accumulated rounding in the running total.
    heap.iter().map(|s| s.value).sum()
}

/// Integral of `f` over `[a, ∞)` for an integrand that eventually decays.
///
/// Integrates panels of geometrically growing width until a panel contributes
/// less than `rtol` of the running total. Returns `+∞` if the panels never
/// shrink (the integral does not converge at desk scale).
pub fn adaptive_to_infinity<F: Fn(f64) -> f64>(f: F, a: f64, width: f64, rtol: f64) -> f64 {
    let mut lo = a;
    let mut w = width.max(1e-3);
    let mut total = 0.0;
    for _ in 0..200 {
        let part = adaptive(&f, lo, lo + w, rtol);
        if !part.is_finite() {
            return part;
        }
        total += part;
        if part.abs() <= rtol * total.abs() || part == 0.0 {
            return total;
        }
        lo += w;
        w *= 2.0;
        if !lo.is_finite() {
            break;
        }
    }
    f64::INFINITY
}

/// `log(2/t)`.
#[inline]
pub fn log2t(t: f64) -> f64 {
    LN_2 - t.ln()
}

/// Whether `∫_0^h t^a (log 2/t)^b dt` converges at zero.
pub fn converges_at_zero(a: f64, b: f64) -> bool {
    a > -1.0 || (a == -1.0 && b < -1.0)
}

/// `∫_{lo}^{hi} t^a (log 2/t)^b dt` for `0 ≤ lo < hi ≤ 1`.
///
/// Closed forms are used for `b = 0` and `a = -1`; otherwise the integral is
/// taken in `u = log(2/t)` by adaptive Gauss–Kronrod quadrature. `lo = 0` is
/// allowed and yields `+∞` when the integral diverges at zero.
pub fn quad_powlog(a: f64, b: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo >= 0.0 && hi <= 1.0 + 1e-15);
    if !(hi > lo) {
        return 0.0;
    }
    if lo == 0.0 && !converges_at_zero(a, b) {
        return f64::INFINITY;
    }
    let e = a + 1.0;
    if b == 0.0 {
        if a == -1.0 {
            return (hi / lo).ln();
        }
        if lo == 0.0 {
            return hi.powf(e) / e;
        }
        // lo^{e} · expm1(e · log(hi/lo)) / e avoids cancellation when e ≈ 0.
        return lo.powf(e) * (e * (hi / lo).ln()).exp_m1() / e;
    }
    if a == -1.0 {
        let (u_lo, u_hi) = (log2t(hi), if lo == 0.0 { f64::INFINITY } else { log2t(lo) });
        if b == -1.0 {
            return (u_hi / u_lo).ln();
        }
        let p = b + 1.0;
        if u_hi.is_infinite() {
            // p < 0 here by convergence.
            return -u_lo.powf(p) / p;
        }
        return (u_hi.powf(p) - u_lo.powf(p)) / p;
    }
    let scale = 2f64.powf(e);
    let u_lo = log2t(hi);
    let integrand = |u: f64| (-e * u).exp() * u.powf(b);
    if lo == 0.0 {
        let width = 4.0 / e;
        return scale * adaptive_to_infinity(integrand, u_lo, width, QUAD_RTOL);
    }
    let u_hi = log2t(lo);
    // Split long ranges at a few points so the adaptive scheme sees the peak of
    // u^b e^{-eu} (at u = b/e) and the exponential tail separately.
    let mut cuts = vec![u_lo];
    let peak = b / e;
    if peak > u_lo && peak < u_hi {
        cuts.push(peak);
    }
    let span = u_hi - u_lo;
    if span > 8.0 {
        let step = (span / 8.0).max(1.0);
        let mut x = u_lo + step;
        while x < u_hi {
            cuts.push(x);
            x += step;
        }
    }
    cuts.push(u_hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    scale
        * cuts
            .windows(2)
            .map(|w| adaptive(integrand, w[0], w[1], QUAD_RTOL))
            .sum::<f64>()
}
