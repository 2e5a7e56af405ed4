//! Benchmark fixtures shared by the criterion targets.

use rispace::{make_log_grid, Grid, StepFn};

/// A non-increasing step function with `cells` cells, breakpoints spread
/// log-uniformly over `[1e-12, 1]`.
pub fn staircase(cells: usize) -> StepFn {
    let ends: Vec<f64> = (1..=cells)
        .map(|k| 10f64.powf(-12.0 * (1.0 - k as f64 / cells as f64)))
        .collect();
    let values = (0..cells).map(|k| (cells - k) as f64).collect();
    StepFn::new(ends, values).expect("increasing breakpoints")
}

/// A step function with the values of [`staircase`] in shuffled order.
pub fn scrambled(cells: usize) -> StepFn {
    let s = staircase(cells);
    let values = (0..cells).map(|k| s.values()[(k * 7919) % cells]).collect();
    StepFn::new(s.ends().to_vec(), values).expect("same breakpoints")
}

pub fn grid(points_per_decade: u32) -> Grid {
    make_log_grid(1e-30, points_per_decade).expect("admissible grid")
}
