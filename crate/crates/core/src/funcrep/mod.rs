//! Function representations on `(0, 1]`: power-log atoms, log-grid samples
//! and step functions, with the quadrature they rely on.

pub mod func;
pub mod grid;
pub mod powlog;
pub mod quad;
pub mod step;

pub use func::{default_grid, Func, Star};
pub use grid::{make_log_grid, Grid, GridFn, DEFAULT_POINTS_PER_DECADE, DEFAULT_T_MIN};
pub use powlog::{Atom, PowLogFn};
pub use quad::{log2t, quad_powlog};
pub use step::StepFn;
