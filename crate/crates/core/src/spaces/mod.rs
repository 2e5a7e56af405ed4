//! Space specifications, Young functions, norms and fundamental functions.

pub mod fundamental;
pub mod norm;
pub mod orlicz;
pub mod spec;
pub mod young;

pub use fundamental::{FundamentalFn, Majorant, Phi};
pub use norm::{luxemburg_norm, luxemburg_steps, norm, norm_on, norm_star};
pub use orlicz::{
    delta2, delta2_sampled, dominates_near_infinity, endpoint_spaces, equivalent_near_infinity,
    fundamental, fundamental_on, fundamental_orlicz, orlicz_membership, MembershipReport,
};
pub use spec::{parse_real, validate_spec, SpaceSpec};
pub use young::{Asymptote, YoungFn, YoungSpec};

/// Factor by which a fundamental function may fail monotonicity of `φ` or
/// `t/φ` and still be accepted. Quasiconcave functions have factor 1; the
/// slack admits power-log levels whose `t/φ` dips slightly near `t = 1`.
pub const QUASICONCAVE_SLACK: f64 = 2.0;
