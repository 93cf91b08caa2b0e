//! Empirical caps for the remainder checks. The asymptotics only bound the
//! remainders up to unspecified constants; these are the constants the
//! harnesses accept.

/// |N(1, T) − count_main| / log T.
pub const COUNT_REMAINDER_CAP: f64 = 10.0;
/// a-points in a unit strip / log T.
pub const STRIP_RATIO_CAP: f64 = 10.0;
/// |Σ x^ρ − expsum_main| / log T.
pub const EXPSUM_CAP: f64 = 15.0;
/// Littlewood balance remainder / log T.
pub const LITTLEWOOD_CAP: f64 = 20.0;
/// |local expansion residual| / log t.
pub const LOCAL_EXPANSION_CAP: f64 = 20.0;
/// 2π Σ_{β>1/2} (β − 1/2) / (U log log T).
pub const BETA_EXCESS_CAP: f64 = 30.0;
/// |Σ(β + b) − beta_sum_main| / (U / log T).
pub const BETA_SUM_CAP: f64 = 50.0;
/// Minimum share of a-points inside the central band.
pub const CENTRAL_FRACTION_MIN: f64 = 0.9;
/// Allowed increase of the off-band share along a height ladder.
pub const CLUSTER_TREND_TOL: f64 = 0.05;
/// Abscissa offset b in Σ(β + b).
pub const BETA_SUM_B: f64 = 5.0;
