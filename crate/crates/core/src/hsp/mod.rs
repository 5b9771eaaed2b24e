//! Hidden subgroup algorithms: Simon, finite abelian (standard and relaxed),
//! period finding over `Z` and over `ℝ`, with the group machinery and the `D` metrics.

pub mod abelian;
pub mod distance;
pub mod file;
pub mod group;
pub mod oracle;
pub mod period;
pub mod real;
pub mod simon;

pub use abelian::{exact_distribution, hsp_abelian, hsp_abelian_with, hsp_finitely_generated, HspResult, OracleFg};
pub use distance::{distance_d, separation_finite, separation_z, DistanceInput};
pub use file::{parse_oracle_file, Oracle, OracleSpec};
pub use group::{dot_g, perp, GroupSpec, SubgroupSpec};
pub use oracle::{OracleAbelian, OracleZ2n, PeriodicZ, QueryCounter};
pub use period::{fsp_modulus, period_z, period_z_with, PeriodZResult};
pub use real::{distance_r, leading_bits, period_r, PeriodRParams, PeriodROutcome, PeriodRSetup, StepFunctionR};
pub use simon::{simon, simon_sample, simon_with_budget, SimonResult};
