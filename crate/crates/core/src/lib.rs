//! Generalized Kloosterman sums over prime fields, the complete sum-product
//! sums `Σ_I`, `Σ_II` built from them, the stratification of the parameter
//! space by the size of the singular fiber, and the bilinear forms those sums
//! control.
//!
//! The modules build on each other in order:
//!
//! - [`field`]: `F_q` arithmetic, discrete logs, characters, Gauss sums.
//! - [`chars`]: Kummer induction, self-duality, and the NIO / CGM predicates.
//! - [`kloosterman`]: hyper-Kloosterman tables, naive and FFT.
//! - [`complete`]: `𝐊`, `𝐑`, `Σ_I`, `Σ_II`.
//! - [`strata`]: the singular polynomial `P_b`, fiber counts, box counts.
//! - [`bilinear`]: bilinear forms, bound formulas, averaged comparisons.
//! - [`runner`]: the subcommand dispatcher behind the `klstrata` binary.

pub mod bilinear;
pub mod chars;
pub mod complete;
pub mod error;
pub mod field;
pub mod kloosterman;
pub mod ladder;
pub mod numeric;
pub mod report;
pub mod runner;
pub mod strata;

pub use chars::{classify_tuple, twist_to_cgm, CharTuple, ClassificationReport, TwistOutcome};
pub use complete::{complete_sums, eval_kr, sigma_i, sigma_ii, ParamTuple, SumReport};
pub use error::{Error, Result};
pub use field::{MultChar, PrimeField};
pub use kloosterman::{kl_naive, kl_naive_table, kl_table_fast, KlTable};
pub use report::Cplx;
pub use strata::{is_diagonal, singular_polynomial, z_fiber_count, StratumReport};
