//! Quantum reflection and transmission through the symmetric barrier-type
//! shifted Deng-Fan potential.
//!
//! The closed-form route ([`scatter`]) maps each half-line onto a
//! hypergeometric equation and matches the two solutions at the origin.
//! [`oracle`] integrates the Schrödinger equation directly and serves as an
//! independent check.
//!
//! ```
//! use dengfan::{scatter, BarrierParams, MatchingMode};
//!
//! let res = scatter::solve(0.05, &BarrierParams::table1(), MatchingMode::Corrected).unwrap();
//! assert!((res.transmission - 0.0209209).abs() < 1e-6);
//! assert!(res.unitarity_residual < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod exec;
pub mod grid;
pub mod hyp2f1;
pub mod model;
pub mod oracle;
pub mod reference;
pub mod scatter;

pub use exec::Execution;
pub use model::{BarrierParams, Side, SideCoefficients, TauBranch};
pub use oracle::{IntegrationConfig, OracleResult};
pub use scatter::{MatchCoefficients, MatchingMode, ScatteringResult};
