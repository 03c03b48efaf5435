//! Entangled-histories simulation: linear algebra core, history states on
//! two time slots, temporal operators and their simultaneous
//! eigenhistories, monitor-coupling protocols, the monitored two-slit
//! experiment, the two-copy protocol, and a TOML scenario runner.

pub mod dist;
pub mod error;
pub mod history;
pub mod linalg;
pub mod monitor;
pub mod multicopy;
pub mod scenario;
pub mod temporal;
pub mod two_slit;

pub use error::{Error, Result};
pub use history::{build_history, history_inner, odot, schmidt_rank, Basis, HistoryState};
pub use linalg::{DenseOperator, StateVector, TOL_CHAIN, TOL_EXACT};
pub use temporal::{
    all_entangled, commutator_norm, make_temporal, op_a, op_b, simultaneous_eigenhistories,
    EigenhistoryBasis, Sign, TemporalOperator, SIGN_PAIRS,
};
