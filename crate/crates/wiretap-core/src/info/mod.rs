//! Discrete probability tables, entropies and mutual informations (in nats),
//! channel kernels and Markov-chain checks.

mod channel;
mod table;

pub use channel::{build_degraded_joint, ChannelKernel, ChannelSpec, OUTPUT_NAMES};
pub use table::{
    check_markov, mutual_information, validate_table, Kernel, ProbTable, VarId, CELL_CAP,
    MASS_TOL,
};
