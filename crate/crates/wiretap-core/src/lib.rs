//! Rate regions of the two-user multi-receiver wiretap channel with public
//! and confidential messages.
//!
//! The crate covers discrete memoryless channels and Gaussian MIMO channels:
//! numeric evaluation of the inner and outer bounds, a symbolic
//! Fourier–Motzkin engine over entropy expressions that replays the
//! elimination chain behind the general inner bound, and numerical checks of
//! the Fisher-information toolbox used for Gaussian optimality.

pub mod algebra;
pub mod error;
pub mod fisher;
pub mod fm;
pub mod info;
pub mod io;
pub mod linalg;
pub mod regions;
pub mod rng;

pub use error::{Error, Result};
pub use info::{ChannelSpec, Kernel, ProbTable, VarId};
