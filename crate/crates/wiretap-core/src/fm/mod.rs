//! Linear inequality systems over named rate variables, with symbolic
//! (entropy-expression) or numeric right-hand sides: Fourier–Motzkin
//! elimination, equality substitution, rate transfers, vertex enumeration,
//! region comparison and scripted elimination replays.

pub mod appendix;
pub mod lp;
mod rhs;
pub mod script;
mod system;
mod transfer;
mod vertices;

pub use rhs::{Rhs, RhsValue};
pub use script::{execute_steps, parse_row, parse_system, systems_equal, verify_elimination_script, Script, ScriptReport, Step, StepOutcome};
pub use system::{fm_eliminate, normalize_rows, substitute_equality, IneqSystem, LinIneq, Relation};
pub use transfer::{apply_rate_transfer, Transfer};
pub use vertices::{contained_in, region_equal, vertices, VPolytope, MAX_VERTEX_DIM};
