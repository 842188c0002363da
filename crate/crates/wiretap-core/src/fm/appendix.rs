//! The recorded elimination chain of the general (Marton-coded) inner
//! region, from the rate-split constraints to the ten final bounds, bundled
//! with the library.

use super::script::Script;
use crate::error::{Error, Result};

/// The chain script.
pub const SCRIPT: &str = include_str!("../../fixtures/appendix/general_inner.script");

/// Recorded systems referenced by [`SCRIPT`], by name.
pub const SYSTEMS: &[(&str, &str)] = &[
    ("stage01_start", include_str!("../../fixtures/appendix/stage01_start.sys")),
    ("stage02_d0", include_str!("../../fixtures/appendix/stage02_d0.sys")),
    ("stage03_rpp0", include_str!("../../fixtures/appendix/stage03_rpp0.sys")),
    ("stage04_l1", include_str!("../../fixtures/appendix/stage04_l1.sys")),
    ("stage05_l2", include_str!("../../fixtures/appendix/stage05_l2.sys")),
    ("stage06_d1", include_str!("../../fixtures/appendix/stage06_d1.sys")),
    ("stage07_d2", include_str!("../../fixtures/appendix/stage07_d2.sys")),
    ("stage08_private_transfer", include_str!("../../fixtures/appendix/stage08_private_transfer.sys")),
    ("stage09_a1", include_str!("../../fixtures/appendix/stage09_a1.sys")),
    ("stage10_a2", include_str!("../../fixtures/appendix/stage10_a2.sys")),
    ("stage11_common_public_transfer", include_str!("../../fixtures/appendix/stage11_common_public_transfer.sys")),
    ("stage12_a", include_str!("../../fixtures/appendix/stage12_a.sys")),
    ("stage13_b", include_str!("../../fixtures/appendix/stage13_b.sys")),
    ("stage14_common_secret_transfer", include_str!("../../fixtures/appendix/stage14_common_secret_transfer.sys")),
    ("stage15_a", include_str!("../../fixtures/appendix/stage15_a.sys")),
    ("stage16_b", include_str!("../../fixtures/appendix/stage16_b.sys")),
    ("final_general_inner", include_str!("../../fixtures/appendix/final_general_inner.sys")),
];

/// Looks up a bundled system by name.
pub fn system_text(name: &str) -> Result<String> {
    SYSTEMS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| t.to_string())
        .ok_or_else(|| Error::Io(format!("no bundled system named `{name}`")))
}

/// The bundled chain script with its systems resolved.
pub fn general_inner_chain() -> Result<Script> {
    Script::parse(SCRIPT, &system_text)
}
