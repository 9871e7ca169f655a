//! Fixtures shared by the integration tests.

#![allow(dead_code)]

use std::sync::OnceLock;
use vortex_solitons::profile::{solve_profile, VortexProfile};

/// Profile used by every field builder in the tests.
pub fn profile() -> &'static VortexProfile {
    static P: OnceLock<VortexProfile> = OnceLock::new();
    P.get_or_init(|| solve_profile(40.0, 0.01, 1e-10).expect("profile solve"))
}

/// Relative difference with an absolute floor of 1.
pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
