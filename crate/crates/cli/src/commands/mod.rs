//! One function per subcommand. Each returns the rendered report; the caller
//! decides where it goes.

mod bell;
mod cost;
mod fidelity;
mod toffoli;
mod truth_table;
mod verify;

pub use bell::bell;
pub use cost::cost;
pub use fidelity::fidelity;
pub use toffoli::toffoli;
pub use truth_table::truth_table;
pub use verify::verify;

use cavqed_core::protocol::{Engine, EngineMode};
use cavqed_core::C64;

use crate::config::Settings;
use crate::error::Result;

/// Amplitude tolerance against ideal outputs with the eliminated cavity.
pub const EFFECTIVE_TOL: f64 = 1e-8;
/// Same with the cavity mode kept, where the dispersive error is O((Ωc/Δ)²).
pub const DISPERSIVE_TOL: f64 = 1e-2;

pub(crate) fn engine(s: &Settings) -> Result<Engine> {
    Ok(Engine::new(s.params, s.engine_mode())?.with_integrator(s.integrator))
}

pub(crate) fn mode_tolerance(mode: EngineMode) -> f64 {
    if mode == EngineMode::Effective {
        EFFECTIVE_TOL
    } else {
        DISPERSIVE_TOL
    }
}

pub(crate) fn fmt_complex(z: C64) -> String {
    format!("{:+.6}{:+.6}i", z.re, z.im)
}

pub(crate) fn verdict(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}
