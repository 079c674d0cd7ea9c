//! Solver toolkit for gauged Q-balls in the piecewise parabolic potential
//! U(f) = ½[f² + ε(1−f) − ε|1−f|].
//!
//! Three mutually cross-validating routes to the same objects:
//!
//! * [`numeric`] — ground-truth radial solver for the coupled scalar/gauge
//!   system, with charge, energy (two algebraic forms) and tail asymptotics;
//! * [`thinwall`] — the analytic step-ansatz branch: closed-form frequency,
//!   energy, stationary radius, charge bound, and the degenerate ε = 2 case;
//! * [`picard`] — successive-approximation gauge profiles beyond the
//!   thin-wall limit via the Riccati variable v = d/dr ln(r·g).
//!
//! [`specfun`] supplies the Shi/Ei/Chi kernel the closed forms need, and
//! [`cli`] exposes everything as batch subcommands emitting CSV/JSON.

pub mod checks;
pub mod interp;
pub mod cli;
pub mod error;
pub mod model;
pub mod numeric;
pub mod picard;
pub mod quad;
pub mod roots;
pub mod specfun;
pub mod thinwall;

pub use error::{QballError, Result};
