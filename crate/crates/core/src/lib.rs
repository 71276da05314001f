//! Numerical laboratory for semiclassical quasimodes near singular leaves of
//! quantum completely integrable systems.
//!
//! The crate is organised bottom-up:
//!
//! * [`special`]: Hermite functions, complex Gamma, Bessel `J_k`, Gauss rules.
//! * [`grid`] and [`cutoff`]: sampled functions and the fixed cutoff profiles.
//! * [`quasimode`]: the four model eigenfunction families and their
//!   microlocalizations.
//! * [`quantization`]: discrete ħ-Kohn–Nirenberg quantization of (small-scale)
//!   symbols and matrix elements.
//! * [`mass`]: small-scale masses of the model blocks with closed-form limits.
//! * [`eliasson`]: linear-symplectic classification of singular orbits.
//! * [`surfaces`]: flat torus, round sphere and surfaces of revolution.
//! * [`scaling`]: L^p norms, Hölder lower bounds, ladder averages and exponent fits.
//! * [`runner`]: configuration, orchestration and deterministic serialization.

pub mod cutoff;
pub mod eliasson;
pub mod error;
pub mod grid;
pub mod mass;
pub mod quantization;
pub mod quasimode;
pub mod runner;
pub mod scaling;
mod spectral;
pub mod special;
pub mod surfaces;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// Library version echoed into run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
