//! Exact re-verification engine for the mode stability of the wave-maps
//! blow-up solution.

pub mod cases;
pub mod certify;
pub mod error;
pub mod exactmath;
pub mod numeric;
pub mod odesystem;
pub mod pipeline;
pub mod recurrence;
pub mod spherical;
pub mod standardform;

pub use cases::{Family, ModeCase};
pub use error::{Error, Result};
