//! Scenario files, seeded scenario generation, experiment presets and
//! result export around `transmig-core`.

pub mod error;
pub mod experiments;
pub mod generate;
pub mod output;
pub mod presets;
pub mod scenario;
pub mod solve;

pub use error::{Error, Result};
