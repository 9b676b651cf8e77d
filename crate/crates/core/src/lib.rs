//! Achievable and secrecy rates of STAR-RIS, RIS, SISO and decode-and-forward
//! relay links under a distance-based path-loss model, plus the element
//! counts at which a surface overtakes a relay.
// `!(x > 0.0)` style checks are deliberate: they reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod power;
pub mod presets;
pub mod rates;
pub mod scenario;
pub mod secrecy;
pub mod sweep;
pub mod thresholds;

pub use error::{Error, Result};
pub use scenario::Scenario;
