//! Finite-blocklength wiretap coding over binary-input symmetric channels.
//!
//! The crate is organised bottom-up:
//!
//! - [`dmc`]: binary-input discrete memoryless channels and information measures.
//! - [`polarize`]: bit-channel synthesis with degrading/upgrading quantization,
//!   giving certified capacity bounds for every synthesized bit channel.
//! - [`codes`]: the polar transform, the PAC convolutional precoder and encoding.
//! - [`scl`]: successive-cancellation (list) decoding for polar and PAC codes.
//! - [`wiretap`]: coset secrecy codes, leakage bounds and semantic-secrecy conversion.
//! - [`ie`]: GF(2^k) arithmetic and the invertible-extractor secrecy scheme.
//! - [`oracle`]: exhaustive small-blocklength checks of the bit-channel equivalence
//!   and symmetry properties the bounds rely on.
//! - [`sim`]: seeded Monte Carlo frame-error-rate simulation.
//! - [`reproduce`]: table and figure regeneration on top of the modules above.

pub mod cache;
pub mod codes;
pub mod dmc;
mod error;
pub mod ie;
pub mod oracle;
pub mod polarize;
pub mod reproduce;
pub mod scl;
pub mod sim;
pub mod wiretap;

pub use error::{Error, Result};

/// A single bit stored as `0` or `1`.
pub type Bit = u8;
