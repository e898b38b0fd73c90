//! Exact algebra for equivariant Seiberg–Witten–Floer complexes.
//!
//! Abstract Floer data ([`floer_data`]) is turned into the equivariant and
//! non-equivariant chain complexes ([`complexes`]); [`comparison`] relates the
//! two through the projection `i`, its kernel `Q` and the long exact
//! sequence; [`crossing`] holds the wall-crossing maps `I`, `J`, `H`; and
//! [`spectral_flow`] is a floating-point model of the chamber structure.
//! Everything except [`spectral_flow`] is exact over the rationals.

pub mod chain;
pub mod comparison;
pub mod complexes;
pub mod crossing;
pub mod error;
pub mod floer_data;
pub mod linalg;
pub mod parallel;
pub mod report;
pub mod spectral_flow;

pub use error::{Result, SwfError};
