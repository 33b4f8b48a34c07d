//! Two-layer reversible data hiding in the MSB planes of grayscale images,
//! a JPEG quantization attack channel, and the experiments that measure how
//! the scheme breaks under it, together with three hardening variants.

pub mod analysis;
pub mod bitplane;
pub mod corpus;
pub mod error;
pub mod hardening;
pub mod jpeg_sim;
pub mod rdh_core;

pub use corpus::{BitStream, GrayImage};
pub use error::{Error, Result};
