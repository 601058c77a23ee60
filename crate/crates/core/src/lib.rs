//! Translation-invariant metrics on the real line, d(x, y) = h(|x − y|).
//!
//! Gauges h, envelope constructions below families of caps, ball geometry,
//! dimension estimates and the Hex certificate for non-linearly-connected
//! gauges.

pub mod cli;
pub mod dimension;
pub mod envelope;
pub mod gauge;
pub mod geometry;
pub mod hexcert;
pub mod quadrature;
