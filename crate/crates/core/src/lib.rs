//! Exact workbench for cyclic arcs of Singer type in `PG(2,q)`, their
//! Segre envelopes, and the genus of the associated cyclic curves.

pub mod arcs;
pub mod arith;
pub mod branches;
pub mod bivar;
pub mod curvefam;
pub mod envelope;
mod error;
pub mod fields;
pub mod genus;
pub mod linalg;
pub mod plane;
pub mod poly;
pub mod series;
pub mod singular;
pub mod workbench;

pub use error::{Error, Result};
