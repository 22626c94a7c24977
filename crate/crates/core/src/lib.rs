//! Hahn (q,w)-quantum calculus and the deformed Newtonian mechanics built on it.
//!
//! * [`params`], [`numbers`], [`pochhammer`], [`hahn`]: deformation parameters,
//!   (q,w)-numbers, q-shifted factorials, the Hahn derivative and integral.
//! * [`qexp`]: the (q,w)-exponential and the `e_q`, `e_{1/q}` series.
//! * [`kinematics`]: uniform velocity and acceleration by closed form,
//!   first-order iteration and the second-order pipeline.
//! * [`resist`]: motion against a drag proportional to the deformed average
//!   velocity, with and without gravity.
//! * [`table`], [`identities`], [`cli`]: trajectory tables, the identity
//!   verification suite and the command-line front end.

pub mod cli;
pub mod error;
pub mod hahn;
pub mod identities;
pub mod kinematics;
pub mod numbers;
pub mod params;
pub mod pochhammer;
pub mod qexp;
pub mod resist;
pub mod series;
pub mod table;

pub use error::{QwError, Result};
pub use params::{DeformationParams, ScalarFunction, TruncationPolicy};
