//! Exact calculus of no-signalling correlated boxes.
//!
//! A "box" is an abstract device with one input and one output; a multi-box
//! state is the conditional probability table for the joint outputs given the
//! joint inputs. This crate represents such states with arbitrary-precision
//! rationals and provides:
//!
//! - construction, marginalization, conditioning and tensoring of box states
//!   with exact no-signalling verification ([`state`]);
//! - the 24 extremal states of the two-box binary no-signalling polytope,
//!   CHSH evaluation and exact local-polytope membership ([`catalog`]);
//! - Bob's deterministic sequential wiring strategies and their induced
//!   couplers ([`wiring`]);
//! - the coupler polytope, its vertex enumeration, triviality classification
//!   and the impossibility analysis for the naive swapping coupler
//!   ([`coupler`]);
//! - an exact rational polytope engine (double description plus simplex
//!   feasibility) underpinning the above ([`polytope`]).
//!
//! No floating point is used anywhere in the core.

pub mod catalog;
pub mod coupler;
pub mod error;
pub mod io;
pub mod polytope;
pub mod rational;
pub mod state;
pub mod wiring;

pub use error::Error;
pub use rational::Rational;
pub use state::{BoxSignature, BoxState};
