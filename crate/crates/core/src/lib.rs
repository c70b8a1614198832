//! Epidemic spread on contact networks.
//!
//! The crate bundles graph generation and measurement ([`graph`]), exact
//! stochastic SIR/SIRS engines ([`dynamics`]), deterministic reference
//! solutions ([`ode`]), contact-reduction measures ([`interventions`]) and
//! replicate sweeps that aggregate runs into tables ([`experiments`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod experiments;
pub mod graph;
pub mod interventions;
pub mod ode;
pub mod rng;
