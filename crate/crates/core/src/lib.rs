//! Petri nets generalized over a catalog of algebraic theories.
//!
//! A [`QNet`] assigns to every transition a source and a target drawn from
//! the free model of a theory on the places: multisets for ordinary Petri
//! nets, words for pre-nets, integer vectors for ℤ-nets, reduced group words,
//! and finite sets for elementary net systems. On top of that sit the
//! translations between theories, the adjunctions that build the free
//! category of processes of a net, and the symmetric closure of pre-nets.

pub mod error;
pub mod freecat;
pub mod net;
pub mod reflexive;
pub mod suites;
pub mod symmetry;
pub mod theory;

pub use error::{Error, Result};
pub use freecat::{EqVerdict, LayeredForm, MorTerm};
pub use net::{Diagnostic, NetMorphism, QNet, Transition};
pub use reflexive::{GraphMorphism, QGraph, ReflexiveQNet};
pub use symmetry::SymTerm;
pub use theory::{FreeElem, Payload, Sign, Theory, TheoryArrow};
