//! DL-Lite_FR reasoning and knowledge-base evolution.

pub mod abox_evolution;
pub mod error;
pub mod evolution;
pub mod finite_models;
pub mod generators;
pub mod io;
pub mod kb;
pub mod postulates;
pub mod reasoner;

pub use error::{Error, Result};
pub use kb::{Assertion, Axiom, Basic, Concept, Fragment, KnowledgeBase, Membership, Role, Signature};
