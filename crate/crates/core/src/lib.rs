//! Ehrenfeucht-Fraïssé equivalence for scattered linear orders given as terms.

pub mod closed_form;
pub mod engine;
pub mod harness;
pub mod term;
pub mod text;

pub use engine::{BoundsConfig, Engine, EngineError, Length, PlayTrace, Theory};
pub use term::{Direction, Term};
pub use text::{parse_term, print_term};
