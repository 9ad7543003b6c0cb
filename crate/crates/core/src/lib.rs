//! Symbolic solvers for LSAT-style questions.
//!
//! * [`logic`]: implications between propositional symbols and their
//!   closure under contraposition and transitivity.
//! * [`game`]: participants, positions and the assignment grid of a logic game.
//! * [`program`]: the constraint-program language, its parser, printer and
//!   three-valued evaluator.
//! * [`executor`]: search for legitimate assignments and option scoring.
//! * [`interp`]: entity extraction and a trigger lexicon that turns
//!   constraint sentences into programs.
//! * [`harness`]: datasets, evaluation runs and score reporting.
//!
//! The guide in `book/` walks through each of these with runnable examples.

pub mod executor;
pub mod game;
pub mod harness;
pub mod interp;
pub mod logic;
pub mod program;
pub mod rng;

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/introduction.md")]
mod book_introduction {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/logic.md")]
mod book_logic {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/games.md")]
mod book_games {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/programs.md")]
mod book_programs {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/solving.md")]
mod book_solving {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/interpretation.md")]
mod book_interpretation {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/harness.md")]
mod book_harness {}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/seeds.md")]
mod book_seeds {}

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
mod readme {}
