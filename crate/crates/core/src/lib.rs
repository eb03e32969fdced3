//! Turing machines as dynamical systems.
//!
//! A machine acts on configurations (state, bi-infinite tape) by its global
//! transition map. This crate computes the φ-criterion of a machine and the
//! directed multigraphs built from it, decides strong regularity and
//! regularity with checkable witnesses, turns witnesses into exact lower
//! bounds on topological entropy, counts allowed n-words exactly, and
//! compiles machines into generalized shifts whose conjugacy with the
//! machine is verified mechanically.

pub mod config;
pub mod corpus;
pub mod error;
pub mod gshift;
pub mod machine;
pub mod parse;
pub mod phi;
pub mod regularity;
pub mod sample;
pub mod scalar;
pub mod words;

pub use config::{distance, make_config, make_config_named, run, step, Configuration, RunResult};
pub use corpus::builtin_machine;
pub use error::{Error, ParseError, ParseErrorKind, Result};
pub use gshift::{
    block_encode, cantor_encode, compile_gshift, embed, gshift_step, unembed, verify_conjugacy, ASequence,
    BinarySequence, CantorPoint, ConjugacyReport, GeneralizedShift,
};
pub use machine::{Direction, HaltingMode, Move, State, Symbol, Transition, TuringMachine};
pub use parse::parse_machine;
pub use phi::{eps_graph, phi, phi_table, EpsGraph, PhiOutcome, PhiTable};
pub use regularity::{
    check_regularity, check_strong_regularity, entropy_lower_bound, verify_witness, EntropyBound, EntropyCertificate,
    RegularWitness, StrongWitness, Verdict, Witness,
};
pub use scalar::{Estimate, Scalar};
pub use words::{
    count_words, count_words_oracle, entropy_estimates, word_set, StartStates, TraceWord, WordCountReport, WordOptions,
};

/// Word-count report with `f64` estimates.
pub type EntropyReport = WordCountReport<f64>;

/// Exact rational numbers with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

/// Cantor-set coordinates computed exactly.
pub type ExactCantorPoint = CantorPoint<Rational>;
