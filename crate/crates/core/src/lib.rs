//! Exact-arithmetic toolkit relating weighted automata and first-order RNN
//! language models.
//!
//! * [`automata`]: weighted/probabilistic automata, forward evaluation, PFA checks.
//! * [`rnn`]: RNN-LM evaluation with base-2 softmax, exact or interval-certified.
//! * [`compiler`]: two-stack machines and Turing machines compiled into ReLU RNNs.
//! * [`reduction`]: 3-SAT to (PFA, RNN) construction and its closed forms.
//! * [`decision`]: distance, equivalence, consensus and cut-point procedures.

pub mod alphabet;
pub mod automata;
pub mod cli;
pub mod compiler;
pub mod decision;
pub mod error;
pub mod interval;
pub mod language;
pub mod rational;
pub mod reduction;
pub mod rnn;
pub mod shortlex;
pub mod verify;

pub use alphabet::{Alphabet, Word};
pub use error::{Error, Result};
pub use language::{cumulative_mass, Weight, WeightedLanguage};
pub use rational::Rational;
