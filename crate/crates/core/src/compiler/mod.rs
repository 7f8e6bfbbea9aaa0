//! Two-stack machines, Turing machines, and their compilation into ReLU RNNs.

mod compile;
mod json;
pub mod machine;
pub mod stack;
pub mod turing;

pub use compile::{
    attach_output_gadget, compile_two_stack, simulate, CompiledRnn, TraceEntry, STEP_DILATION,
};
pub use json::{CompiledJson, Machine, MachineJson};
pub use machine::{Configuration, Move, Rule, StackAction, Top, TopPattern, TwoStackMachine};
pub use stack::{decode_stack, encode_stack, encode_stack_literal};
pub use turing::{tm_to_two_stack, Direction, TmConversion, TmOutcome, TmRule, TuringMachine};
