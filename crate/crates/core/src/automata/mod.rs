//! Weighted finite automata with path-sum semantics, PFA/DPFA validation,
//! and deterministic acceptors.

mod dfa;
mod json;

pub use dfa::Dfa;
pub use json::{DfaJson, WfaJson};

use crate::alphabet::{Alphabet, Word};
use crate::error::{Error, Result};
use crate::language::{Weight, WeightedLanguage};
use crate::rational::{rat, Rational};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub symbol: usize,
    pub target: usize,
    pub weight: Rational,
}

/// Weighted automaton `(Q, I, P, δ, T)` over an alphabet. Transitions are
/// kept sparsely, grouped by source state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    alphabet: Alphabet,
    initial: Vec<Rational>,
    final_weights: Vec<Rational>,
    transitions: Vec<Vec<Transition>>,
    declared_consistent: bool,
}

impl WeightedAutomaton {
    /// Builds an automaton with `num_states` states. Unlisted initial/final
    /// weights are zero.
    pub fn new(
        alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = (usize, Rational)>,
        final_weights: impl IntoIterator<Item = (usize, Rational)>,
        transitions: impl IntoIterator<Item = (usize, usize, usize, Rational)>,
    ) -> Result<Self> {
        let state_ok = |q: usize| {
            if q < num_states {
                Ok(q)
            } else {
                Err(Error::InvalidAutomaton(format!(
                    "state {q} out of range (|Q| = {num_states})"
                )))
            }
        };
        let mut init = vec![Rational::zero(); num_states];
        for (q, w) in initial {
            init[state_ok(q)?] = w;
        }
        let mut fin = vec![Rational::zero(); num_states];
        for (q, w) in final_weights {
            fin[state_ok(q)?] = w;
        }
        let mut delta: Vec<Vec<Transition>> = vec![Vec::new(); num_states];
        for (from, symbol, to, weight) in transitions {
            state_ok(from)?;
            state_ok(to)?;
            if symbol >= alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{symbol}")));
            }
            if delta[from]
                .iter()
                .any(|t| t.symbol == symbol && t.target == to)
            {
                return Err(Error::InvalidAutomaton(format!(
                    "duplicate transition ({from}, {}, {to})",
                    alphabet.name(symbol)
                )));
            }
            delta[from].push(Transition {
                symbol,
                target: to,
                weight,
            });
        }
        Ok(WeightedAutomaton {
            alphabet,
            initial: init,
            final_weights: fin,
            transitions: delta,
            declared_consistent: false,
        })
    }

    /// Marks the automaton as a consistent language model.
    pub fn declare_consistent(mut self, consistent: bool) -> Self {
        self.declared_consistent = consistent;
        self
    }

    pub fn num_states(&self) -> usize {
        self.initial.len()
    }

    pub fn initial(&self) -> &[Rational] {
        &self.initial
    }

    pub fn final_weights(&self) -> &[Rational] {
        &self.final_weights
    }

    pub fn transitions_from(&self, q: usize) -> &[Transition] {
        &self.transitions[q]
    }

    pub fn num_transitions(&self) -> usize {
        self.transitions.iter().map(Vec::len).sum()
    }

    /// All transitions as `(from, symbol, to, weight)`.
    pub fn transition_list(&self) -> impl Iterator<Item = (usize, &Transition)> {
        self.transitions
            .iter()
            .enumerate()
            .flat_map(|(q, ts)| ts.iter().map(move |t| (q, t)))
    }

    /// Weight of `w`: forward algorithm over exact rationals.
    pub fn weight_exact(&self, w: &Word) -> Result<Rational> {
        Ok(self.weight(w)?.into_exact().expect("automata are exact"))
    }

    pub fn validate_pfa(&self) -> PfaValidationReport {
        validate_pfa(self)
    }
}

/// Sparse forward vector, sorted by state.
pub type ForwardVector = Vec<(usize, Rational)>;

impl WeightedLanguage for WeightedAutomaton {
    type Prefix = ForwardVector;

    fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    fn declared_consistent(&self) -> bool {
        self.declared_consistent
    }

    fn start(&self, _bits: u32) -> Result<ForwardVector> {
        Ok(self
            .initial
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(q, w)| (q, w.clone()))
            .collect())
    }

    fn extend(&self, prefix: &ForwardVector, symbol: usize, _bits: u32) -> Result<ForwardVector> {
        if symbol >= self.alphabet.len() {
            return Err(Error::UnknownSymbol(format!("#{symbol}")));
        }
        let mut next: BTreeMap<usize, Rational> = BTreeMap::new();
        for (q, alpha) in prefix {
            for t in self.transitions[*q].iter().filter(|t| t.symbol == symbol) {
                *next.entry(t.target).or_insert_with(Rational::zero) += alpha * &t.weight;
            }
        }
        Ok(next.into_iter().filter(|(_, w)| !w.is_zero()).collect())
    }

    fn finish(&self, prefix: &ForwardVector) -> Result<Weight> {
        let total = prefix.iter().fold(Rational::zero(), |acc, (q, alpha)| {
            acc + alpha * &self.final_weights[*q]
        });
        Ok(Weight::Exact(total))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// `Σ_q I(q) ≠ 1`.
    GlobalInitial,
    /// `P(q) + Σ T(q, ·, ·) ≠ 1`.
    StateMass,
    InitialOutOfRange,
    FinalOutOfRange,
    TransitionOutOfRange,
    /// More than one transition for some `(q, σ)`; observed is the count.
    Nondeterministic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub state: Option<usize>,
    pub kind: ViolationKind,
    pub observed: Rational,
    pub expected: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PfaValidationReport {
    pub is_pfa: bool,
    pub is_dpfa: bool,
    pub violations: Vec<Violation>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let where_ = self
            .state
            .map(|q| format!(" at state {q}"))
            .unwrap_or_default();
        write!(
            f,
            "{:?}{where_}: observed {}, expected {}",
            self.kind,
            crate::rational::format_rational(&self.observed),
            crate::rational::format_rational(&self.expected)
        )
    }
}

/// Checks the PFA constraints exactly, plus per-`(state, symbol)` determinism.
pub fn validate_pfa(a: &WeightedAutomaton) -> PfaValidationReport {
    let one = Rational::one();
    let in_unit = |x: &Rational| !x.is_negative() && *x <= one;
    let mut violations = Vec::new();

    let total_initial: Rational = a.initial.iter().sum();
    if total_initial != one {
        violations.push(Violation {
            state: None,
            kind: ViolationKind::GlobalInitial,
            observed: total_initial,
            expected: one.clone(),
        });
    }
    for q in 0..a.num_states() {
        if !in_unit(&a.initial[q]) {
            violations.push(Violation {
                state: Some(q),
                kind: ViolationKind::InitialOutOfRange,
                observed: a.initial[q].clone(),
                expected: one.clone(),
            });
        }
        if !in_unit(&a.final_weights[q]) {
            violations.push(Violation {
                state: Some(q),
                kind: ViolationKind::FinalOutOfRange,
                observed: a.final_weights[q].clone(),
                expected: one.clone(),
            });
        }
        for t in &a.transitions[q] {
            if !in_unit(&t.weight) {
                violations.push(Violation {
                    state: Some(q),
                    kind: ViolationKind::TransitionOutOfRange,
                    observed: t.weight.clone(),
                    expected: one.clone(),
                });
            }
        }
        let mass =
            &a.final_weights[q] + a.transitions[q].iter().map(|t| &t.weight).sum::<Rational>();
        if mass != one {
            violations.push(Violation {
                state: Some(q),
                kind: ViolationKind::StateMass,
                observed: mass,
                expected: one.clone(),
            });
        }
    }
    let is_pfa = violations.is_empty();
    for q in 0..a.num_states() {
        for s in 0..a.alphabet.len() {
            let degree = a.transitions[q].iter().filter(|t| t.symbol == s).count();
            if degree > 1 {
                violations.push(Violation {
                    state: Some(q),
                    kind: ViolationKind::Nondeterministic,
                    observed: Rational::from_integer(degree.into()),
                    expected: one.clone(),
                });
            }
        }
    }
    let is_dpfa = is_pfa && violations.is_empty();
    PfaValidationReport {
        is_pfa,
        is_dpfa,
        violations,
    }
}

/// Single-state DPFA over `{a}` with `I(q₀) = 1`, `T(q₀, a, q₀) = P(q₀) = ½`,
/// realizing `f(aⁿ) = 1/2ⁿ⁺¹`.
pub fn build_trivial_unary_dpfa() -> WeightedAutomaton {
    WeightedAutomaton::new(
        Alphabet::unary(),
        1,
        [(0, Rational::one())],
        [(0, rat(1, 2))],
        [(0, 0, 0, rat(1, 2))],
    )
    .expect("trivial DPFA is well formed")
    .declare_consistent(true)
}
