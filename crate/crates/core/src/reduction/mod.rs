//! The 3-SAT construction: a PFA whose weight on length-`n` words rewards
//! satisfied clauses, a memoryless RNN with the same weights below length
//! `n`, their closed forms, and the separating threshold.

mod cnf;

pub use cnf::{parse_dimacs, Clause, CnfFormula, Literal};

use crate::alphabet::{Alphabet, Word};
use crate::automata::WeightedAutomaton;
use crate::error::{Error, Result};
use crate::rational::{int, pow, rat, Rational};
use crate::rnn::{Activation, Logit, RnnLm, RnnParams};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, VecDeque};

/// `ε ∈ (0, ¼)` and the optional slack `s ∈ [k−1, k)` of the threshold
/// (default `k − ½`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    epsilon: Rational,
    slack: Option<Rational>,
}

impl ReductionParams {
    pub fn new(epsilon: Rational) -> Result<Self> {
        if !epsilon.is_positive() || epsilon >= rat(1, 4) {
            return Err(Error::EpsilonOutOfRange(epsilon));
        }
        Ok(ReductionParams {
            epsilon,
            slack: None,
        })
    }

    pub fn with_slack(mut self, s: Rational) -> Self {
        self.slack = Some(s);
        self
    }

    pub fn epsilon(&self) -> &Rational {
        &self.epsilon
    }

    /// `s` for a formula with `k` clauses.
    pub fn slack(&self, k: usize) -> Result<Rational> {
        let s = match &self.slack {
            Some(s) => s.clone(),
            None => int(k as i64) - rat(1, 2),
        };
        if s < int(k as i64 - 1) || s >= int(k as i64) {
            return Err(Error::SlackOutOfRange { s, k });
        }
        Ok(s)
    }

    /// `ε_L = 1/(2^{L+2} + 2)`, the values for which the toy RNN has
    /// integer logits (`log₂((1−2ε)/(4ε)) = L`).
    pub fn exact_family(level: u32) -> Self {
        let denom = (num_bigint::BigInt::one() << (level as usize + 2)) + 2;
        ReductionParams::new(Rational::new(num_bigint::BigInt::one(), denom)).unwrap()
    }

    fn half_minus_eps(&self) -> Rational {
        rat(1, 2) - &self.epsilon
    }
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams::new(rat(1, 10)).unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum PathState {
    Start,
    /// Clause `i` at level `j` (prefix length), `true` iff the prefix
    /// already satisfies the clause.
    Clause {
        clause: usize,
        level: usize,
        satisfied: bool,
    },
}

/// Builds the clause-path PFA for `f`. Each clause owns a "satisfied" and
/// an "unsatisfied" track of length `n`; reading a prefix of length `j`
/// leads to the level-`j` state of the track matching whether the prefix
/// satisfies the clause. Only states reachable from `q₀` are kept; `q₀` is
/// state 0 and the rest are numbered in breadth-first order.
pub fn build_reduction_pfa(f: &CnfFormula, p: &ReductionParams) -> WeightedAutomaton {
    let n = f.num_vars();
    let k = f.num_clauses();
    let eps = p.epsilon.clone();
    let stay = p.half_minus_eps();
    let entry = &stay / int(k as i64);
    let two_eps = &eps * int(2);

    let hits = |clause: usize, var: usize, bit: usize| {
        f.literal_on(clause, var)
            .is_some_and(|l| l.satisfied_by(bit == 1))
    };
    let successors = |s: PathState| -> Vec<(usize, PathState, Rational)> {
        let mut out = Vec::new();
        for bit in 0..2 {
            match s {
                PathState::Start => {
                    for clause in 0..k {
                        let satisfied = hits(clause, 1, bit);
                        out.push((
                            bit,
                            PathState::Clause {
                                clause,
                                level: 1,
                                satisfied,
                            },
                            entry.clone(),
                        ));
                    }
                }
                PathState::Clause {
                    clause,
                    level,
                    satisfied,
                } if level < n => {
                    let satisfied = satisfied || hits(clause, level + 1, bit);
                    out.push((
                        bit,
                        PathState::Clause {
                            clause,
                            level: level + 1,
                            satisfied,
                        },
                        stay.clone(),
                    ));
                }
                PathState::Clause {
                    clause,
                    level,
                    satisfied: true,
                } => {
                    out.push((
                        bit,
                        PathState::Clause {
                            clause,
                            level,
                            satisfied: false,
                        },
                        eps.clone(),
                    ));
                }
                PathState::Clause {
                    clause,
                    level,
                    satisfied: false,
                } => {
                    out.push((
                        bit,
                        PathState::Clause {
                            clause,
                            level,
                            satisfied: false,
                        },
                        stay.clone(),
                    ));
                }
            }
        }
        out
    };

    let mut index: BTreeMap<PathState, usize> = BTreeMap::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([PathState::Start]);
    index.insert(PathState::Start, 0);
    let mut transitions = Vec::new();
    while let Some(s) = queue.pop_front() {
        order.push(s);
        for (bit, t, w) in successors(s) {
            let next_id = index.len();
            let id = *index.entry(t).or_insert_with(|| {
                queue.push_back(t);
                next_id
            });
            transitions.push((index[&s], bit, id, w));
        }
    }
    let finals = order.iter().map(|s| {
        let w = match s {
            PathState::Clause {
                level,
                satisfied: true,
                ..
            } if *level == n => Rational::one() - &two_eps,
            _ => two_eps.clone(),
        };
        (index[s], w)
    });
    let finals: Vec<_> = finals.collect();
    WeightedAutomaton::new(
        Alphabet::binary(),
        order.len(),
        [(0, Rational::one())],
        finals,
        transitions,
    )
    .expect("reduction PFA is well formed")
    .declare_consistent(true)
}

/// `log₂((1−2ε)/(4ε))` as a logit; an integer for `ε` in the exact family.
pub fn toy_rnn_logit(p: &ReductionParams) -> Logit {
    let ratio = (Rational::one() - &p.epsilon * int(2)) / (&p.epsilon * int(4));
    Logit::log2_of(ratio).expect("ratio is positive for ε < ½")
}

/// Two-unit memoryless RNN over `{0, 1}` with `R(w) = 2(½−ε)^{|w|} ε`:
/// zero state and embeddings, identity recurrence, `O = [[1,0],[1,0],[0,1]]`
/// and `O' = (L, L, 0)` with `L = log₂((1−2ε)/(4ε))`.
pub fn build_toy_rnn(p: &ReductionParams) -> RnnLm {
    let z = Rational::zero;
    let l = toy_rnn_logit(p);
    RnnLm::new(RnnParams {
        alphabet: Alphabet::binary(),
        h0: vec![z(), z()],
        transition: vec![vec![int(1), z()], vec![z(), int(1)]],
        embeddings: vec![vec![z(), z()]; 3],
        output: vec![vec![int(1), z()], vec![int(1), z()], vec![z(), int(1)]],
        output_bias: vec![l.clone(), l, Logit::from(z())],
        activation: Activation::Relu,
    })
    .expect("toy RNN dimensions are consistent")
    .declare_consistent(true)
}

/// `2(½−ε)^m ε`.
pub fn toy_weight(p: &ReductionParams, len: usize) -> Rational {
    int(2) * pow(&p.half_minus_eps(), len) * &p.epsilon
}

/// The three-case closed form of the reduction PFA's language.
pub fn closed_form_pfa_weight(f: &CnfFormula, p: &ReductionParams, w: &Word) -> Result<Rational> {
    let n = f.num_vars();
    let k = int(f.num_clauses() as i64);
    let base = toy_weight(p, w.len());
    if w.len() < n {
        return Ok(base);
    }
    let sat = int(f.count_satisfied(&w.prefix(n))? as i64);
    let two_eps = &p.epsilon * int(2);
    let one_minus = Rational::one() - &two_eps;
    let ratio = if w.len() == n {
        &one_minus / &two_eps
    } else {
        &two_eps / &one_minus
    };
    Ok(base * (&sat / &k * ratio + (&k - &sat) / &k))
}

/// `c_ε = (s/k)(½−ε)ⁿ(1−4ε)`.
pub fn reduction_threshold(f: &CnfFormula, p: &ReductionParams) -> Result<Rational> {
    let k = f.num_clauses();
    let s = p.slack(k)?;
    Ok(s / int(k as i64)
        * pow(&p.half_minus_eps(), f.num_vars())
        * (Rational::one() - &p.epsilon * int(4)))
}
