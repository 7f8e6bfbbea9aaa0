//! JSON forms of weighted automata and DFAs.

use super::{Dfa, WeightedAutomaton};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::rational::{serde_str, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WfaTransitionJson {
    pub from: usize,
    pub sym: String,
    pub to: usize,
    #[serde(with = "serde_str")]
    pub w: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WfaJson {
    pub alphabet: Alphabet,
    pub states: usize,
    pub initial: BTreeMap<String, String>,
    #[serde(rename = "final")]
    pub final_weights: BTreeMap<String, String>,
    pub transitions: Vec<WfaTransitionJson>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub consistent: bool,
}

fn state_map(weights: &[Rational]) -> BTreeMap<String, String> {
    weights
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(q, w)| (q.to_string(), crate::rational::format_rational(w)))
        .collect()
}

fn parse_state_map(map: &BTreeMap<String, String>) -> Result<Vec<(usize, Rational)>> {
    map.iter()
        .map(|(q, w)| {
            let q = q
                .parse::<usize>()
                .map_err(|_| Error::InvalidAutomaton(format!("state key `{q}` is not an index")))?;
            Ok((q, crate::rational::parse_rational(w)?))
        })
        .collect()
}

impl From<&WeightedAutomaton> for WfaJson {
    fn from(a: &WeightedAutomaton) -> Self {
        let alphabet = a.alphabet.clone();
        let transitions = a
            .transition_list()
            .map(|(from, t)| WfaTransitionJson {
                from,
                sym: alphabet.name(t.symbol).to_string(),
                to: t.target,
                w: t.weight.clone(),
            })
            .collect();
        WfaJson {
            states: a.num_states(),
            initial: state_map(a.initial()),
            final_weights: state_map(a.final_weights()),
            transitions,
            consistent: a.declared_consistent,
            alphabet,
        }
    }
}

impl TryFrom<WfaJson> for WeightedAutomaton {
    type Error = Error;

    fn try_from(j: WfaJson) -> Result<Self> {
        let transitions = j
            .transitions
            .iter()
            .map(|t| Ok((t.from, j.alphabet.id(&t.sym)?, t.to, t.w.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightedAutomaton::new(
            j.alphabet.clone(),
            j.states,
            parse_state_map(&j.initial)?,
            parse_state_map(&j.final_weights)?,
            transitions,
        )?
        .declare_consistent(j.consistent))
    }
}

impl WeightedAutomaton {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&WfaJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<WfaJson>(text)?.try_into()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfaTransitionJson {
    pub from: usize,
    pub sym: String,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfaJson {
    pub alphabet: Alphabet,
    pub states: usize,
    pub start: usize,
    pub accepting: Vec<usize>,
    pub transitions: Vec<DfaTransitionJson>,
}

impl From<&Dfa> for DfaJson {
    fn from(d: &Dfa) -> Self {
        let a = d.alphabet();
        let mut transitions = Vec::new();
        for q in 0..d.num_states() {
            for s in 0..a.len() {
                if let Some(to) = d.next(q, s) {
                    transitions.push(DfaTransitionJson {
                        from: q,
                        sym: a.name(s).to_string(),
                        to,
                    });
                }
            }
        }
        DfaJson {
            alphabet: a.clone(),
            states: d.num_states(),
            start: d.start(),
            accepting: (0..d.num_states()).filter(|&q| d.is_accepting(q)).collect(),
            transitions,
        }
    }
}

impl TryFrom<DfaJson> for Dfa {
    type Error = Error;

    fn try_from(j: DfaJson) -> Result<Self> {
        let transitions = j
            .transitions
            .iter()
            .map(|t| Ok((t.from, j.alphabet.id(&t.sym)?, t.to)))
            .collect::<Result<Vec<_>>>()?;
        Dfa::new(j.alphabet, j.states, j.start, j.accepting, transitions)
    }
}

impl Dfa {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DfaJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<DfaJson>(text)?.try_into()
    }
}
