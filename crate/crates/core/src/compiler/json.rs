//! JSON machine descriptions (`{"type": "tm" | "2stack", ...}`) and the
//! compiled-network format (an RNN document plus readout metadata).

use super::compile::CompiledRnn;
use super::machine::{Rule, StackAction, TopPattern, TwoStackMachine};
use super::turing::{Direction, TmRule, TuringMachine};
use crate::error::{Error, Result};
use crate::rnn::{RnnJson, RnnLm};
use serde::{Deserialize, Serialize};

/// Either kind of machine accepted by the compiler.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Tm(TuringMachine),
    TwoStack(TwoStackMachine),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum MachineJson {
    #[serde(rename = "tm")]
    Tm(TmJson),
    #[serde(rename = "2stack")]
    TwoStack(TwoStackJson),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmJson {
    pub states: Vec<String>,
    pub tape_alphabet: Vec<String>,
    pub blank: String,
    pub delta: Vec<TmRuleJson>,
    pub start: String,
    pub halt: OneOrMany,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmRuleJson {
    pub state: String,
    pub read: String,
    pub next: String,
    pub write: String,
    #[serde(rename = "move")]
    pub dir: Direction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoStackJson {
    pub states: Vec<String>,
    pub delta: Vec<TwoStackRuleJson>,
    pub start: String,
    pub halt: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoStackRuleJson {
    pub state: String,
    pub top1: TopPattern,
    pub top2: TopPattern,
    pub next: String,
    pub act1: StackAction,
    pub act2: StackAction,
}

fn lookup(names: &[String], x: &str) -> Result<usize> {
    names
        .iter()
        .position(|n| n == x)
        .ok_or_else(|| Error::InvalidMachine(format!("unknown name `{x}`")))
}

impl From<&TuringMachine> for TmJson {
    fn from(m: &TuringMachine) -> Self {
        let st = m.state_names();
        let sy = m.symbols();
        TmJson {
            states: st.to_vec(),
            tape_alphabet: sy.to_vec(),
            blank: sy[m.blank()].clone(),
            delta: m
                .rules()
                .iter()
                .map(|r| TmRuleJson {
                    state: st[r.state].clone(),
                    read: sy[r.read].clone(),
                    next: st[r.next].clone(),
                    write: sy[r.write].clone(),
                    dir: r.dir,
                })
                .collect(),
            start: st[m.start()].clone(),
            halt: OneOrMany::Many(m.halting().iter().map(|&h| st[h].clone()).collect()),
        }
    }
}

impl TryFrom<TmJson> for TuringMachine {
    type Error = Error;

    fn try_from(j: TmJson) -> Result<Self> {
        let rules = j
            .delta
            .iter()
            .map(|r| {
                Ok(TmRule {
                    state: lookup(&j.states, &r.state)?,
                    read: lookup(&j.tape_alphabet, &r.read)?,
                    next: lookup(&j.states, &r.next)?,
                    write: lookup(&j.tape_alphabet, &r.write)?,
                    dir: r.dir,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let halting = match &j.halt {
            OneOrMany::One(h) => vec![lookup(&j.states, h)?],
            OneOrMany::Many(hs) => hs
                .iter()
                .map(|h| lookup(&j.states, h))
                .collect::<Result<_>>()?,
        };
        let blank = lookup(&j.tape_alphabet, &j.blank)?;
        let start = lookup(&j.states, &j.start)?;
        TuringMachine::new(j.states, j.tape_alphabet, blank, start, halting, rules)
    }
}

impl From<&TwoStackMachine> for TwoStackJson {
    fn from(m: &TwoStackMachine) -> Self {
        let st = m.state_names();
        TwoStackJson {
            states: st.to_vec(),
            delta: m
                .rules()
                .iter()
                .map(|r| TwoStackRuleJson {
                    state: st[r.state].clone(),
                    top1: r.top1,
                    top2: r.top2,
                    next: st[r.next].clone(),
                    act1: r.act1,
                    act2: r.act2,
                })
                .collect(),
            start: st[m.start()].clone(),
            halt: st[m.halt()].clone(),
        }
    }
}

impl TryFrom<TwoStackJson> for TwoStackMachine {
    type Error = Error;

    fn try_from(j: TwoStackJson) -> Result<Self> {
        let rules = j
            .delta
            .iter()
            .map(|r| {
                Ok(Rule {
                    state: lookup(&j.states, &r.state)?,
                    top1: r.top1,
                    top2: r.top2,
                    next: lookup(&j.states, &r.next)?,
                    act1: r.act1,
                    act2: r.act2,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let start = lookup(&j.states, &j.start)?;
        let halt = lookup(&j.states, &j.halt)?;
        TwoStackMachine::new(j.states, start, halt, rules)
    }
}

impl Machine {
    pub fn from_json(text: &str) -> Result<Self> {
        match serde_json::from_str::<MachineJson>(text)? {
            MachineJson::Tm(j) => Ok(Machine::Tm(j.try_into()?)),
            MachineJson::TwoStack(j) => Ok(Machine::TwoStack(j.try_into()?)),
        }
    }

    pub fn to_json(&self) -> String {
        let j = match self {
            Machine::Tm(m) => MachineJson::Tm(m.into()),
            Machine::TwoStack(m) => MachineJson::TwoStack(m.into()),
        };
        serde_json::to_string_pretty(&j).expect("serializable")
    }
}

impl TuringMachine {
    pub fn to_json(&self) -> String {
        Machine::Tm(self.clone()).to_json()
    }
}

impl TwoStackMachine {
    pub fn to_json(&self) -> String {
        Machine::TwoStack(self.clone()).to_json()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompiledJson {
    #[serde(flatten)]
    pub rnn: RnnJson,
    pub halting_neuron: usize,
    pub stack_neurons: [usize; 2],
    pub state_neurons: Vec<usize>,
    pub state_names: Vec<String>,
    pub halt_state: usize,
    pub step_dilation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_neuron: Option<usize>,
}

impl CompiledRnn {
    pub fn to_json(&self) -> String {
        let j = CompiledJson {
            rnn: RnnJson::from(&self.rnn),
            halting_neuron: self.halting_neuron,
            stack_neurons: [self.stack_neurons.0, self.stack_neurons.1],
            state_neurons: self.state_neurons.clone(),
            state_names: self.state_names.clone(),
            halt_state: self.halt_state,
            step_dilation: self.step_dilation,
            aux_neuron: self.aux_neuron,
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: CompiledJson = serde_json::from_str(text)?;
        let rnn = RnnLm::try_from(j.rnn)?;
        let n = rnn.hidden_dim();
        let mut all = vec![j.halting_neuron, j.stack_neurons[0], j.stack_neurons[1]];
        all.extend(&j.state_neurons);
        all.extend(j.aux_neuron);
        if all.iter().any(|&i| i >= n) {
            return Err(Error::Dimension(format!(
                "readout index beyond hidden size {n}"
            )));
        }
        if j.state_names.len() != j.state_neurons.len()
            || j.halt_state >= j.state_neurons.len()
            || j.step_dilation == 0
        {
            return Err(Error::InvalidMachine(
                "inconsistent compiled-network metadata".into(),
            ));
        }
        Ok(CompiledRnn {
            rnn,
            halting_neuron: j.halting_neuron,
            stack_neurons: (j.stack_neurons[0], j.stack_neurons[1]),
            state_neurons: j.state_neurons,
            state_names: j.state_names,
            halt_state: j.halt_state,
            step_dilation: j.step_dilation,
            aux_neuron: j.aux_neuron,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::machine::library as two;
    use crate::compiler::turing::library as tms;
    use crate::compiler::{attach_output_gadget, compile_two_stack, simulate};

    #[test]
    fn machines_round_trip() {
        for m in [
            two::looper(),
            two::push_pop(),
            two::transfer(),
            two::halts_after(3),
        ] {
            let text = m.to_json();
            assert_eq!(Machine::from_json(&text).unwrap(), Machine::TwoStack(m));
        }
        for m in [
            tms::unary_increment(),
            tms::binary_increment(),
            tms::halts_immediately(),
        ] {
            let text = m.to_json();
            assert_eq!(Machine::from_json(&text).unwrap(), Machine::Tm(m));
        }
    }

    #[test]
    fn parses_handwritten_description() {
        let text = r#"{"type":"2stack","states":["a","h"],"start":"a","halt":"h",
            "delta":[{"state":"a","top1":"1","top2":"*","next":"a","act1":"pop","act2":"push1"},
                     {"state":"a","top1":"e","top2":"*","next":"h","act1":"noop","act2":"noop"}]}"#;
        let Machine::TwoStack(m) = Machine::from_json(text).unwrap() else {
            panic!()
        };
        assert_eq!(
            m.run(&[true, true], 10).final_config.stack2,
            vec![true, true]
        );

        let tm = r#"{"type":"tm","states":["s","h"],"tape_alphabet":["_","1"],"blank":"_","start":"s","halt":"h",
            "delta":[{"state":"s","read":"1","next":"s","write":"1","move":"R"}]}"#;
        assert!(matches!(Machine::from_json(tm).unwrap(), Machine::Tm(_)));
        assert!(Machine::from_json(r#"{"type":"pda"}"#).is_err());
    }

    #[test]
    fn compiled_round_trip() {
        let c =
            attach_output_gadget(&compile_two_stack(&two::push_pop(), &[true]).unwrap()).unwrap();
        let text = c.to_json();
        let back = CompiledRnn::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
        assert_eq!(simulate(&back, 5).unwrap(), simulate(&c, 5).unwrap());
    }
}
