//! Deterministic two-stack machines over binary stacks and their direct
//! simulator.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// What a stack shows on top.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Top {
    #[serde(rename = "e", alias = "empty")]
    Empty,
    #[serde(rename = "0")]
    Zero,
    #[serde(rename = "1")]
    One,
}

impl Top {
    pub const ALL: [Top; 3] = [Top::Empty, Top::Zero, Top::One];

    pub fn of(stack: &[bool]) -> Top {
        match stack.first() {
            None => Top::Empty,
            Some(false) => Top::Zero,
            Some(true) => Top::One,
        }
    }
}

/// A rule's guard on one stack: a specific top or anything.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TopPattern {
    #[serde(rename = "*")]
    Any,
    #[serde(untagged)]
    Is(Top),
}

impl TopPattern {
    fn expand(self) -> Vec<Top> {
        match self {
            TopPattern::Any => Top::ALL.to_vec(),
            TopPattern::Is(t) => vec![t],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StackAction {
    Push0,
    Push1,
    Pop,
    Noop,
}

impl StackAction {
    pub const ALL: [StackAction; 4] = [
        StackAction::Push0,
        StackAction::Push1,
        StackAction::Pop,
        StackAction::Noop,
    ];

    pub fn push(bit: bool) -> Self {
        if bit {
            StackAction::Push1
        } else {
            StackAction::Push0
        }
    }

    /// Applies the action to a top-first stack. Popping an empty stack is a no-op.
    pub fn apply(self, stack: &mut Vec<bool>) {
        match self {
            StackAction::Push0 => stack.insert(0, false),
            StackAction::Push1 => stack.insert(0, true),
            StackAction::Pop => {
                if !stack.is_empty() {
                    stack.remove(0);
                }
            }
            StackAction::Noop => {}
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub next: usize,
    pub act1: StackAction,
    pub act2: StackAction,
}

/// One transition rule as written in a machine description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub state: usize,
    pub top1: TopPattern,
    pub top2: TopPattern,
    pub next: usize,
    pub act1: StackAction,
    pub act2: StackAction,
}

/// A control state plus both stacks, each listed top first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: usize,
    pub stack1: Vec<bool>,
    pub stack2: Vec<bool>,
}

/// Deterministic two-stack machine. A non-halting state with no rule for
/// the current tops moves to the halt state without touching the stacks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoStackMachine {
    states: Vec<String>,
    start: usize,
    halt: usize,
    rules: Vec<Rule>,
    delta: BTreeMap<(usize, Top, Top), Move>,
}

impl TwoStackMachine {
    pub fn new(states: Vec<String>, start: usize, halt: usize, rules: Vec<Rule>) -> Result<Self> {
        let n = states.len();
        let bad = |m: String| Err(Error::InvalidMachine(m));
        if n == 0 {
            return bad("no states".into());
        }
        if start >= n || halt >= n {
            return bad("start or halt state out of range".into());
        }
        let mut seen = std::collections::HashSet::new();
        for s in &states {
            if !seen.insert(s) {
                return bad(format!("duplicate state `{s}`"));
            }
        }
        let mut delta = BTreeMap::new();
        for r in &rules {
            if r.state >= n || r.next >= n {
                return bad("rule refers to a state out of range".into());
            }
            if r.state == halt {
                return bad(format!(
                    "halt state `{}` has an outgoing rule",
                    states[halt]
                ));
            }
            for t1 in r.top1.expand() {
                for t2 in r.top2.expand() {
                    let m = Move {
                        next: r.next,
                        act1: r.act1,
                        act2: r.act2,
                    };
                    if let Some(prev) = delta.insert((r.state, t1, t2), m) {
                        if prev != m {
                            return bad(format!(
                                "nondeterministic rules for ({}, {t1:?}, {t2:?})",
                                states[r.state]
                            ));
                        }
                    }
                }
            }
        }
        Ok(TwoStackMachine {
            states,
            start,
            halt,
            rules,
            delta,
        })
    }

    /// Convenience constructor using state names.
    pub fn from_named(
        states: &[&str],
        start: &str,
        halt: &str,
        rules: &[(&str, TopPattern, TopPattern, &str, StackAction, StackAction)],
    ) -> Result<Self> {
        let names: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let id = |s: &str| {
            names
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::InvalidMachine(format!("unknown state `{s}`")))
        };
        let rules = rules
            .iter()
            .map(|&(q, t1, t2, p, a1, a2)| {
                Ok(Rule {
                    state: id(q)?,
                    top1: t1,
                    top2: t2,
                    next: id(p)?,
                    act1: a1,
                    act2: a2,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(names.clone(), id(start)?, id(halt)?, rules)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_id(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn halt(&self) -> usize {
        self.halt
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// The move taken in `state` on the given tops, or `None` in the halt state.
    pub fn transition(&self, state: usize, top1: Top, top2: Top) -> Option<Move> {
        if state == self.halt {
            return None;
        }
        Some(
            self.delta
                .get(&(state, top1, top2))
                .copied()
                .unwrap_or(Move {
                    next: self.halt,
                    act1: StackAction::Noop,
                    act2: StackAction::Noop,
                }),
        )
    }

    pub fn initial(&self, stack1: &[bool]) -> Configuration {
        Configuration {
            state: self.start,
            stack1: stack1.to_vec(),
            stack2: Vec::new(),
        }
    }

    pub fn is_halted(&self, c: &Configuration) -> bool {
        c.state == self.halt
    }

    /// Successor configuration; a halted configuration is its own successor.
    pub fn step(&self, c: &Configuration) -> Configuration {
        match self.transition(c.state, Top::of(&c.stack1), Top::of(&c.stack2)) {
            None => c.clone(),
            Some(m) => {
                let mut next = Configuration {
                    state: m.next,
                    stack1: c.stack1.clone(),
                    stack2: c.stack2.clone(),
                };
                m.act1.apply(&mut next.stack1);
                m.act2.apply(&mut next.stack2);
                next
            }
        }
    }

    /// Configurations at steps `0..=steps`.
    pub fn trace(&self, stack1: &[bool], steps: usize) -> Vec<Configuration> {
        let mut out = Vec::with_capacity(steps + 1);
        let mut c = self.initial(stack1);
        out.push(c.clone());
        for _ in 0..steps {
            c = self.step(&c);
            out.push(c.clone());
        }
        out
    }

    /// Runs until halting, giving up after `max_steps`.
    pub fn run(&self, stack1: &[bool], max_steps: usize) -> RunOutcome {
        let mut c = self.initial(stack1);
        for t in 0..=max_steps {
            if self.is_halted(&c) {
                return RunOutcome {
                    final_config: c,
                    steps: t,
                    halted: true,
                };
            }
            if t < max_steps {
                c = self.step(&c);
            }
        }
        RunOutcome {
            final_config: c,
            steps: max_steps,
            halted: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub final_config: Configuration,
    pub steps: usize,
    pub halted: bool,
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[bool]| {
            v.iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect::<String>()
        };
        write!(
            f,
            "q{} [{}] [{}]",
            self.state,
            s(&self.stack1),
            s(&self.stack2)
        )
    }
}

/// Example machines used across tests and examples.
pub mod library {
    use super::*;
    use StackAction::*;
    use TopPattern::Any;

    /// Counts down `steps` states and halts after exactly `steps` moves.
    pub fn halts_after(steps: usize) -> TwoStackMachine {
        let names: Vec<String> = (0..=steps).map(|i| format!("c{i}")).collect();
        let rules = (0..steps)
            .map(|i| Rule {
                state: i,
                top1: Any,
                top2: Any,
                next: i + 1,
                act1: Noop,
                act2: Noop,
            })
            .collect();
        TwoStackMachine::new(names, 0, steps, rules).expect("well-formed")
    }

    /// One state looping forever without touching the stacks.
    pub fn looper() -> TwoStackMachine {
        TwoStackMachine::from_named(
            &["loop", "halt"],
            "loop",
            "halt",
            &[("loop", Any, Any, "loop", Noop, Noop)],
        )
        .expect("well-formed")
    }

    /// Pushes a 1 on stack 1, pops it again, then halts.
    pub fn push_pop() -> TwoStackMachine {
        TwoStackMachine::from_named(
            &["push", "pop", "done", "halt"],
            "push",
            "halt",
            &[
                ("push", Any, Any, "pop", Push1, Noop),
                ("pop", Any, Any, "done", Pop, Noop),
                ("done", Any, Any, "halt", Noop, Noop),
            ],
        )
        .expect("well-formed")
    }

    /// Pops stack 1 until it is empty; halts after `|input| + 1` moves.
    pub fn drain() -> TwoStackMachine {
        TwoStackMachine::from_named(
            &["drain", "halt"],
            "drain",
            "halt",
            &[
                ("drain", TopPattern::Is(Top::Zero), Any, "drain", Pop, Noop),
                ("drain", TopPattern::Is(Top::One), Any, "drain", Pop, Noop),
            ],
        )
        .expect("well-formed")
    }

    /// Moves stack 1 onto stack 2 (reversing it), then halts.
    pub fn transfer() -> TwoStackMachine {
        use Top::*;
        TwoStackMachine::from_named(
            &["move", "halt"],
            "move",
            "halt",
            &[
                ("move", TopPattern::Is(Zero), Any, "move", Pop, Push0),
                ("move", TopPattern::Is(One), Any, "move", Pop, Push1),
                ("move", TopPattern::Is(Empty), Any, "halt", Noop, Noop),
            ],
        )
        .expect("well-formed")
    }
}
