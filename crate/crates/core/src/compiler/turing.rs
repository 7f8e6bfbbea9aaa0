//! Single-tape Turing machines and their conversion to two-stack machines.
//!
//! Tape symbols are binarized into blocks of `w` bits (blank = all zeros).
//! Stack 1 holds the tape left of the head, nearest cell on top; stack 2
//! holds the head cell and everything to its right, head cell on top. At
//! every cell-aligned configuration `reverse(stack₁) ++ stack₂` is the tape.

use super::machine::{Configuration, Rule, StackAction, Top, TopPattern, TwoStackMachine};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, VecDeque};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    L,
    R,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TmRule {
    pub state: usize,
    pub read: usize,
    pub next: usize,
    pub write: usize,
    pub dir: Direction,
}

/// Deterministic single-tape machine. It halts in a halting state or when
/// no rule applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    states: Vec<String>,
    symbols: Vec<String>,
    blank: usize,
    start: usize,
    halting: Vec<usize>,
    rules: Vec<TmRule>,
    delta: BTreeMap<(usize, usize), TmRule>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmOutcome {
    /// Tape contents with blank margins trimmed.
    pub tape: Vec<usize>,
    pub state: usize,
    pub steps: usize,
    pub halted: bool,
}

impl TuringMachine {
    pub fn new(
        states: Vec<String>,
        symbols: Vec<String>,
        blank: usize,
        start: usize,
        halting: Vec<usize>,
        rules: Vec<TmRule>,
    ) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidMachine(m));
        if states.is_empty() || start >= states.len() || halting.iter().any(|&h| h >= states.len())
        {
            return bad("state index out of range".into());
        }
        if blank >= symbols.len() {
            return bad("blank symbol out of range".into());
        }
        let mut delta = BTreeMap::new();
        for r in &rules {
            if r.state >= states.len()
                || r.next >= states.len()
                || r.read >= symbols.len()
                || r.write >= symbols.len()
            {
                return bad("rule out of range".into());
            }
            if halting.contains(&r.state) {
                return bad(format!(
                    "halting state `{}` has an outgoing rule",
                    states[r.state]
                ));
            }
            if delta.insert((r.state, r.read), *r).is_some() {
                return bad(format!(
                    "two rules for ({}, {})",
                    states[r.state], symbols[r.read]
                ));
            }
        }
        Ok(TuringMachine {
            states,
            symbols,
            blank,
            start,
            halting,
            rules,
            delta,
        })
    }

    /// Builds a machine from names; `blank` must be one of `symbols`.
    pub fn from_named(
        states: &[&str],
        symbols: &[&str],
        blank: &str,
        start: &str,
        halting: &[&str],
        rules: &[(&str, &str, &str, &str, Direction)],
    ) -> Result<Self> {
        let find = |list: &[&str], x: &str| {
            list.iter()
                .position(|y| *y == x)
                .ok_or_else(|| Error::InvalidMachine(format!("unknown name `{x}`")))
        };
        let rules = rules
            .iter()
            .map(|&(q, a, p, b, d)| {
                Ok(TmRule {
                    state: find(states, q)?,
                    read: find(symbols, a)?,
                    next: find(states, p)?,
                    write: find(symbols, b)?,
                    dir: d,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(
            states.iter().map(|s| s.to_string()).collect(),
            symbols.iter().map(|s| s.to_string()).collect(),
            find(symbols, blank)?,
            find(states, start)?,
            halting
                .iter()
                .map(|h| find(states, h))
                .collect::<Result<_>>()?,
            rules,
        )
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn halting(&self) -> &[usize] {
        &self.halting
    }

    pub fn rules(&self) -> &[TmRule] {
        &self.rules
    }

    pub fn is_halting(&self, q: usize) -> bool {
        self.halting.contains(&q)
    }

    pub fn rule(&self, q: usize, read: usize) -> Option<&TmRule> {
        self.delta.get(&(q, read))
    }

    /// Reads an input string: one symbol per character when all symbols are
    /// single characters, whitespace separated otherwise.
    pub fn parse_input(&self, text: &str) -> Result<Vec<usize>> {
        let find = |s: &str| {
            self.symbols
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::UnknownSymbol(s.to_string()))
        };
        if self.symbols.iter().all(|s| s.chars().count() == 1) {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| find(&c.to_string()))
                .collect()
        } else {
            text.split_whitespace().map(find).collect()
        }
    }

    pub fn render(&self, tape: &[usize]) -> String {
        let sep = if self.symbols.iter().all(|s| s.chars().count() == 1) {
            ""
        } else {
            " "
        };
        tape.iter()
            .map(|&s| self.symbols[s].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Direct simulation with the head on the first input cell.
    pub fn run(&self, input: &[usize], max_steps: usize) -> TmOutcome {
        let mut tape: VecDeque<usize> = input.iter().copied().collect();
        if tape.is_empty() {
            tape.push_back(self.blank);
        }
        let mut head = 0usize;
        let mut q = self.start;
        let mut steps = 0;
        let halted = loop {
            if self.is_halting(q) {
                break true;
            }
            let Some(r) = self.rule(q, tape[head]) else {
                break true;
            };
            if steps == max_steps {
                break false;
            }
            tape[head] = r.write;
            q = r.next;
            match r.dir {
                Direction::R => {
                    head += 1;
                    if head == tape.len() {
                        tape.push_back(self.blank);
                    }
                }
                Direction::L => {
                    if head == 0 {
                        tape.push_front(self.blank);
                    } else {
                        head -= 1;
                    }
                }
            }
            steps += 1;
        };
        TmOutcome {
            tape: trim(tape.into_iter().collect(), self.blank),
            state: q,
            steps,
            halted,
        }
    }

    /// Bits per tape cell after binarization.
    pub fn block_width(&self) -> usize {
        let mut w = 1;
        while (1usize << w) < self.symbols.len() {
            w += 1;
        }
        w
    }

    /// Block code of each symbol: the blank is 0, the rest follow in order.
    pub fn codes(&self) -> Vec<usize> {
        let mut next = 1;
        (0..self.symbols.len())
            .map(|s| {
                if s == self.blank {
                    0
                } else {
                    next += 1;
                    next - 1
                }
            })
            .collect()
    }
}

fn trim(mut tape: Vec<usize>, blank: usize) -> Vec<usize> {
    while tape.last() == Some(&blank) {
        tape.pop();
    }
    let lead = tape.iter().take_while(|&&s| s == blank).count();
    tape.drain(..lead);
    tape
}

/// Result of [`tm_to_two_stack`]: the machine, the initial content of
/// stack 1 (top first), and what is needed to read the tape back.
#[derive(Clone, Debug)]
pub struct TmConversion {
    pub machine: TwoStackMachine,
    pub initial_stack: Vec<bool>,
    pub block_width: usize,
    codes: Vec<usize>,
    blank: usize,
}

impl TmConversion {
    /// Tape contents (trimmed) of a cell-aligned configuration.
    pub fn decode_tape(&self, c: &Configuration) -> Result<Vec<usize>> {
        let bits: Vec<bool> = c.stack1.iter().rev().chain(&c.stack2).copied().collect();
        if !bits.len().is_multiple_of(self.block_width) {
            return Err(Error::InvalidMachine("stacks are not block aligned".into()));
        }
        let cells = bits
            .chunks(self.block_width)
            .map(|b| {
                let code = b.iter().fold(0, |acc, &x| 2 * acc + x as usize);
                self.codes.iter().position(|&c| c == code).ok_or_else(|| {
                    Error::InvalidMachine(format!("block code {code} names no symbol"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(trim(cells, self.blank))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Phase {
    Halt,
    /// Copies the input from stack 1 to stack 2 before the first move.
    Load,
    Read {
        q: usize,
        prefix: Vec<bool>,
    },
    WriteRight {
        q: usize,
        code: usize,
        i: usize,
    },
    /// Pushes a block onto stack 2; `None` halts afterwards.
    WriteLeft {
        q: Option<usize>,
        code: usize,
        i: usize,
    },
    MoveLeft {
        q: usize,
        i: usize,
    },
}

/// Converts `tm` started on `input` into an equivalent two-stack machine.
pub fn tm_to_two_stack(tm: &TuringMachine, input: &[usize]) -> Result<TmConversion> {
    let w = tm.block_width();
    let codes = tm.codes();
    let bit = |code: usize, i: usize| (code >> (w - 1 - i)) & 1 == 1; // i-th most significant
    let block = |code: usize| (0..w).map(move |i| bit(code, i));

    for &s in input {
        if s >= tm.symbols.len() {
            return Err(Error::UnknownSymbol(format!("#{s}")));
        }
    }
    let layout: Vec<bool> = input.iter().flat_map(|&s| block(codes[s])).collect();
    let initial_stack: Vec<bool> = layout.iter().rev().copied().collect();

    let enter = |q: usize| {
        if tm.is_halting(q) {
            Phase::Halt
        } else {
            Phase::Read { q, prefix: vec![] }
        }
    };
    let start = if tm.is_halting(tm.start) {
        Phase::Halt
    } else {
        Phase::Load
    };

    let mut phases = Phases::default();
    let halt = phases.intern(Phase::Halt);
    let start_id = phases.intern(start);

    use StackAction::*;
    let mut rules = Vec::new();
    let mut cursor = 0;
    while cursor < phases.list.len() {
        let p = phases.list[cursor].clone();
        let from = cursor;
        cursor += 1;
        // (top₁ guard, top₂ guard, next phase, act₁, act₂)
        let mut out: Vec<(TopPattern, TopPattern, Phase, StackAction, StackAction)> = Vec::new();
        let any = TopPattern::Any;
        let is = TopPattern::Is;
        match &p {
            Phase::Halt => {}
            Phase::Load => {
                out.push((is(Top::Zero), any, Phase::Load, Pop, Push0));
                out.push((is(Top::One), any, Phase::Load, Pop, Push1));
                out.push((is(Top::Empty), any, enter(tm.start), Noop, Noop));
            }
            Phase::Read { q, prefix } => {
                let dispatch = |bits: &[bool]| {
                    let code = (0..w).fold(0, |acc, i| {
                        2 * acc + bits.get(i).copied().unwrap_or(false) as usize
                    });
                    let symbol = codes.iter().position(|&c| c == code);
                    match symbol.and_then(|s| tm.rule(*q, s)) {
                        Some(r) => match r.dir {
                            Direction::R => Phase::WriteRight {
                                q: r.next,
                                code: codes[r.write],
                                i: 0,
                            },
                            Direction::L => Phase::WriteLeft {
                                q: Some(r.next),
                                code: codes[r.write],
                                i: 0,
                            },
                        },
                        None => Phase::WriteLeft {
                            q: None,
                            code,
                            i: 0,
                        },
                    }
                };
                out.push((any, is(Top::Empty), dispatch(prefix), Noop, Noop));
                for b in [false, true] {
                    let mut longer = prefix.clone();
                    longer.push(b);
                    let next = if longer.len() == w {
                        dispatch(&longer)
                    } else {
                        Phase::Read {
                            q: *q,
                            prefix: longer,
                        }
                    };
                    out.push((
                        any,
                        is(if b { Top::One } else { Top::Zero }),
                        next,
                        Noop,
                        Pop,
                    ));
                }
            }
            Phase::WriteRight { q, code, i } => {
                let next = if i + 1 < w {
                    Phase::WriteRight {
                        q: *q,
                        code: *code,
                        i: i + 1,
                    }
                } else {
                    enter(*q)
                };
                out.push((any, any, next, StackAction::push(bit(*code, *i)), Noop));
            }
            Phase::WriteLeft { q, code, i } => {
                let next = if i + 1 < w {
                    Phase::WriteLeft {
                        q: *q,
                        code: *code,
                        i: i + 1,
                    }
                } else {
                    match q {
                        Some(q) => Phase::MoveLeft { q: *q, i: 0 },
                        None => Phase::Halt,
                    }
                };
                out.push((
                    any,
                    any,
                    next,
                    Noop,
                    StackAction::push(bit(*code, w - 1 - i)),
                ));
            }
            Phase::MoveLeft { q, i } => {
                let next = if i + 1 < w {
                    Phase::MoveLeft { q: *q, i: i + 1 }
                } else {
                    enter(*q)
                };
                out.push((is(Top::Zero), any, next.clone(), Pop, Push0));
                out.push((is(Top::One), any, next.clone(), Pop, Push1));
                out.push((is(Top::Empty), any, next, Noop, Push0));
            }
        }
        for (t1, t2, next, a1, a2) in out {
            let to = phases.intern(next);
            rules.push(Rule {
                state: from,
                top1: t1,
                top2: t2,
                next: to,
                act1: a1,
                act2: a2,
            });
        }
    }
    let names = phases.list.iter().map(|p| phase_name(p, tm)).collect();
    let machine = TwoStackMachine::new(names, start_id, halt, rules)?;
    Ok(TmConversion {
        machine,
        initial_stack,
        block_width: w,
        codes,
        blank: tm.blank,
    })
}

#[derive(Default)]
struct Phases {
    ids: HashMap<Phase, usize>,
    list: Vec<Phase>,
}

impl Phases {
    fn intern(&mut self, p: Phase) -> usize {
        if let Some(&id) = self.ids.get(&p) {
            return id;
        }
        self.list.push(p.clone());
        self.ids.insert(p, self.list.len() - 1);
        self.list.len() - 1
    }
}

fn phase_name(p: &Phase, tm: &TuringMachine) -> String {
    let bits = |v: &[bool]| {
        v.iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect::<String>()
    };
    match p {
        Phase::Halt => "halt".into(),
        Phase::Load => "load".into(),
        Phase::Read { q, prefix } => format!("read:{}:{}", tm.states[*q], bits(prefix)),
        Phase::WriteRight { q, code, i } => format!("right:{}:{code}:{i}", tm.states[*q]),
        Phase::WriteLeft {
            q: Some(q),
            code,
            i,
        } => format!("left:{}:{code}:{i}", tm.states[*q]),
        Phase::WriteLeft { q: None, code, i } => format!("restore:{code}:{i}"),
        Phase::MoveLeft { q, i } => format!("shift:{}:{i}", tm.states[*q]),
    }
}

/// Small machines used in tests and examples.
pub mod library {
    use super::Direction::*;
    use super::*;

    /// Appends a `1` to a unary numeral.
    pub fn unary_increment() -> TuringMachine {
        TuringMachine::from_named(
            &["scan", "done"],
            &["_", "1"],
            "_",
            "scan",
            &["done"],
            &[("scan", "1", "scan", "1", R), ("scan", "_", "done", "1", R)],
        )
        .expect("well-formed")
    }

    /// Adds one to a binary numeral written most significant bit first.
    pub fn binary_increment() -> TuringMachine {
        TuringMachine::from_named(
            &["right", "carry", "done"],
            &["_", "0", "1"],
            "_",
            "right",
            &["done"],
            &[
                ("right", "0", "right", "0", R),
                ("right", "1", "right", "1", R),
                ("right", "_", "carry", "_", L),
                ("carry", "1", "carry", "0", L),
                ("carry", "0", "done", "1", L),
                ("carry", "_", "done", "1", L),
            ],
        )
        .expect("well-formed")
    }

    /// Overwrites the head cell with `1` and halts.
    pub fn write_one() -> TuringMachine {
        TuringMachine::from_named(
            &["w", "h"],
            &["_", "0", "1"],
            "_",
            "w",
            &["h"],
            &[
                ("w", "0", "h", "1", R),
                ("w", "1", "h", "1", R),
                ("w", "_", "h", "1", R),
            ],
        )
        .expect("well-formed")
    }

    pub fn halts_immediately() -> TuringMachine {
        TuringMachine::from_named(&["h"], &["_", "0", "1"], "_", "h", &["h"], &[])
            .expect("well-formed")
    }
}

#[cfg(test)]
mod tests {
    use super::library::*;
    use super::*;
    use crate::compiler::compile_two_stack;
    use proptest::prelude::*;

    fn convert_and_compare(tm: &TuringMachine, input: &str) -> (TmOutcome, usize) {
        let ids = tm.parse_input(input).unwrap();
        let direct = tm.run(&ids, 10_000);
        assert!(direct.halted);
        let conv = tm_to_two_stack(tm, &ids).unwrap();
        let run = conv.machine.run(&conv.initial_stack, 1_000_000);
        assert!(run.halted);
        assert_eq!(
            conv.decode_tape(&run.final_config).unwrap(),
            direct.tape,
            "{input}"
        );
        (direct, run.steps)
    }

    #[test]
    fn unary_increment_matches() {
        let tm = unary_increment();
        let (out, _) = convert_and_compare(&tm, "11");
        assert_eq!(tm.render(&out.tape), "111");
    }

    #[test]
    fn binary_increment_matches() {
        let tm = binary_increment();
        assert_eq!(tm.block_width(), 2);
        for (input, expect) in [("1011", "1100"), ("11", "100"), ("0", "1"), ("", "1")] {
            let (out, _) = convert_and_compare(&tm, input);
            assert_eq!(tm.render(&out.tape), expect);
        }
    }

    #[test]
    fn immediate_halt_takes_at_most_width_steps() {
        let tm = halts_immediately();
        let (_, steps) = convert_and_compare(&tm, "0110");
        assert!(steps <= tm.block_width());
    }

    #[test]
    fn write_then_halt() {
        let tm = write_one();
        let (out, steps) = convert_and_compare(&tm, "00");
        assert_eq!(tm.render(&out.tape), "10");
        // load 4 bits, read 2, write 2, halt
        assert!(steps <= 4 + 1 + 2 + 2 + 1, "{steps}");
    }

    #[test]
    fn compiled_tm_halts_with_tape() {
        let tm = unary_increment();
        let ids = tm.parse_input("11").unwrap();
        let conv = tm_to_two_stack(&tm, &ids).unwrap();
        let steps = conv.machine.run(&conv.initial_stack, 1000).steps;
        let c = compile_two_stack(&conv.machine, &conv.initial_stack).unwrap();
        let hs = c.boundary_states(steps).unwrap();
        let last = c.decode(hs.last().unwrap()).unwrap();
        assert_eq!(last.state, conv.machine.halt());
        assert_eq!(tm.render(&conv.decode_tape(&last).unwrap()), "111");
    }

    #[test]
    fn rejects_nondeterminism() {
        use Direction::*;
        let tm = TuringMachine::from_named(
            &["a", "h"],
            &["_", "1"],
            "_",
            "a",
            &["h"],
            &[("a", "1", "a", "1", R), ("a", "1", "h", "1", L)],
        );
        assert!(matches!(tm, Err(Error::InvalidMachine(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(60))]
        #[test]
        fn binary_increment_any_input(bits in prop::collection::vec(any::<bool>(), 0..8)) {
            let text: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
            let tm = binary_increment();
            let (out, _) = convert_and_compare(&tm, &text);
            let value = bits.iter().fold(0u64, |a, &b| 2 * a + b as u64) + 1;
            let rendered = tm.render(&out.tape);
            prop_assert_eq!(u64::from_str_radix(&rendered, 2).unwrap(), value);
        }
    }
}
