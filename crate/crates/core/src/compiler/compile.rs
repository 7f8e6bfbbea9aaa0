//! Two-stack machine to ReLU RNN.
//!
//! The hidden vector carries four layers of units. At any time exactly one
//! layer is live and the others are zero; each recurrence step moves the
//! live signal one layer forward, so a machine step takes
//! [`STEP_DILATION`] RNN steps:
//!
//! 0. configuration: stack values `v₁, v₂` and one-hot control state,
//! 1. threshold units `relu(4v − j)` for `j = 0..3`, giving
//!    `nonempty = sat(4v)` and `top = sat(4v − 2)` as differences of two relus,
//! 2. one condition unit per (state, top₁, top₂),
//! 3. gated stack updates (push0, push1, pop, noop) and next-state units.
//!
//! A halting unit latches to 1 once the halt state is entered.

use super::machine::{Configuration, StackAction, Top, TwoStackMachine};
use super::stack::{decode_stack, encode_stack};
use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::language::WeightedLanguage;
use crate::rational::{int, rat, Rational};
use crate::rnn::{Activation, Logit, RnnLm, SparseMatrix};
use num_traits::{One, Zero};

/// RNN steps per machine step.
pub const STEP_DILATION: usize = 4;

/// A compiled network together with the indices needed to read it.
#[derive(Clone, Debug)]
pub struct CompiledRnn {
    pub rnn: RnnLm,
    pub halting_neuron: usize,
    pub stack_neurons: (usize, usize),
    /// Layer-0 one-hot units, indexed by control state.
    pub state_neurons: Vec<usize>,
    pub state_names: Vec<String>,
    pub halt_state: usize,
    pub step_dilation: usize,
    pub aux_neuron: Option<usize>,
}

/// Values read at a machine-step boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceEntry {
    pub boundary: usize,
    pub halting: Rational,
    pub stacks: (Rational, Rational),
    pub state: Option<usize>,
}

#[derive(Default)]
struct Net {
    bias: Vec<Rational>,
    edges: Vec<(usize, usize, Rational)>,
}

impl Net {
    fn unit(&mut self, bias: Rational) -> usize {
        self.bias.push(bias);
        self.bias.len() - 1
    }

    fn edge(&mut self, to: usize, from: usize, w: Rational) {
        self.edges.push((to, from, w));
    }

    /// `relu(Σ wᵢ xᵢ + bias)` as a new unit.
    fn relu(&mut self, terms: &[(usize, Rational)], bias: Rational) -> usize {
        let u = self.unit(bias);
        for (from, w) in terms {
            self.edge(u, *from, w.clone());
        }
        u
    }
}

struct StackReadout {
    copy: usize,
    r: [usize; 4],
}

impl StackReadout {
    fn indicator(&self, t: Top) -> Vec<(usize, Rational)> {
        let [a, b, c, d] = self.r;
        match t {
            // 1 − sat(4v), constant handled by the caller
            Top::Empty => vec![(a, int(-1)), (b, int(1))],
            Top::Zero => vec![(a, int(1)), (b, int(-1)), (c, int(-1)), (d, int(1))],
            Top::One => vec![(c, int(1)), (d, int(-1))],
        }
    }
}

/// Compiles `machine` started with `input` on stack 1 (top first) and an
/// empty stack 2. The result speaks the unary alphabet `{a}` with a uniform
/// output layer; see [`attach_output_gadget`] for the weighted version.
pub fn compile_two_stack(machine: &TwoStackMachine, input: &[bool]) -> Result<CompiledRnn> {
    let q = machine.num_states();
    let halt = machine.halt();
    let mut net = Net::default();

    // layer 0
    let v1 = net.unit(Rational::zero());
    let n_halt = net.unit(Rational::zero());
    let v2 = net.unit(Rational::zero());
    let s0: Vec<usize> = (0..q).map(|_| net.unit(Rational::zero())).collect();

    // layer 1
    let s1: Vec<usize> = s0
        .iter()
        .map(|&s| net.relu(&[(s, int(1))], int(0)))
        .collect();
    let readout1 = |net: &mut Net, v: usize| {
        let copy = net.relu(&[(v, int(1))], int(0));
        let r = [0, 1, 2, 3].map(|j| net.relu(&[(v, int(4))], int(-j)));
        StackReadout { copy, r }
    };
    let st1 = readout1(&mut net, v1);
    let st2 = readout1(&mut net, v2);

    // layer 2
    let mut conds = Vec::new();
    for state in (0..q).filter(|&s| s != halt) {
        for t1 in Top::ALL {
            for t2 in Top::ALL {
                let mut terms = vec![(s1[state], int(1))];
                terms.extend(st1.indicator(t1));
                terms.extend(st2.indicator(t2));
                let constant = [t1, t2].iter().filter(|&&t| t == Top::Empty).count() as i64;
                let unit = net.relu(&terms, int(constant - 2));
                let mut m = machine
                    .transition(state, t1, t2)
                    .expect("non-halt state has a move");
                if t1 == Top::Empty && m.act1 == StackAction::Pop {
                    m.act1 = StackAction::Noop;
                }
                if t2 == Top::Empty && m.act2 == StackAction::Pop {
                    m.act2 = StackAction::Noop;
                }
                conds.push((unit, m));
            }
        }
    }
    let halted = net.relu(&[(s1[halt], int(1))], int(0));
    let copy2 = [st1.copy, st2.copy].map(|c| net.relu(&[(c, int(1))], int(0)));
    let top2 = [&st1, &st2].map(|s| net.relu(&[(s.r[2], int(1)), (s.r[3], int(-1))], int(0)));

    // layer 3
    let mut gates = [Vec::new(), Vec::new()];
    for k in 0..2 {
        for action in StackAction::ALL {
            let mut terms: Vec<(usize, Rational)> = conds
                .iter()
                .filter(|(_, m)| (if k == 0 { m.act1 } else { m.act2 }) == action)
                .map(|(u, _)| (*u, int(1)))
                .collect();
            if action == StackAction::Noop {
                terms.push((halted, int(1)));
            }
            let (v, t) = (copy2[k], top2[k]);
            let bias = match action {
                StackAction::Push0 => {
                    terms.push((v, rat(1, 4)));
                    rat(-3, 4)
                }
                StackAction::Push1 => {
                    terms.push((v, rat(1, 4)));
                    rat(-1, 4)
                }
                StackAction::Pop => {
                    terms.push((v, int(4)));
                    terms.push((t, int(-2)));
                    int(-2)
                }
                StackAction::Noop => {
                    terms.push((v, int(1)));
                    int(-1)
                }
            };
            gates[k].push(net.relu(&terms, bias));
        }
    }
    let into = |target: usize| -> Vec<(usize, Rational)> {
        conds
            .iter()
            .filter(|(_, m)| m.next == target)
            .map(|(u, _)| (*u, int(1)))
            .collect()
    };
    let s3: Vec<Option<usize>> = (0..q)
        .map(|s| {
            if s == halt {
                None
            } else {
                Some(net.relu(&into(s), int(0)))
            }
        })
        .collect();
    let enter = net.relu(&into(halt), int(0));
    let stay = net.relu(&[(halted, int(1))], int(0));

    // back to layer 0
    for (k, v) in [v1, v2].into_iter().enumerate() {
        for &g in &gates[k] {
            net.edge(v, g, int(1));
        }
    }
    for s in 0..q {
        match s3[s] {
            Some(u) => net.edge(s0[s], u, int(1)),
            None => {
                net.edge(s0[s], enter, int(1));
                net.edge(s0[s], stay, int(1));
            }
        }
    }
    net.edge(n_halt, n_halt, int(1));
    net.edge(n_halt, enter, int(1));

    let n = net.bias.len();
    let mut w = SparseMatrix::zeros(n, n);
    for (to, from, x) in net.edges {
        w.add_to(to, from, x);
    }
    let mut h0 = vec![Rational::zero(); n];
    h0[v1] = encode_stack(input);
    h0[s0[machine.start()]] = Rational::one();
    if machine.start() == halt {
        h0[n_halt] = Rational::one();
    }
    let alphabet = Alphabet::unary();
    let k = alphabet.len_with_marker();
    let rnn = RnnLm::from_sparse(
        alphabet,
        h0,
        w,
        vec![net.bias; k],
        SparseMatrix::zeros(k, n),
        vec![Logit::from(Rational::zero()); k],
        Activation::Relu,
    );
    Ok(CompiledRnn {
        rnn,
        halting_neuron: n_halt,
        stack_neurons: (v1, v2),
        state_neurons: s0,
        state_names: machine.state_names().to_vec(),
        halt_state: halt,
        step_dilation: STEP_DILATION,
        aux_neuron: None,
    })
}

/// Adds the output layer that turns halting into a weighted language over
/// `{a}`: the `a`-logit reads the halting unit, the `$`-logit reads a fresh
/// unit `n′` that starts at 0 and feeds only itself (so it stays 0), and all
/// biases are 0. Before halting every step is `(1/2, 1/2)`, so
/// `R′(aⁿ) = 1/2ⁿ⁺¹`; once the halting unit is 1 the step becomes `(2/3, 1/3)`.
pub fn attach_output_gadget(c: &CompiledRnn) -> Result<CompiledRnn> {
    let alphabet = c.rnn.alphabet();
    if alphabet.len() != 1 {
        return Err(Error::NotUnary(alphabet.len()));
    }
    let n = c.rnn.hidden_dim();
    let aux = n;
    let mut w = c.rnn.transition().clone();
    w.grow(1, 1);
    w.set(aux, aux, int(1));
    let mut h0 = c.rnn.h0().to_vec();
    h0.push(Rational::zero());
    let embeddings = c
        .rnn
        .embeddings()
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.push(Rational::zero());
            e
        })
        .collect();
    let mut o = SparseMatrix::zeros(2, n + 1);
    o.set(0, c.halting_neuron, int(1));
    o.set(1, aux, int(1));
    let rnn = RnnLm::from_sparse(
        alphabet.clone(),
        h0,
        w,
        embeddings,
        o,
        vec![Logit::from(Rational::zero()); 2],
        c.rnn.activation().clone(),
    )
    .declare_consistent(c.rnn.declared_consistent());
    Ok(CompiledRnn {
        rnn,
        aux_neuron: Some(aux),
        ..c.clone()
    })
}

impl CompiledRnn {
    pub fn hidden_dim(&self) -> usize {
        self.rnn.hidden_dim()
    }

    /// Reads the machine configuration from a boundary hidden vector.
    pub fn decode(&self, h: &[Rational]) -> Result<Configuration> {
        let mut state = None;
        for (s, &u) in self.state_neurons.iter().enumerate() {
            if h[u].is_one() {
                if state.replace(s).is_some() {
                    return Err(Error::InvalidMachine(
                        "several control states active".into(),
                    ));
                }
            } else if !h[u].is_zero() {
                return Err(Error::InvalidMachine(format!(
                    "state unit {u} holds {}",
                    h[u]
                )));
            }
        }
        let state = state.ok_or_else(|| Error::InvalidMachine("no control state active".into()))?;
        Ok(Configuration {
            state,
            stack1: decode_stack(&h[self.stack_neurons.0])?,
            stack2: decode_stack(&h[self.stack_neurons.1])?,
        })
    }

    /// Hidden vectors at boundaries `0..=boundaries`, feeding `a` every step.
    pub fn boundary_states(&self, boundaries: usize) -> Result<Vec<Vec<Rational>>> {
        let mut h = self.rnn.h0().to_vec();
        let mut out = vec![h.clone()];
        for _ in 0..boundaries {
            for _ in 0..self.step_dilation {
                h = self.rnn.next_hidden(&h, 0)?;
            }
            out.push(h.clone());
        }
        Ok(out)
    }
}

/// Runs `κ · boundaries` recurrence steps and reports the halting unit,
/// both stack units and the active control state at each boundary.
pub fn simulate(c: &CompiledRnn, boundaries: usize) -> Result<Vec<TraceEntry>> {
    Ok(c.boundary_states(boundaries)?
        .into_iter()
        .enumerate()
        .map(|(boundary, h)| TraceEntry {
            boundary,
            halting: h[c.halting_neuron].clone(),
            stacks: (h[c.stack_neurons.0].clone(), h[c.stack_neurons.1].clone()),
            state: c.state_neurons.iter().position(|&u| h[u].is_one()),
        })
        .collect())
}
