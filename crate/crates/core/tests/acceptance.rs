//! Acceptance criteria 1–10. Each test prints one `[PASS]`/`[FAIL]` line to
//! stderr (uncaptured) and then asserts. Expected values come from oracles
//! defined in this file: closed forms, brute-force SAT, a separate
//! two-stack interpreter and a direct base-4 sum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rnnfsm::alphabet::Word;
use rnnfsm::automata::{build_trivial_unary_dpfa, WeightedAutomaton};
use rnnfsm::compiler::machine::library;
use rnnfsm::compiler::{
    attach_output_gadget, compile_two_stack, decode_stack, encode_stack, encode_stack_literal,
    StackAction, Top, TopPattern, TwoStackMachine,
};
use rnnfsm::decision::{
    decide_tchebychev_gt, eq_finite, finite_support_distance, sat_via_distance, DistanceOutcome,
    EqOutcome, SearchOptions,
};
use rnnfsm::reduction::{
    build_reduction_pfa, build_toy_rnn, reduction_threshold, CnfFormula, Literal, ReductionParams,
};
use rnnfsm::{Weight, WeightedLanguage};
use std::io::Write;
use std::time::{Duration, Instant};

type Q = BigRational;

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn qpow(x: &Q, e: usize) -> Q {
    (0..e).fold(Q::one(), |acc, _| acc * x)
}

fn exact(w: Weight) -> Q {
    w.into_exact().expect("exact weight")
}

fn report(id: u8, name: &str, limit_secs: u64, started: Instant, outcome: Result<String, String>) {
    let elapsed = started.elapsed();
    let limit = Duration::from_secs(limit_secs);
    let (ok, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d}; took {elapsed:?}, limit {limit:?}")),
        Err(e) => (false, e),
    };
    let _ = writeln!(
        std::io::stderr(),
        "[{}] AC{id:<2} {name:<34} {:>9.3}s (limit {limit_secs}s)  {detail}",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    assert!(ok, "AC{id} failed: {detail}");
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// All binary words of length `len`, lexicographic.
fn binary_words(len: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..1usize << len).map(move |m| (0..len).map(|i| (m >> (len - 1 - i)) & 1).collect())
}

fn satisfied(f: &CnfFormula, bits: &[usize]) -> usize {
    f.clauses()
        .iter()
        .filter(|c| {
            c.iter()
                .any(|l: &Literal| (bits[l.var - 1] == 1) == l.positive)
        })
        .count()
}

fn max_satisfied(f: &CnfFormula) -> usize {
    binary_words(f.num_vars())
        .map(|w| satisfied(f, &w))
        .max()
        .unwrap()
}

/// The three-case closed form of the reduction PFA.
fn pfa_closed_form(f: &CnfFormula, eps: &Q, w: &[usize]) -> Q {
    let n = f.num_vars();
    let k = Q::from_integer(f.num_clauses().into());
    let base = Q::from_integer(2.into()) * qpow(&(q(1, 2) - eps), w.len()) * eps;
    if w.len() < n {
        return base;
    }
    let nw = Q::from_integer(satisfied(f, &w[..n]).into());
    let two_eps = eps * Q::from_integer(2.into());
    let r = if w.len() == n {
        (Q::one() - &two_eps) / &two_eps
    } else {
        &two_eps / (Q::one() - &two_eps)
    };
    base * (&nw / &k * r + (&k - &nw) / &k)
}

fn corpus() -> Vec<CnfFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    (0..100)
        .map(|_| {
            let n = rng.gen_range(3..=6);
            let k = rng.gen_range(1..=8);
            CnfFormula::random(&mut rng, n, k)
        })
        .collect()
}

#[test]
fn ac01_trivial_dpfa_language() {
    let t = Instant::now();
    let a = build_trivial_unary_dpfa();
    let r = (0..=64usize).try_for_each(|n| {
        let want = Q::new(BigInt::one(), BigInt::one() << (n + 1));
        let got = exact(a.weight(&Word::from_ids(vec![0; n])).unwrap());
        check(got == want, || format!("a^{n}: {got} != {want}"))
    });
    report(
        1,
        "trivial DPFA language",
        1,
        t,
        r.map(|_| "f(a^n) = 1/2^(n+1), n = 0..64".into()),
    );
}

#[test]
fn ac02_toy_rnn_closed_form_and_mass() {
    let t = Instant::now();
    let r = build_toy_rnn(&ReductionParams::new(q(1, 10)).unwrap());
    let run = || -> Result<String, String> {
        let mut mass = Q::zero();
        let mut words = 0;
        for len in 0..=12 {
            for w in binary_words(len) {
                let want = Q::from_integer(2.into()) * qpow(&q(2, 5), len) * q(1, 10);
                let got = exact(r.weight(&Word::from_ids(w.clone())).unwrap());
                check(got == want, || format!("R({w:?}) = {got}"))?;
                mass += got;
                words += 1;
            }
            let want = Q::one() - qpow(&q(4, 5), len + 1);
            check(mass == want, || format!("mass at L = {len}: {mass}"))?;
            check(exact(r.mass_upto(len).unwrap()) == want, || {
                format!("library mass at L = {len}")
            })?;
        }
        Ok(format!("{words} words; masses 1-(4/5)^(L+1) for L <= 12"))
    };
    report(2, "toy RNN closed form and mass", 30, t, run());
}

#[test]
fn ac03_reduction_pfa_closed_form() {
    let t = Instant::now();
    let eps = q(1, 10);
    let p = ReductionParams::new(eps.clone()).unwrap();
    let run = || -> Result<String, String> {
        let mut count = 0;
        for f in corpus() {
            let a = build_reduction_pfa(&f, &p);
            for len in 0..=f.num_vars() + 2 {
                for w in binary_words(len) {
                    let got = exact(a.weight(&Word::from_ids(w.clone())).unwrap());
                    let want = pfa_closed_form(&f, &eps, &w);
                    check(got == want, || {
                        format!("{} on {w:?}: {got} != {want}", f.to_dimacs())
                    })?;
                    count += 1;
                }
            }
        }
        Ok(format!("{count} words over 100 formulas"))
    };
    report(3, "reduction PFA closed form", 300, t, run());
}

/// Row-stochasticity checked directly on the automaton's parts.
fn is_pfa(a: &WeightedAutomaton) -> bool {
    let unit = |x: &Q| x >= &Q::zero() && x <= &Q::one();
    let init: Q = a.initial().iter().sum();
    if init != Q::one() || !a.initial().iter().all(unit) {
        return false;
    }
    (0..a.num_states()).all(|s| {
        let out = a.transitions_from(s);
        let total: Q = out.iter().map(|t| t.weight.clone()).sum::<Q>() + &a.final_weights()[s];
        unit(&a.final_weights()[s]) && out.iter().all(|t| unit(&t.weight)) && total == Q::one()
    })
}

#[test]
fn ac04_reduction_pfa_validity() {
    let t = Instant::now();
    let run = || -> Result<String, String> {
        let mut count = 0;
        for eps in [q(1, 10), q(1, 18), q(1, 5) - q(1, 100)] {
            let p = ReductionParams::new(eps.clone()).unwrap();
            for f in corpus().iter().chain([&CnfFormula::running_example()]) {
                let a = build_reduction_pfa(f, &p);
                let rep = a.validate_pfa();
                check(rep.is_pfa, || {
                    format!("validator rejects at eps = {eps}: {:?}", rep.violations)
                })?;
                check(is_pfa(&a), || format!("direct check fails at eps = {eps}"))?;
                count += 1;
            }
        }
        Ok(format!("{count} automata"))
    };
    report(4, "reduction PFA validity", 60, t, run());
}

#[test]
fn ac05_distance_identity() {
    let t = Instant::now();
    let eps = q(1, 10);
    let p = ReductionParams::new(eps.clone()).unwrap();
    let r = build_toy_rnn(&p);
    let opts = SearchOptions::default();
    let run = || -> Result<String, String> {
        for f in corpus() {
            let n = f.num_vars();
            let k = f.num_clauses() as i64;
            let rep =
                finite_support_distance(&r, &build_reduction_pfa(&f, &p), n + 1, &opts).unwrap();
            let want = q(1, k)
                * qpow(&(q(1, 2) - &eps), n)
                * (Q::one() - &eps * q(4, 1))
                * Q::from_integer(max_satisfied(&f).into());
            let got = exact(rep.distance);
            check(got == want, || {
                format!("{}: {got} != {want}", f.to_dimacs())
            })?;
            check(rep.argmax.len() == n, || {
                format!("argmax length {}", rep.argmax.len())
            })?;
        }
        let f = CnfFormula::running_example();
        let d = exact(
            finite_support_distance(&r, &build_reduction_pfa(&f, &p), 5, &opts)
                .unwrap()
                .distance,
        );
        let c = reduction_threshold(&f, &p.clone().with_slack(q(1, 1))).unwrap();
        check(d == q(192, 12500), || format!("d = {d}"))?;
        check(c == q(96, 12500), || format!("c = {c}"))?;
        Ok("100 formulas; running example d = 192/12500, c = 96/12500".to_string())
    };
    report(5, "distance identity", 300, t, run());
}

fn brute_force_sat(f: &CnfFormula) -> bool {
    binary_words(f.num_vars()).any(|w| satisfied(f, &w) == f.num_clauses())
}

#[test]
fn ac06_sat_oracle_equivalence() {
    let t = Instant::now();
    let p = ReductionParams::new(q(1, 10)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(66);
    let mut formulas: Vec<CnfFormula> = (0..200)
        .map(|_| {
            let n = rng.gen_range(3..=10);
            let k = rng.gen_range(1..=5 * n);
            CnfFormula::random(&mut rng, n, k)
        })
        .collect();
    // unsatisfiable: all eight sign patterns on some triple, plus padding
    for n in 3..=9 {
        for base in 0..=n - 3 {
            let mut clauses: Vec<[Literal; 3]> = (0..8u8)
                .map(|m| {
                    let lit = |j: usize| Literal {
                        var: base + j + 1,
                        positive: (m >> j) & 1 == 1,
                    };
                    [lit(0), lit(1), lit(2)]
                })
                .collect();
            clauses.extend(CnfFormula::random(&mut rng, n, 3).clauses().iter().copied());
            formulas.push(CnfFormula::new(n, clauses).unwrap());
        }
    }
    let run = || -> Result<String, String> {
        let (mut sat, mut unsat) = (0, 0);
        for f in &formulas {
            let oracle = brute_force_sat(f);
            let got = sat_via_distance(f, &p).unwrap();
            check(got == oracle, || {
                format!("disagreement on {}", f.to_dimacs())
            })?;
            if oracle {
                sat += 1
            } else {
                unsat += 1
            }
        }
        Ok(format!(
            "{} formulas agree ({sat} sat, {unsat} unsat)",
            formulas.len()
        ))
    };
    report(6, "SAT oracle equivalence", 600, t, run());
}

#[test]
fn ac07_threshold_decision_procedure() {
    let t = Instant::now();
    let eps = q(1, 10);
    let p = ReductionParams::new(eps.clone()).unwrap();
    let f = CnfFormula::running_example();
    let (r, a) = (build_toy_rnn(&p), build_reduction_pfa(&f, &p));
    let opts = SearchOptions::default();
    let run = || -> Result<String, String> {
        let yes = decide_tchebychev_gt(&r, &a, &q(96, 12500), &opts).unwrap();
        let DistanceOutcome::Yes(w) = &yes.outcome else {
            return Err(format!("expected Yes: {:?}", yes.outcome));
        };
        check(w.len() == 4, || format!("witness length {}", w.len()))?;
        let d = exact(r.weight(w).unwrap()) - exact(a.weight(w).unwrap());
        check(d == q(192, 12500) || -d.clone() == q(192, 12500), || {
            format!("witness gap {d}")
        })?;

        let c = q(1, 5);
        let no = decide_tchebychev_gt(&r, &a, &c, &opts).unwrap();
        check(no.outcome == DistanceOutcome::No, || {
            format!("expected No: {:?}", no.outcome)
        })?;
        let floor = Q::one() - &c;
        // first L with 1 − (4/5)^{L+1} ≥ 1 − c, and the same for the PFA via its closed form
        let toy_len = (0..)
            .find(|&l| Q::one() - qpow(&q(4, 5), l + 1) >= floor)
            .unwrap();
        let mut pfa_mass = Q::zero();
        let pfa_len = (0..)
            .find(|&l| {
                pfa_mass += binary_words(l)
                    .map(|w| pfa_closed_form(&f, &eps, &w))
                    .sum::<Q>();
                pfa_mass >= floor
            })
            .unwrap();
        check(no.last_length == toy_len.max(pfa_len), || {
            format!(
                "stopped at length {}, analytic {}",
                no.last_length,
                toy_len.max(pfa_len)
            )
        })?;
        Ok(format!(
            "Yes at length 4; No after length {} as predicted",
            no.last_length
        ))
    };
    report(7, "threshold decision procedure", 60, t, run());
}

/// Independent interpreter over the rule list: first matching rule wins
/// (rules are deterministic), no rule means halt, popping empty is a no-op.
fn interpret(
    m: &TwoStackMachine,
    input: &[bool],
    steps: usize,
) -> Vec<(usize, Vec<bool>, Vec<bool>)> {
    let matches = |p: TopPattern, s: &Vec<bool>| match p {
        TopPattern::Any => true,
        TopPattern::Is(Top::Empty) => s.is_empty(),
        TopPattern::Is(Top::Zero) => s.first() == Some(&false),
        TopPattern::Is(Top::One) => s.first() == Some(&true),
    };
    let apply = |a: StackAction, s: &mut Vec<bool>| match a {
        StackAction::Push0 => s.insert(0, false),
        StackAction::Push1 => s.insert(0, true),
        StackAction::Pop if !s.is_empty() => {
            s.remove(0);
        }
        _ => {}
    };
    let mut cur = (m.start(), input.to_vec(), Vec::new());
    let mut out = vec![cur.clone()];
    for _ in 0..steps {
        if cur.0 != m.halt() {
            match m
                .rules()
                .iter()
                .find(|r| r.state == cur.0 && matches(r.top1, &cur.1) && matches(r.top2, &cur.2))
            {
                Some(r) => {
                    apply(r.act1, &mut cur.1);
                    apply(r.act2, &mut cur.2);
                    cur.0 = r.next;
                }
                None => cur.0 = m.halt(),
            }
        }
        out.push(cur.clone());
    }
    out
}

#[test]
fn ac08_two_stack_bisimulation() {
    let t = Instant::now();
    let mut family: Vec<(TwoStackMachine, Vec<bool>)> = Vec::new();
    for len in 0..10 {
        family.push((library::drain(), (0..len).map(|i| i % 2 == 1).collect()));
    }
    for k in 1..=3 {
        family.push((library::halts_after(k), vec![false, true]));
    }
    family.push((library::push_pop(), vec![true]));
    family.push((library::transfer(), vec![true, false, false, true]));
    family.push((library::looper(), vec![true, true]));
    let boundaries = 200;
    let run = || -> Result<String, String> {
        let mut halts = Vec::new();
        for (m, input) in &family {
            check(m.num_states() <= 4, || "more than four states".into())?;
            let expect = interpret(m, input, boundaries);
            let halt_at = expect.iter().position(|c| c.0 == m.halt());
            let c = compile_two_stack(m, input).unwrap();
            check(c.rnn.h0()[c.stack_neurons.0] == encode_stack(input), || {
                "initial stack unit".into()
            })?;
            for (b, h) in c.boundary_states(boundaries).unwrap().iter().enumerate() {
                let cfg = c.decode(h).map_err(|e| format!("boundary {b}: {e}"))?;
                let want = &expect[b];
                check(
                    (cfg.state, &cfg.stack1, &cfg.stack2) == (want.0, &want.1, &want.2),
                    || format!("{:?} boundary {b}", m.state_names()),
                )?;
                let flag = if halt_at.is_some_and(|s| b >= s) {
                    1
                } else {
                    0
                };
                check(h[c.halting_neuron] == q(flag, 1), || {
                    format!("halting unit at boundary {b}")
                })?;
            }
            halts.push(halt_at);
        }
        for s in 1..=10 {
            check(halts.contains(&Some(s)), || {
                format!("no machine halts at step {s}")
            })?;
        }
        check(halts.contains(&None), || "no looping machine".into())?;
        Ok(format!(
            "{} machines, {boundaries} boundaries each",
            family.len()
        ))
    };
    report(8, "two-stack RNN bisimulation", 120, t, run());
}

#[test]
fn ac09_gadget_language_and_eq_finite() {
    let t = Instant::now();
    let dpfa = build_trivial_unary_dpfa();
    let opts = SearchOptions::default();
    let run = || -> Result<String, String> {
        let looping =
            attach_output_gadget(&compile_two_stack(&library::looper(), &[]).unwrap()).unwrap();
        for n in 0..=16 {
            let got = exact(looping.rnn.weight(&Word::from_ids(vec![0; n])).unwrap());
            check(
                got == Q::new(BigInt::one(), BigInt::one() << (n + 1)),
                || format!("R'(a^{n}) = {got}"),
            )?;
        }
        check(
            eq_finite(&dpfa, &looping.rnn, 10, &opts).unwrap() == EqOutcome::Equivalent,
            || "looper differs".into(),
        )?;

        let m = library::halts_after(3);
        let halt_step = interpret(&m, &[], 10)
            .iter()
            .position(|c| c.0 == m.halt())
            .unwrap();
        let g = attach_output_gadget(&compile_two_stack(&m, &[]).unwrap()).unwrap();
        // the halting unit is 1 from RNN step κ·T; step t scores the t-th symbol,
        // so the first affected word has length κ·T − 1
        let first = g.step_dilation * halt_step - 1;
        for n in 0..first {
            let got = exact(g.rnn.weight(&Word::from_ids(vec![0; n])).unwrap());
            check(
                got == Q::new(BigInt::one(), BigInt::one() << (n + 1)),
                || format!("pre-halt a^{n}"),
            )?;
        }
        match eq_finite(&dpfa, &g.rnn, first + 1, &opts).unwrap() {
            EqOutcome::Counterexample { word, .. } => check(word.len() == first, || {
                format!("counterexample at length {}", word.len())
            })?,
            EqOutcome::Equivalent => return Err("no counterexample".into()),
        }
        Ok(format!(
            "looper equivalent to m = 10; halt-at-3 gadget differs first at length {first}"
        ))
    };
    report(9, "gadget language and EQ-Finite", 60, t, run());
}

#[test]
fn ac10_stack_codec() {
    let t = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut run = || -> Result<String, String> {
        for _ in 0..10_000 {
            let len = rng.gen_range(0..=30);
            let s: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
            let want: Q = s
                .iter()
                .enumerate()
                .map(|(i, &b)| {
                    Q::new(
                        BigInt::from(2 * b as i64 + 1),
                        BigInt::from(4).pow(i as u32 + 1),
                    )
                })
                .sum();
            let v = encode_stack(&s);
            check(v == want, || format!("{s:?}"))?;
            check(decode_stack(&v).unwrap() == s, || format!("decode {s:?}"))?;
        }
        check(encode_stack_literal(&[true]) == q(1, 4), || {
            "literal 1".into()
        })?;
        check(encode_stack_literal(&[true, false]) == q(1, 4), || {
            "literal 10".into()
        })?;
        check(!rnnfsm::compiler::stack::LITERAL_CODEC_IS_INJECTIVE, || {
            "literal codec not flagged".into()
        })?;
        Ok("10000 round trips; literal codec maps 1 and 10 to 1/4".into())
    };
    report(10, "stack codec", 10, t, run());
}
