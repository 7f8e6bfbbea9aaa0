//! The end-to-end check suite behind `rnnfsm verify --suite paper`: ten
//! criteria, each an exact comparison against a closed form or an
//! independent brute-force oracle, with a wall-clock limit.

use crate::alphabet::{Alphabet, Word};
use crate::automata::build_trivial_unary_dpfa;
use crate::compiler::{
    attach_output_gadget, compile_two_stack, decode_stack, encode_stack, encode_stack_literal,
    machine::library, TwoStackMachine, STEP_DILATION,
};
use crate::decision::{
    decide_tchebychev_gt, eq_finite, finite_support_distance, sat_via_distance, DistanceOutcome,
    EqOutcome, SearchOptions,
};
use crate::error::{Error, Result};
use crate::language::{mass_profile, weights_upto, Weight, WeightedLanguage};
use crate::rational::{format_rational, int, pow, rat, Rational};
use crate::reduction::{
    build_reduction_pfa, build_toy_rnn, closed_form_pfa_weight, reduction_threshold, CnfFormula,
    Literal, ReductionParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::time::{Duration, Instant};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl std::fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}] AC{:<2} {:<34} {:>8} ms / {:>6} ms  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

type Check = fn(&SearchOptions) -> Result<String>;

const CRITERIA: [(u8, &str, u64, Check); 10] = [
    (1, "trivial DPFA language", 1, criterion_1),
    (2, "toy RNN closed form and mass", 30, criterion_2),
    (3, "reduction PFA closed form", 300, criterion_3),
    (4, "reduction PFA validity", 60, criterion_4),
    (5, "distance identity", 300, criterion_5),
    (6, "SAT via distance", 600, criterion_6),
    (7, "threshold decision procedure", 60, criterion_7),
    (8, "compiled machine bisimulation", 120, criterion_8),
    (9, "gadget language and EQ-Finite", 60, criterion_9),
    (10, "stack codec", 10, criterion_10),
];

pub fn criterion_ids() -> impl Iterator<Item = u8> {
    CRITERIA.iter().map(|c| c.0)
}

/// Runs one criterion; an `Err` from the check counts as a failure.
pub fn run_criterion(id: u8, opts: &SearchOptions) -> Result<CriterionResult> {
    let &(id, name, secs, check) = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .ok_or_else(|| Error::InvalidArgument(format!("no criterion {id}")))?;
    let t = Instant::now();
    let outcome = check(opts);
    let elapsed = t.elapsed();
    let limit = Duration::from_secs(secs);
    let (passed, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("{d} (over time limit)")),
        Err(e) => (false, e.to_string()),
    };
    Ok(CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
    })
}

pub fn run_suite(opts: &SearchOptions) -> Vec<CriterionResult> {
    criterion_ids()
        .map(|id| run_criterion(id, opts).expect("known id"))
        .collect()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg()))
    }
}

fn exact(w: Weight) -> Result<Rational> {
    w.into_exact()
        .ok_or_else(|| Error::ExactnessUnavailable("expected an exact weight".into(), 0))
}

/// The fixed random corpus of criteria 3–5: 100 formulas, n ≤ 6, k ≤ 8.
pub fn reduction_corpus() -> Vec<CnfFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..100)
        .map(|_| {
            let n = rng.gen_range(3..=6);
            let k = rng.gen_range(1..=8);
            CnfFormula::random(&mut rng, n, k)
        })
        .collect()
}

fn criterion_1(_: &SearchOptions) -> Result<String> {
    let a = build_trivial_unary_dpfa();
    for n in 0..=64 {
        let w = Word::from_ids(vec![0; n]);
        let want = Rational::new(1.into(), num_bigint::BigInt::from(1) << (n + 1));
        ensure(exact(a.weight(&w)?)? == want, || {
            format!("f(a^{n}) differs")
        })?;
    }
    Ok("f(a^n) = 1/2^(n+1) for n = 0..64".into())
}

fn criterion_2(_: &SearchOptions) -> Result<String> {
    let p = ReductionParams::default();
    let r = build_toy_rnn(&p);
    let words = weights_upto(&r, 12)?;
    for (w, x) in &words {
        let want = int(2) * pow(&rat(2, 5), w.len()) * rat(1, 10);
        ensure(exact(x.clone())? == want, || format!("R({:?})", w.ids()))?;
    }
    for (l, m) in mass_profile(&r, 12)?.into_iter().enumerate() {
        ensure(exact(m)? == int(1) - pow(&rat(4, 5), l + 1), || {
            format!("mass at L = {l}")
        })?;
    }
    Ok(format!(
        "{} words, masses 1-(4/5)^(L+1) for L <= 12",
        words.len()
    ))
}

fn criterion_3(_: &SearchOptions) -> Result<String> {
    let p = ReductionParams::default();
    let mut checked = 0;
    for f in reduction_corpus() {
        let a = build_reduction_pfa(&f, &p);
        for (w, x) in weights_upto(&a, f.num_vars() + 2)? {
            ensure(exact(x)? == closed_form_pfa_weight(&f, &p, &w)?, || {
                format!("{} on {:?}", f.to_dimacs(), w.ids())
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} words over 100 formulas"))
}

fn criterion_4(_: &SearchOptions) -> Result<String> {
    let eps = [rat(1, 10), rat(1, 18), rat(1, 5) - rat(1, 100)];
    let mut count = 0;
    for f in reduction_corpus()
        .iter()
        .chain([&CnfFormula::running_example()])
    {
        for e in &eps {
            let report = build_reduction_pfa(f, &ReductionParams::new(e.clone())?).validate_pfa();
            ensure(report.is_pfa, || format!("{:?}", report.violations))?;
            count += 1;
        }
    }
    Ok(format!("{count} automata valid"))
}

fn criterion_5(opts: &SearchOptions) -> Result<String> {
    let p = ReductionParams::default();
    let r = build_toy_rnn(&p);
    for f in reduction_corpus() {
        let n = f.num_vars();
        let k = f.num_clauses();
        let rep = finite_support_distance(&r, &build_reduction_pfa(&f, &p), n + 1, opts)?;
        let want = rat(1, k as i64)
            * pow(&(rat(1, 2) - p.epsilon()), n)
            * (int(1) - p.epsilon() * int(4))
            * int(f.brute_force_max_satisfied() as i64);
        ensure(exact(rep.distance)? == want, || {
            format!("distance for {}", f.to_dimacs())
        })?;
        ensure(rep.argmax.len() == n, || "argmax length".into())?;
    }
    let f = CnfFormula::running_example();
    let d = exact(finite_support_distance(&r, &build_reduction_pfa(&f, &p), 5, opts)?.distance)?;
    let c = reduction_threshold(&f, &p.clone().with_slack(int(1)))?;
    ensure(d == rat(192, 12500) && c == rat(96, 12500), || {
        format!("d = {d}, c = {c}")
    })?;
    Ok(format!(
        "100 formulas; running example d = {}, c = {}",
        format_rational(&d),
        format_rational(&c)
    ))
}

/// Unsatisfiable instances: all sign patterns over three variables, padded
/// with further variables and random clauses.
pub fn unsatisfiable_family() -> Vec<CnfFormula> {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut out = vec![CnfFormula::all_sign_patterns()];
    for n in 4..=8 {
        for shift in [0, n - 3] {
            let mut clauses: Vec<[Literal; 3]> = CnfFormula::all_sign_patterns()
                .clauses()
                .iter()
                .map(|c| {
                    c.map(|l| Literal {
                        var: l.var + shift,
                        positive: l.positive,
                    })
                })
                .collect();
            clauses.extend(CnfFormula::random(&mut rng, n, 2).clauses().iter().copied());
            out.push(CnfFormula::new(n, clauses).expect("valid clauses"));
        }
    }
    out
}

fn criterion_6(_: &SearchOptions) -> Result<String> {
    let p = ReductionParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut corpus: Vec<CnfFormula> = (0..200)
        .map(|_| {
            let n = rng.gen_range(3..=10);
            let k = rng.gen_range(1..=4 * n);
            CnfFormula::random(&mut rng, n, k)
        })
        .collect();
    corpus.extend(unsatisfiable_family());
    let mut sat = 0;
    for f in &corpus {
        let got = sat_via_distance(f, &p)?;
        ensure(got == f.brute_force_satisfiable(), || {
            format!("disagreement on {}", f.to_dimacs())
        })?;
        sat += got as usize;
    }
    Ok(format!(
        "{} formulas agree ({sat} satisfiable)",
        corpus.len()
    ))
}

fn criterion_7(opts: &SearchOptions) -> Result<String> {
    let p = ReductionParams::default();
    let f = CnfFormula::running_example();
    let (r, a) = (build_toy_rnn(&p), build_reduction_pfa(&f, &p));
    let yes = decide_tchebychev_gt(&r, &a, &rat(96, 12500), opts)?;
    let DistanceOutcome::Yes(w) = &yes.outcome else {
        return Err(Error::InvalidArgument(format!(
            "expected Yes, got {:?}",
            yes.outcome
        )));
    };
    ensure(w.len() == 4, || "witness length".into())?;
    let c = rat(1, 5);
    let no = decide_tchebychev_gt(&r, &a, &c, opts)?;
    ensure(no.outcome == DistanceOutcome::No, || {
        format!("expected No, got {:?}", no.outcome)
    })?;
    let floor = int(1) - &c;
    let toy_len = (0..)
        .find(|&l| int(1) - pow(&rat(4, 5), l + 1) >= floor)
        .expect("geometric tail");
    let pfa_len = mass_profile(&a, toy_len + 8)?
        .iter()
        .position(|m| m.lower() >= &floor)
        .ok_or_else(|| Error::InvalidArgument("PFA mass never reaches 1 - c".into()))?;
    ensure(no.last_length == toy_len.max(pfa_len), || {
        format!("stopped at length {}", no.last_length)
    })?;
    Ok(format!(
        "Yes at {} ({} words); No after length {} ({} words)",
        Alphabet::binary().render(w),
        yes.words_examined,
        no.last_length,
        no.words_examined
    ))
}

/// Two-stack machines with at most four states and known behavior.
pub fn bisimulation_family() -> Vec<(TwoStackMachine, Vec<bool>)> {
    let mut out = Vec::new();
    for len in 0..10 {
        out.push((library::drain(), (0..len).map(|i| i % 3 == 0).collect()));
    }
    for k in 1..=3 {
        out.push((library::halts_after(k), vec![true]));
    }
    out.push((library::push_pop(), vec![false, true]));
    out.push((library::transfer(), vec![true, true, false, true, false]));
    out.push((library::looper(), vec![true, false]));
    out
}

fn criterion_8(_: &SearchOptions) -> Result<String> {
    let boundaries = 200;
    let mut halting_steps = Vec::new();
    for (m, input) in bisimulation_family() {
        let c = compile_two_stack(&m, &input)?;
        let expected = m.trace(&input, boundaries);
        let halt_at = expected.iter().position(|x| m.is_halted(x));
        for (b, h) in c.boundary_states(boundaries)?.iter().enumerate() {
            ensure(c.decode(h)? == expected[b], || {
                format!("configuration differs at boundary {b}")
            })?;
            let flag = if halt_at.is_some_and(|t| b >= t) {
                int(1)
            } else {
                int(0)
            };
            ensure(h[c.halting_neuron] == flag, || {
                format!("halting unit wrong at boundary {b}")
            })?;
        }
        halting_steps.push(halt_at);
    }
    let halted: Vec<usize> = halting_steps.iter().flatten().copied().collect();
    ensure((1..=10).all(|t| halted.contains(&t)), || {
        "family must halt at steps 1..10".into()
    })?;
    ensure(halting_steps.contains(&None), || {
        "family needs a non-halting machine".into()
    })?;
    Ok(format!(
        "{} machines x {boundaries} boundaries",
        halting_steps.len()
    ))
}

fn criterion_9(opts: &SearchOptions) -> Result<String> {
    let dpfa = build_trivial_unary_dpfa();
    let looping = attach_output_gadget(&compile_two_stack(&library::looper(), &[])?)?;
    for n in 0..=20 {
        let want = Rational::new(1.into(), num_bigint::BigInt::from(1) << (n + 1));
        ensure(
            exact(looping.rnn.weight(&Word::from_ids(vec![0; n]))?)? == want,
            || format!("R'(a^{n})"),
        )?;
    }
    ensure(
        eq_finite(&dpfa, &looping.rnn, 10, opts)? == EqOutcome::Equivalent,
        || "looper not equivalent".into(),
    )?;
    let steps = 3;
    let halting = attach_output_gadget(&compile_two_stack(&library::halts_after(steps), &[])?)?;
    let first = STEP_DILATION * steps - 1;
    match eq_finite(&dpfa, &halting.rnn, STEP_DILATION * steps, opts)? {
        EqOutcome::Counterexample { word, .. } if word.len() == first => {}
        other => return Err(Error::InvalidArgument(format!("unexpected {other:?}"))),
    }
    Ok(format!(
        "looper equivalent up to 10; halting gadget first differs at length {first}"
    ))
}

fn criterion_10(_: &SearchOptions) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..10_000 {
        let len = rng.gen_range(0..=30);
        let stack: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
        ensure(decode_stack(&encode_stack(&stack))? == stack, || {
            format!("{stack:?}")
        })?;
    }
    let collide = encode_stack_literal(&[true]) == encode_stack_literal(&[true, false]);
    ensure(
        collide && !crate::compiler::stack::LITERAL_CODEC_IS_INJECTIVE,
        || "literal codec".into(),
    )?;
    Ok("10000 round trips; literal codec collides on 1 / 10".into())
}
