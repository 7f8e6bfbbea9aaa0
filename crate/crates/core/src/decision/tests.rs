use super::*;
use crate::alphabet::Alphabet;
use crate::automata::build_trivial_unary_dpfa;
use crate::compiler::{attach_output_gadget, compile_two_stack, machine::library};
use crate::language::mass_profile;
use crate::rational::{int, rat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fig1() -> (RnnLm, WeightedAutomaton, CnfFormula, ReductionParams) {
    let p = ReductionParams::default();
    let f = CnfFormula::running_example();
    (build_toy_rnn(&p), build_reduction_pfa(&f, &p), f, p)
}

fn word(s: &str) -> Word {
    Alphabet::binary().parse_word(s).unwrap()
}

#[test]
fn fig1_yes_with_length_four_witness() {
    let (r, a, _, _) = fig1();
    let v = decide_tchebychev_gt(&r, &a, &rat(96, 12500), &SearchOptions::default()).unwrap();
    let DistanceOutcome::Yes(w) = &v.outcome else {
        panic!("{v:?}")
    };
    assert_eq!(w.len(), 4);
    let d = r.weight(w).unwrap().sub(&a.weight(w).unwrap()).abs();
    assert_eq!(d, Weight::Exact(rat(192, 12500)));
}

#[test]
fn fig1_no_at_one_fifth_matches_mass_bound() {
    let (r, a, _, _) = fig1();
    let c = rat(1, 5);
    let v = decide_tchebychev_gt(&r, &a, &c, &SearchOptions::default()).unwrap();
    assert_eq!(v.outcome, DistanceOutcome::No);
    let floor = int(1) - &c;
    assert!(v.mass_f.lower() >= &floor && v.mass_g.lower() >= &floor);
    // toy: Σ_{|w|≤L} = 1 − (4/5)^{L+1}
    let toy_len = (0..)
        .find(|&l| int(1) - crate::rational::pow(&rat(4, 5), l + 1) >= floor)
        .unwrap();
    let pfa = mass_profile(&a, 12).unwrap();
    let pfa_len = pfa.iter().position(|m| m.lower() >= &floor).unwrap();
    assert_eq!(v.last_length, toy_len.max(pfa_len));
}

#[test]
fn no_is_sound_on_unexamined_words() {
    let (r, a, _, _) = fig1();
    let c = rat(1, 5);
    let v = decide_tchebychev_gt(&r, &a, &c, &SearchOptions::default()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let len = rng.gen_range(v.last_length + 1..v.last_length + 12);
        let w = Word::from_ids((0..len).map(|_| rng.gen_range(0..2)).collect());
        let d = r.weight(&w).unwrap().sub(&a.weight(&w).unwrap()).abs();
        assert_eq!(d.cmp_rational(&c), Some(Ordering::Less));
    }
}

#[test]
fn self_distance_is_no() {
    let (r, _, _, _) = fig1();
    let v = decide_tchebychev_gt(&r, &r, &rat(1, 10), &SearchOptions::default()).unwrap();
    assert_eq!(v.outcome, DistanceOutcome::No);
    assert_eq!(v.mass_f, v.mass_g);
}

#[test]
fn verdicts_ignore_worker_count_and_large_budgets() {
    let (r, a, _, _) = fig1();
    for c in [rat(96, 12500), rat(1, 5)] {
        let base =
            decide_tchebychev_gt(&r, &a, &c, &SearchOptions::default().with_workers(1)).unwrap();
        for opts in [
            SearchOptions::default().with_workers(4),
            SearchOptions::default().with_budget(1 << 20),
        ] {
            assert_eq!(decide_tchebychev_gt(&r, &a, &c, &opts).unwrap(), base);
        }
    }
}

#[test]
fn budget_exhaustion() {
    let (r, a, _, _) = fig1();
    let v = decide_tchebychev_gt(
        &r,
        &a,
        &rat(1, 5),
        &SearchOptions::default().with_budget(10),
    )
    .unwrap();
    assert_eq!(v.outcome, DistanceOutcome::BudgetExhausted);
    assert_eq!(v.words_examined, 10);
}

#[test]
fn preconditions() {
    let (r, a, _, _) = fig1();
    let opts = SearchOptions::default();
    let loose = a.clone().declare_consistent(false);
    assert!(matches!(
        decide_tchebychev_gt(&r, &loose, &rat(1, 5), &opts),
        Err(Error::NotDeclaredConsistent("g"))
    ));
    assert!(matches!(
        decide_tchebychev_gt(&r, &a, &int(0), &opts),
        Err(Error::InvalidArgument(_))
    ));
    let unary = build_trivial_unary_dpfa();
    assert!(matches!(
        decide_tchebychev_gt(&r, &unary, &rat(1, 5), &opts),
        Err(Error::AlphabetMismatch(_))
    ));
}

#[test]
fn inconsistency_is_certified() {
    // f(aⁿ) = (3/4)^{n+1}, declared consistent although the mass is 3
    let liar = WeightedAutomaton::new(
        Alphabet::unary(),
        1,
        [(0, int(1))],
        [(0, rat(3, 4))],
        [(0, 0, 0, rat(3, 4))],
    )
    .unwrap()
    .declare_consistent(true);
    let err =
        decide_tchebychev_gt(&liar, &liar, &rat(1, 100), &SearchOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InconsistencyDetected(m) if m > int(1)));
}

#[test]
fn interval_mode_decides() {
    // a $-logit of 1/2 makes every score irrational
    let mut params = crate::rnn::RnnParams {
        alphabet: Alphabet::binary(),
        h0: vec![int(0)],
        transition: vec![vec![int(0)]],
        embeddings: vec![vec![int(0)]; 3],
        output: vec![vec![int(0)]; 3],
        output_bias: vec![crate::rnn::Logit::from(int(0)); 3],
        activation: crate::rnn::Activation::Relu,
    };
    params.output_bias[2] = crate::rnn::Logit::from(rat(1, 2));
    let r = RnnLm::new(params).unwrap().declare_consistent(true);
    let e = r.weight(&Word::empty()).unwrap();
    assert!(!e.is_exact());
    // f(ε) = √2 / (2 + √2) ≈ 0.414
    assert_eq!(e.cmp_rational(&rat(414, 1000)), Some(Ordering::Greater));
    assert_eq!(e.cmp_rational(&rat(415, 1000)), Some(Ordering::Less));
    let v = decide_tchebychev_gt(&r, &r, &rat(1, 4), &SearchOptions::default()).unwrap();
    assert_eq!(v.outcome, DistanceOutcome::No);
    let opts = SearchOptions::default();
    assert_eq!(
        bounded_consensus_search(&r, &rat(2, 5), 3, &opts).unwrap(),
        Some(Word::empty())
    );
    assert_eq!(
        bounded_consensus_search(&r, &rat(1, 2), 3, &opts).unwrap(),
        None
    );
}

#[test]
fn finite_distance_examples() {
    let (r, a, _, _) = fig1();
    let opts = SearchOptions::default();
    let rep = finite_support_distance(&r, &a, 5, &opts).unwrap();
    assert_eq!(rep.distance, Weight::Exact(rat(192, 12500)));
    assert_eq!(rep.argmax.len(), 4);
    let short = finite_support_distance(&r, &a, 3, &opts).unwrap();
    assert_eq!(short.distance, Weight::zero());
    assert_eq!(short.argmax, Word::empty());
    let same = finite_support_distance(&a, &a, 4, &opts).unwrap();
    assert_eq!(
        (same.distance, same.argmax),
        (Weight::zero(), Word::empty())
    );
}

#[test]
fn finite_distance_monotone_and_flat_after_n() {
    let (r, a, f, _) = fig1();
    let opts = SearchOptions::default();
    let ds: Vec<Rational> = (0..=7)
        .map(|n| {
            finite_support_distance(&r, &a, n, &opts)
                .unwrap()
                .distance
                .into_exact()
                .unwrap()
        })
        .collect();
    assert!(ds.windows(2).all(|p| p[0] <= p[1]));
    assert!(ds[f.num_vars()..].iter().all(|d| *d == ds[f.num_vars()]));
}

#[test]
fn argmax_is_shortlex_first() {
    let (r, a, f, _) = fig1();
    let rep = finite_support_distance(&r, &a, 5, &SearchOptions::default()).unwrap();
    // the first length-4 word satisfying both clauses in lexicographic order
    let first = crate::shortlex::shortlex_enumerate(&Alphabet::binary(), Some(4))
        .filter(|w| w.len() == 4)
        .find(|w| f.count_satisfied(w).unwrap() == f.num_clauses())
        .unwrap();
    assert_eq!(rep.argmax, first);
}

#[test]
fn eq_finite_on_gadgets() {
    let opts = SearchOptions::default();
    let dpfa = build_trivial_unary_dpfa();
    let loop_gadget =
        attach_output_gadget(&compile_two_stack(&library::looper(), &[]).unwrap()).unwrap();
    assert_eq!(
        eq_finite(&dpfa, &loop_gadget.rnn, 10, &opts).unwrap(),
        EqOutcome::Equivalent
    );

    let halting =
        attach_output_gadget(&compile_two_stack(&library::halts_after(3), &[]).unwrap()).unwrap();
    let EqOutcome::Counterexample { word, f, g } =
        eq_finite(&dpfa, &halting.rnn, 12, &opts).unwrap()
    else {
        panic!()
    };
    assert_eq!(word.len(), 4 * 3 - 1);
    assert_eq!(f, Weight::Exact(rat(1, 1 << 12)));
    assert_eq!(g, Weight::Exact(rat(1, 1 << 11) * rat(1, 3)));
    assert_eq!(
        eq_finite(&dpfa, &halting.rnn, 10, &opts).unwrap(),
        EqOutcome::Equivalent
    );
    assert_eq!(
        eq_finite(&dpfa, &dpfa, 6, &opts).unwrap(),
        EqOutcome::Equivalent
    );
}

#[test]
fn consensus_examples() {
    let (r, a, _, _) = fig1();
    let opts = SearchOptions::default();
    assert_eq!(
        bounded_consensus_search(&r, &rat(1, 6), 5, &opts).unwrap(),
        Some(Word::empty())
    );
    assert_eq!(
        bounded_consensus_search(&r, &rat(1, 4), 8, &opts).unwrap(),
        None
    );
    assert_eq!(
        bounded_consensus_search(&a, &int(1), 6, &opts).unwrap(),
        None
    );
}

#[test]
fn cutpoint_examples() {
    let (r, a, _, _) = fig1();
    let opts = SearchOptions::default();
    let bin = Alphabet::binary();
    let sigma = Dfa::sigma_star(bin.clone());
    let c = rat(1, 6);
    assert_eq!(
        bounded_cutpoint_intersection(&r, &c, &sigma, 5, &opts).unwrap(),
        bounded_consensus_search(&r, &c, 5, &opts).unwrap()
    );
    // ≥ versus >: f(ε) = 1/5 exactly
    assert_eq!(
        bounded_cutpoint_intersection(&r, &rat(1, 5), &sigma, 3, &opts).unwrap(),
        Some(Word::empty())
    );
    assert_eq!(
        bounded_consensus_search(&r, &rat(1, 5), 3, &opts).unwrap(),
        None
    );
    assert_eq!(
        bounded_cutpoint_intersection(&a, &int(0), &Dfa::empty_language(bin.clone()), 6, &opts)
            .unwrap(),
        None
    );
    let four = Dfa::length_exactly(bin, 4);
    let target = a.weight(&word("1111")).unwrap().into_exact().unwrap();
    assert_eq!(target, rat(256, 12500));
    // every length-4 word satisfying both clauses reaches the same value;
    // "0010" is the shortlex-first of them
    let hit = bounded_cutpoint_intersection(&a, &target, &four, 6, &opts)
        .unwrap()
        .unwrap();
    assert_eq!(hit, word("0010"));
    assert_eq!(a.weight(&hit).unwrap(), Weight::Exact(target.clone()));
    assert!(a.weight(&word("1111")).unwrap().cmp_rational(&target) == Some(Ordering::Equal));
}

#[test]
fn sat_examples() {
    let p = ReductionParams::default();
    assert!(sat_via_distance(&CnfFormula::running_example(), &p).unwrap());
    assert!(!sat_via_distance(&CnfFormula::all_sign_patterns(), &p).unwrap());
    let single = CnfFormula::new(
        3,
        vec![[
            crate::reduction::Literal::neg(1),
            crate::reduction::Literal::pos(2),
            crate::reduction::Literal::neg(3),
        ]],
    )
    .unwrap();
    assert!(sat_via_distance(&single, &p).unwrap());
}

#[test]
fn sat_agrees_with_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..30 {
        let n = rng.gen_range(3..=6);
        let k = rng.gen_range(1..=12);
        let f = CnfFormula::random(&mut rng, n, k);
        for p in [ReductionParams::default(), ReductionParams::exact_family(2)] {
            assert_eq!(
                sat_via_distance(&f, &p).unwrap(),
                f.brute_force_satisfiable(),
                "{}",
                f.to_dimacs()
            );
        }
    }
}
