//! Decision procedures: the terminating Tchebychev-threshold test,
//! finite-support distance, bounded equivalence, consensus and cut-point
//! searches, and SAT through the distance reduction.
//!
//! All enumeration is shortlex; witnesses are the shortlex-first word with
//! the required property regardless of the worker count.

mod search;

use crate::alphabet::Word;
use crate::automata::{Dfa, WeightedAutomaton};
use crate::error::{Error, Result};
use crate::language::{require_same_alphabet, Weight, WeightedLanguage};
use crate::rational::Rational;
use crate::reduction::{
    build_reduction_pfa, build_toy_rnn, reduction_threshold, CnfFormula, ReductionParams,
};
use crate::rnn::RnnLm;
use num_traits::{One, Signed};
use search::{compare_refined, distance_at, resolve, scan, Pair, ScanEnd, Single};
use std::cmp::Ordering;
use std::ops::ControlFlow;

/// Shared knobs: an optional cap on examined words and the size of the
/// thread pool (`None` uses the ambient rayon pool).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: Option<usize>,
    pub workers: Option<usize>,
}

impl SearchOptions {
    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = Some(budget);
        self
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        match self.workers {
            None => job(),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(e.to_string()))?
                .install(job),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DistanceOutcome {
    /// A word with `|f(w) − g(w)| > c`.
    Yes(Word),
    No,
    BudgetExhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceVerdict {
    pub outcome: DistanceOutcome,
    /// Mass of `f` over the examined words.
    pub mass_f: Weight,
    pub mass_g: Weight,
    pub words_examined: usize,
    /// Length of the last word examined.
    pub last_length: usize,
}

fn check_pair<F: WeightedLanguage, G: WeightedLanguage>(f: &F, g: &G) -> Result<()> {
    require_same_alphabet(f.alphabet(), g.alphabet())
}

struct Tally {
    count: usize,
    mass_f: Weight,
    mass_g: Weight,
    witness: Option<Word>,
}

/// Decides whether some word has `|f(w) − g(w)| > c`.
///
/// Words are examined in shortlex order while the masses of both languages
/// accumulate. Once both reach `1 − c`, every remaining word has weight at
/// most `c` under each language, so no witness can follow and the answer is
/// `No`. Both languages must be declared consistent; a mass provably above
/// 1 aborts with [`Error::InconsistencyDetected`].
pub fn decide_tchebychev_gt<F, G>(
    f: &F,
    g: &G,
    c: &Rational,
    opts: &SearchOptions,
) -> Result<DistanceVerdict>
where
    F: WeightedLanguage,
    G: WeightedLanguage,
{
    check_pair(f, g)?;
    if !c.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "threshold {c} must be positive"
        )));
    }
    if !f.declared_consistent() {
        return Err(Error::NotDeclaredConsistent("f"));
    }
    if !g.declared_consistent() {
        return Err(Error::NotDeclaredConsistent("g"));
    }
    let floor = Rational::one() - c;
    opts.run(|| {
        let mut total = Tally {
            count: 0,
            mass_f: Weight::zero(),
            mass_g: Weight::zero(),
            witness: None,
        };
        let mut last_length = 0;
        let end = scan(
            &Pair(f, g),
            None,
            opts.budget,
            || Tally {
                count: 0,
                mass_f: Weight::zero(),
                mass_g: Weight::zero(),
                witness: None,
            },
            |t, ids, (fw, gw)| {
                t.count += 1;
                let w = Word::from_ids(ids.to_vec());
                let d = fw.sub(&gw).abs();
                t.mass_f = t.mass_f.add(&fw);
                t.mass_g = t.mass_g.add(&gw);
                let hit = resolve(
                    d,
                    |bits| distance_at(f, g, &w, bits),
                    |d| d.cmp_rational(c).map(|o| o == Ordering::Greater),
                    || format!("|f(w) - g(w)| > {c}"),
                )?;
                if hit {
                    t.witness = Some(w);
                    return Ok(ControlFlow::Break(()));
                }
                Ok(ControlFlow::Continue(()))
            },
            |t, len| {
                if t.count > 0 {
                    last_length = len;
                }
                total.count += t.count;
                total.mass_f = total.mass_f.add(&t.mass_f);
                total.mass_g = total.mass_g.add(&t.mass_g);
                if let Some(w) = t.witness {
                    return Ok(ControlFlow::Break(DistanceOutcome::Yes(w)));
                }
                for m in [&total.mass_f, &total.mass_g] {
                    if m.lower() > &Rational::one() {
                        return Err(Error::InconsistencyDetected(m.lower().clone()));
                    }
                }
                if total.mass_f.lower() >= &floor && total.mass_g.lower() >= &floor {
                    return Ok(ControlFlow::Break(DistanceOutcome::No));
                }
                Ok(ControlFlow::Continue(()))
            },
        )?;
        let outcome = match end {
            ScanEnd::Stopped(o) => o,
            ScanEnd::Budget | ScanEnd::Complete => DistanceOutcome::BudgetExhausted,
        };
        Ok(DistanceVerdict {
            outcome,
            mass_f: total.mass_f,
            mass_g: total.mass_g,
            words_examined: total.count,
            last_length,
        })
    })
}

/// `max_{|w| ≤ N} |f(w) − g(w)|` with the shortlex-first maximizer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteDistanceReport {
    pub distance: Weight,
    pub argmax: Word,
    pub support_bound: usize,
}

pub fn finite_support_distance<F, G>(
    f: &F,
    g: &G,
    n: usize,
    opts: &SearchOptions,
) -> Result<FiniteDistanceReport>
where
    F: WeightedLanguage,
    G: WeightedLanguage,
{
    check_pair(f, g)?;
    let better = |a: &(Weight, Word), b: &(Weight, Word)| -> Result<bool> {
        let o = compare_refined(
            &b.0,
            &a.0,
            |bits| distance_at(f, g, &b.1, bits),
            |bits| distance_at(f, g, &a.1, bits),
            || "ordering of two distances".to_string(),
        )?;
        Ok(o == Ordering::Greater)
    };
    opts.run(|| {
        let mut best: Option<(Weight, Word)> = None;
        scan(
            &Pair(f, g),
            Some(n),
            None,
            || None::<(Weight, Word)>,
            |acc, ids, (fw, gw)| {
                let cand = (fw.sub(&gw).abs(), Word::from_ids(ids.to_vec()));
                match acc {
                    Some(b) if !better(b, &cand)? => {}
                    _ => *acc = Some(cand),
                }
                Ok(ControlFlow::Continue(()))
            },
            |acc, _| {
                if let Some(cand) = acc {
                    match &best {
                        Some(b) if !better(b, &cand)? => {}
                        _ => best = Some(cand),
                    }
                }
                Ok(ControlFlow::<()>::Continue(()))
            },
        )?;
        let (distance, argmax) = best.expect("the empty word is always examined");
        Ok(FiniteDistanceReport {
            distance,
            argmax,
            support_bound: n,
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum EqOutcome {
    Equivalent,
    Counterexample { word: Word, f: Weight, g: Weight },
}

/// Compares `f` and `g` on every word of length at most `m`.
pub fn eq_finite<F, G>(f: &F, g: &G, m: usize, opts: &SearchOptions) -> Result<EqOutcome>
where
    F: WeightedLanguage,
    G: WeightedLanguage,
{
    check_pair(f, g)?;
    opts.run(|| {
        let end = scan(
            &Pair(f, g),
            Some(m),
            None,
            || None,
            |acc, ids, (fw, gw)| {
                let w = Word::from_ids(ids.to_vec());
                let o = compare_refined(
                    &fw,
                    &gw,
                    |bits| f.weight_at(&w, bits),
                    |bits| g.weight_at(&w, bits),
                    || "equality of two weights".to_string(),
                )?;
                if o != Ordering::Equal {
                    *acc = Some(EqOutcome::Counterexample {
                        word: w,
                        f: fw,
                        g: gw,
                    });
                    return Ok(ControlFlow::Break(()));
                }
                Ok(ControlFlow::Continue(()))
            },
            |acc, _| Ok(acc.map_or(ControlFlow::Continue(()), ControlFlow::Break)),
        )?;
        Ok(match end {
            ScanEnd::Stopped(o) => o,
            _ => EqOutcome::Equivalent,
        })
    })
}

fn first_word<F: WeightedLanguage>(
    f: &F,
    max_len: usize,
    opts: &SearchOptions,
    accept: impl Fn(&Word, &Weight) -> Result<bool> + Sync,
) -> Result<Option<Word>> {
    opts.run(|| {
        let end = scan(
            &Single(f),
            Some(max_len),
            None,
            || None,
            |acc, ids, fw| {
                let w = Word::from_ids(ids.to_vec());
                if accept(&w, &fw)? {
                    *acc = Some(w);
                    return Ok(ControlFlow::Break(()));
                }
                Ok(ControlFlow::Continue(()))
            },
            |acc, _| Ok(acc.map_or(ControlFlow::Continue(()), ControlFlow::Break)),
        )?;
        Ok(match end {
            ScanEnd::Stopped(w) => Some(w),
            _ => None,
        })
    })
}

fn exceeds<F: WeightedLanguage>(
    f: &F,
    w: &Word,
    fw: &Weight,
    c: &Rational,
    allow_equal: bool,
) -> Result<bool> {
    resolve(
        fw.clone(),
        |bits| f.weight_at(w, bits),
        |x| {
            x.cmp_rational(c)
                .map(|o| o == Ordering::Greater || (allow_equal && o == Ordering::Equal))
        },
        || format!("f(w) against {c}"),
    )
}

/// First word of length at most `max_len` with `f(w) > c`, if any.
pub fn bounded_consensus_search<F: WeightedLanguage>(
    f: &F,
    c: &Rational,
    max_len: usize,
    opts: &SearchOptions,
) -> Result<Option<Word>> {
    first_word(f, max_len, opts, |w, fw| exceeds(f, w, fw, c, false))
}

/// First word of length at most `max_len` accepted by `dfa` with `f(w) ≥ c`.
pub fn bounded_cutpoint_intersection<F: WeightedLanguage>(
    f: &F,
    c: &Rational,
    dfa: &Dfa,
    max_len: usize,
    opts: &SearchOptions,
) -> Result<Option<Word>> {
    if dfa.alphabet() != f.alphabet() {
        return Err(Error::AlphabetMismatch(
            "DFA and language alphabets differ".into(),
        ));
    }
    first_word(f, max_len, opts, |w, fw| {
        Ok(dfa.accepts(w)? && exceeds(f, w, fw, c, true)?)
    })
}

/// Everything computed by [`sat_via_distance_report`].
#[derive(Clone, Debug)]
pub struct SatReport {
    pub satisfiable: bool,
    pub distance: Rational,
    pub threshold: Rational,
    pub argmax: Word,
    pub support_bound: usize,
}

/// Decides satisfiability of `formula` by comparing the finite-support
/// distance between the toy RNN and the reduction PFA (support `n + 1`)
/// with the reduction threshold.
pub fn sat_via_distance(formula: &CnfFormula, p: &ReductionParams) -> Result<bool> {
    Ok(sat_via_distance_report(formula, p, &SearchOptions::default())?.satisfiable)
}

pub fn sat_via_distance_report(
    formula: &CnfFormula,
    p: &ReductionParams,
    opts: &SearchOptions,
) -> Result<SatReport> {
    let pfa: WeightedAutomaton = build_reduction_pfa(formula, p);
    let rnn: RnnLm = build_toy_rnn(p);
    let threshold = reduction_threshold(formula, p)?;
    let n = formula.num_vars() + 1;
    let report = finite_support_distance(&rnn, &pfa, n, opts)?;
    let distance = report.distance.into_exact().ok_or_else(|| {
        Error::ExactnessUnavailable("reduction distance".into(), rnn.precision_bits())
    })?;
    Ok(SatReport {
        satisfiable: distance > threshold,
        distance,
        threshold,
        argmax: report.argmax,
        support_bound: n,
    })
}

impl DistanceVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self.outcome, DistanceOutcome::Yes(_))
    }
}

#[cfg(test)]
mod tests;
