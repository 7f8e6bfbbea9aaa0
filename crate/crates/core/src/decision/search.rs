//! Shortlex enumeration engine shared by the decision procedures.
//!
//! Each length is split into subtrees below a fixed depth; subtrees are
//! walked depth first in parallel batches and their summaries are handed to
//! a sequential consumer in lexicographic order. Batch shape does not depend
//! on the thread count, so results are identical for any number of workers.

use crate::alphabet::Word;
use crate::error::{Error, Result};
use crate::language::{Weight, WeightedLanguage, MAX_PRECISION_BITS};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::ops::ControlFlow;

const SUBTREES_PER_LEVEL: usize = 256;
const BATCH: usize = 64;

/// Incremental evaluation of one or two languages along a word.
pub(crate) trait Probe: Sync {
    type State: Clone + Send + Sync;
    type Out: Send;

    fn alphabet_size(&self) -> usize;
    fn root(&self) -> Result<Self::State>;
    fn extend(&self, s: &Self::State, symbol: usize) -> Result<Self::State>;
    fn finish(&self, s: &Self::State) -> Result<Self::Out>;
}

pub(crate) struct Single<'a, F>(pub &'a F);

impl<F: WeightedLanguage> Probe for Single<'_, F> {
    type State = F::Prefix;
    type Out = Weight;

    fn alphabet_size(&self) -> usize {
        self.0.alphabet().len()
    }
    fn root(&self) -> Result<Self::State> {
        self.0.start(self.0.precision_bits())
    }
    fn extend(&self, s: &Self::State, symbol: usize) -> Result<Self::State> {
        self.0.extend(s, symbol, self.0.precision_bits())
    }
    fn finish(&self, s: &Self::State) -> Result<Weight> {
        self.0.finish(s)
    }
}

pub(crate) struct Pair<'a, F, G>(pub &'a F, pub &'a G);

impl<F: WeightedLanguage, G: WeightedLanguage> Probe for Pair<'_, F, G> {
    type State = (F::Prefix, G::Prefix);
    type Out = (Weight, Weight);

    fn alphabet_size(&self) -> usize {
        self.0.alphabet().len()
    }
    fn root(&self) -> Result<Self::State> {
        Ok((
            self.0.start(self.0.precision_bits())?,
            self.1.start(self.1.precision_bits())?,
        ))
    }
    fn extend(&self, s: &Self::State, symbol: usize) -> Result<Self::State> {
        Ok((
            self.0.extend(&s.0, symbol, self.0.precision_bits())?,
            self.1.extend(&s.1, symbol, self.1.precision_bits())?,
        ))
    }
    fn finish(&self, s: &Self::State) -> Result<Self::Out> {
        Ok((self.0.finish(&s.0)?, self.1.finish(&s.1)?))
    }
}

/// How a scan ended.
pub(crate) enum ScanEnd<R> {
    Stopped(R),
    /// Every word up to the length bound was visited.
    Complete,
    /// The word budget ran out first.
    Budget,
}

/// Visits words of length `0..=max_len` in shortlex order, at most `budget`
/// of them. `step` folds a word into its subtree's accumulator (breaking
/// ends that subtree early); `consume` receives accumulators in order
/// together with the length being scanned.
pub(crate) fn scan<P, S, R>(
    probe: &P,
    max_len: Option<usize>,
    budget: Option<usize>,
    init: impl Fn() -> S + Sync,
    step: impl Fn(&mut S, &[usize], P::Out) -> Result<ControlFlow<()>> + Sync,
    mut consume: impl FnMut(S, usize) -> Result<ControlFlow<R>>,
) -> Result<ScanEnd<R>>
where
    P: Probe,
    S: Send,
{
    let k = probe.alphabet_size();
    let root = probe.root()?;
    let mut split = 0usize;
    while k > 1 && k.pow(split as u32) < SUBTREES_PER_LEVEL {
        split += 1;
    }
    let mut seen = 0usize;
    let mut len = 0usize;
    loop {
        if max_len.is_some_and(|m| len > m) {
            return Ok(ScanEnd::Complete);
        }
        let depth = split.min(len);
        let roots = expand(probe, &root, depth)?;
        let subtree = k.pow((len - depth) as u32);
        for (b, batch) in roots.chunks(BATCH).enumerate() {
            let first = seen + b * BATCH * subtree;
            let results: Vec<Result<(S, bool)>> = batch
                .par_iter()
                .enumerate()
                .map(|(i, (word, state))| {
                    let start = first + i * subtree;
                    let allowed = budget.map_or(usize::MAX, |bud| bud.saturating_sub(start));
                    let mut acc = init();
                    let mut left = allowed;
                    let mut buf = word.clone();
                    let _ = walk(probe, state, &mut buf, len, &mut acc, &step, &mut left)?;
                    Ok((acc, allowed < subtree && left == 0))
                })
                .collect();
            for r in results {
                let (acc, truncated) = r?;
                if let ControlFlow::Break(v) = consume(acc, len)? {
                    return Ok(ScanEnd::Stopped(v));
                }
                if truncated {
                    return Ok(ScanEnd::Budget);
                }
            }
        }
        seen += roots.len() * subtree;
        if budget.is_some_and(|bud| seen >= bud) {
            return Ok(ScanEnd::Budget);
        }
        len += 1;
        if k == 0 {
            return Ok(ScanEnd::Complete);
        }
    }
}

fn expand<P: Probe>(
    probe: &P,
    root: &P::State,
    depth: usize,
) -> Result<Vec<(Vec<usize>, P::State)>> {
    let mut level = vec![(Vec::new(), root.clone())];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(level.len() * probe.alphabet_size());
        for (w, s) in &level {
            for a in 0..probe.alphabet_size() {
                let mut w2 = w.clone();
                w2.push(a);
                next.push((w2, probe.extend(s, a)?));
            }
        }
        level = next;
    }
    Ok(level)
}

fn walk<P: Probe, S>(
    probe: &P,
    state: &P::State,
    word: &mut Vec<usize>,
    len: usize,
    acc: &mut S,
    step: &(impl Fn(&mut S, &[usize], P::Out) -> Result<ControlFlow<()>> + Sync),
    left: &mut usize,
) -> Result<ControlFlow<()>> {
    if *left == 0 {
        return Ok(ControlFlow::Break(()));
    }
    if word.len() == len {
        *left -= 1;
        return step(acc, word, probe.finish(state)?);
    }
    for a in 0..probe.alphabet_size() {
        let next = probe.extend(state, a)?;
        word.push(a);
        let flow = walk(probe, &next, word, len, acc, step, left)?;
        word.pop();
        if flow.is_break() {
            return Ok(flow);
        }
    }
    Ok(ControlFlow::Continue(()))
}

/// Decides `pred` on a weight, re-evaluating at doubled precision while the
/// enclosure is inconclusive.
pub(crate) fn resolve<T>(
    initial: Weight,
    mut recompute: impl FnMut(u32) -> Result<Weight>,
    pred: impl Fn(&Weight) -> Option<T>,
    what: impl Fn() -> String,
) -> Result<T> {
    if let Some(t) = pred(&initial) {
        return Ok(t);
    }
    let mut bits = precision(&initial).clamp(16, MAX_PRECISION_BITS);
    while bits < MAX_PRECISION_BITS {
        bits = (bits * 2).min(MAX_PRECISION_BITS);
        if let Some(t) = pred(&recompute(bits)?) {
            return Ok(t);
        }
    }
    Err(Error::ExactnessUnavailable(what(), MAX_PRECISION_BITS))
}

/// `|f(w) − g(w)|` at a given precision.
pub(crate) fn distance_at<F: WeightedLanguage, G: WeightedLanguage>(
    f: &F,
    g: &G,
    w: &Word,
    bits: u32,
) -> Result<Weight> {
    Ok(f.weight_at(w, bits)?.sub(&g.weight_at(w, bits)?).abs())
}

/// Orders two weights, refining both through `recompute_*` when needed.
pub(crate) fn compare_refined(
    a: &Weight,
    b: &Weight,
    recompute_a: impl FnMut(u32) -> Result<Weight>,
    recompute_b: impl FnMut(u32) -> Result<Weight>,
    what: impl Fn() -> String,
) -> Result<Ordering> {
    if let Some(o) = a.cmp_weight(b) {
        return Ok(o);
    }
    let (mut ra, mut rb) = (recompute_a, recompute_b);
    let mut bits = precision(a).min(precision(b)).clamp(16, MAX_PRECISION_BITS);
    while bits < MAX_PRECISION_BITS {
        bits = (bits * 2).min(MAX_PRECISION_BITS);
        if let Some(o) = ra(bits)?.cmp_weight(&rb(bits)?) {
            return Ok(o);
        }
    }
    Err(Error::ExactnessUnavailable(what(), MAX_PRECISION_BITS))
}

fn precision(w: &Weight) -> u32 {
    match w {
        Weight::Approx(iv) => iv.precision_bits(),
        Weight::Exact(_) => MAX_PRECISION_BITS,
    }
}
