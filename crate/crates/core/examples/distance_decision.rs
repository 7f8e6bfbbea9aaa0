//! Decides whether two consistent languages differ by more than c on some
//! word, and shows both outcomes on the reduction pair.
use num_rational::BigRational;
use rnnfsm::decision::{decide_tchebychev_gt, DistanceOutcome, SearchOptions};
use rnnfsm::reduction::{build_reduction_pfa, build_toy_rnn, CnfFormula, ReductionParams};
use rnnfsm::Alphabet;

fn main() -> rnnfsm::Result<()> {
    let p = ReductionParams::new(BigRational::new(1.into(), 10.into()))?;
    let f = CnfFormula::running_example();
    let (rnn, pfa) = (build_toy_rnn(&p), build_reduction_pfa(&f, &p));
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let opts = SearchOptions::default().with_workers(workers);

    for (c, budget) in [((96, 12500), None), ((1, 5), None), ((1, 5), Some(10))] {
        let c = BigRational::new(c.0.into(), c.1.into());
        let opts = match budget {
            Some(b) => opts.with_budget(b),
            None => opts,
        };
        let v = decide_tchebychev_gt(&rnn, &pfa, &c, &opts)?;
        let outcome = match &v.outcome {
            DistanceOutcome::Yes(w) => format!("yes, witness {:?}", Alphabet::binary().render(w)),
            DistanceOutcome::No => "no".to_string(),
            DistanceOutcome::BudgetExhausted => "budget exhausted".to_string(),
        };
        println!(
            "c = {c:<10} {outcome:<22} words {:>4}, length {}, masses {} / {}",
            v.words_examined, v.last_length, v.mass_f, v.mass_g
        );
    }
    Ok(())
}
