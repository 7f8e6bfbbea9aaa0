//! Bounded searches for a word above a threshold, optionally restricted to
//! a regular language.
use num_rational::BigRational;
use rnnfsm::automata::Dfa;
use rnnfsm::decision::{bounded_consensus_search, bounded_cutpoint_intersection, SearchOptions};
use rnnfsm::reduction::{build_reduction_pfa, CnfFormula, ReductionParams};
use rnnfsm::{Alphabet, WeightedLanguage};

fn main() -> rnnfsm::Result<()> {
    let p = ReductionParams::new(BigRational::new(1.into(), 10.into()))?;
    let pfa = build_reduction_pfa(&CnfFormula::running_example(), &p);
    let sigma = Alphabet::binary();
    let opts = SearchOptions::default();
    let show = |w: Option<rnnfsm::Word>| -> rnnfsm::Result<String> {
        Ok(match w {
            Some(w) => format!("{:?} with weight {}", sigma.render(&w), pfa.weight(&w)?),
            None => "none".into(),
        })
    };

    for c in [(1, 10), (1, 5), (1, 2)] {
        let c = BigRational::new(c.0.into(), c.1.into());
        println!(
            "consensus  f(w) > {c:<5}: {}",
            show(bounded_consensus_search(&pfa, &c, 6, &opts)?)?
        );
    }
    let dfa = Dfa::length_exactly(sigma.clone(), 4);
    for c in [(1, 100), (1, 50)] {
        let c = BigRational::new(c.0.into(), c.1.into());
        println!(
            "|w| = 4 and f(w) >= {c:<5}: {}",
            show(bounded_cutpoint_intersection(&pfa, &c, &dfa, 6, &opts)?)?
        );
    }
    Ok(())
}
