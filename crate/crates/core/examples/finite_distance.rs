//! Exact maximum of |f(w) - g(w)| over words of bounded length.
use num_rational::BigRational;
use rnnfsm::decision::{finite_support_distance, SearchOptions};
use rnnfsm::reduction::{build_reduction_pfa, build_toy_rnn, CnfFormula, ReductionParams};
use rnnfsm::Alphabet;

fn main() -> rnnfsm::Result<()> {
    let p = ReductionParams::new(BigRational::new(1.into(), 10.into()))?;
    let f = CnfFormula::running_example();
    let (rnn, pfa) = (build_toy_rnn(&p), build_reduction_pfa(&f, &p));
    for n in 0..=6 {
        let r = finite_support_distance(&rnn, &pfa, n, &SearchOptions::default())?;
        println!(
            "N = {n}: {:<12} at {:?}",
            r.distance.to_string(),
            Alphabet::binary().render(&r.argmax)
        );
    }
    Ok(())
}
