//! Reduces a 3-CNF formula to a PFA and an RNN whose distance exceeds a
//! threshold exactly when the formula is satisfiable.
//!
//! `cargo run --example sat_reduction -- path/to/formula.cnf`
use num_rational::BigRational;
use rnnfsm::decision::{sat_via_distance_report, SearchOptions};
use rnnfsm::reduction::{build_reduction_pfa, parse_dimacs, CnfFormula, ReductionParams};
use rnnfsm::Alphabet;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let formula = match std::env::args().nth(1) {
        Some(path) => parse_dimacs(&std::fs::read_to_string(path)?)?,
        None => CnfFormula::running_example(),
    };
    println!("formula: {formula}");
    let p = ReductionParams::new(BigRational::new(1.into(), 10.into()))?;
    let pfa = build_reduction_pfa(&formula, &p);
    println!(
        "PFA: {} states, {} transitions",
        pfa.num_states(),
        pfa.num_transitions()
    );

    let report = sat_via_distance_report(&formula, &p, &SearchOptions::default())?;
    println!("distance  {}", report.distance);
    println!("threshold {}", report.threshold);
    println!("argmax    {}", Alphabet::binary().render(&report.argmax));
    println!(
        "satisfiable: {} (brute force: {})",
        report.satisfiable,
        formula.brute_force_satisfiable()
    );
    Ok(())
}
