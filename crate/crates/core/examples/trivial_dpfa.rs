//! The one-state DPFA over {a} with f(a^n) = 1/2^(n+1), and its tail mass.
use rnnfsm::automata::build_trivial_unary_dpfa;
use rnnfsm::{cumulative_mass, Alphabet, WeightedLanguage};

fn main() -> rnnfsm::Result<()> {
    let a = build_trivial_unary_dpfa();
    let sigma = Alphabet::unary();
    for n in 0..6 {
        let w = sigma.parse_word(&"a".repeat(n))?;
        println!("f({:<6}) = {}", sigma.render(&w), a.weight(&w)?);
    }
    println!(
        "mass of words up to length 10: {}",
        cumulative_mass(&a, 10)?
    );
    println!("is a PFA: {}", a.validate_pfa().is_pfa);
    Ok(())
}
