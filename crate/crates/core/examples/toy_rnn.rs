//! The one-neuron RNN that ignores its input: every binary word of length n
//! has weight 2 (1/2 - eps)^n eps, computed exactly.
use num_rational::BigRational;
use rnnfsm::reduction::{build_toy_rnn, ReductionParams};
use rnnfsm::{cumulative_mass, Alphabet, WeightedLanguage};

fn main() -> rnnfsm::Result<()> {
    let eps = BigRational::new(1.into(), 10.into());
    let r = build_toy_rnn(&ReductionParams::new(eps)?);
    println!(
        "hidden dim {}, activation {}",
        r.hidden_dim(),
        r.activation().name()
    );
    let sigma = Alphabet::binary();
    for text in ["", "0", "01", "110", "0101"] {
        println!("R({text:>4}) = {}", r.weight(&sigma.parse_word(text)?)?);
    }
    for len in [2, 5, 10] {
        println!("mass up to length {len:>2}: {}", cumulative_mass(&r, len)?);
    }
    Ok(())
}
