//! Compiles two-stack machines with the halting output layer. A machine that
//! never halts yields exactly the trivial language 1/2^(n+1); one that halts
//! after T steps first differs at length 4T - 1.
use rnnfsm::automata::build_trivial_unary_dpfa;
use rnnfsm::compiler::machine::library;
use rnnfsm::compiler::{attach_output_gadget, compile_two_stack};
use rnnfsm::decision::{eq_finite, EqOutcome, SearchOptions};
use rnnfsm::Alphabet;

fn main() -> rnnfsm::Result<()> {
    let trivial = build_trivial_unary_dpfa();
    let opts = SearchOptions::default();
    let machines = [
        ("looper", library::looper()),
        ("halts after 2", library::halts_after(2)),
        ("halts after 3", library::halts_after(3)),
    ];
    for (name, m) in machines {
        let g = attach_output_gadget(&compile_two_stack(&m, &[])?)?;
        let verdict = match eq_finite(&trivial, &g.rnn, 14, &opts)? {
            EqOutcome::Equivalent => "equal on all words up to length 14".to_string(),
            EqOutcome::Counterexample { word, f, g } => {
                format!(
                    "differs on {} ({f} vs {g})",
                    Alphabet::unary().render(&word)
                )
            }
        };
        println!("{name:<14} hidden dim {:>3}: {verdict}", g.hidden_dim());
    }
    Ok(())
}
