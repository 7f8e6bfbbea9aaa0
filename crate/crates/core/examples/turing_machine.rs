//! Converts a Turing machine to a two-stack machine, compiles it, and checks
//! the tape recovered from the network against a direct run.
use rnnfsm::compiler::turing::library;
use rnnfsm::compiler::{compile_two_stack, tm_to_two_stack};

fn main() -> rnnfsm::Result<()> {
    let tm = library::binary_increment();
    for text in ["0", "1011", "111"] {
        let input = tm.parse_input(text)?;
        let direct = tm.run(&input, 1_000);
        let conv = tm_to_two_stack(&tm, &input)?;
        let run = conv.machine.run(&conv.initial_stack, 10_000);
        let compiled = compile_two_stack(&conv.machine, &conv.initial_stack)?;
        let boundaries = compiled.boundary_states(run.steps)?;
        let last = compiled.decode(boundaries.last().expect("at least one boundary"))?;
        let tape = conv.decode_tape(&last)?;
        println!(
            "{text:>5} + 1 = {:<6} ({} TM steps, {} two-stack steps, {} machine states, network {} units)",
            tm.render(&tape),
            direct.steps,
            run.steps,
            conv.machine.num_states(),
            compiled.hidden_dim()
        );
        assert_eq!(tape, direct.tape);
    }
    Ok(())
}
