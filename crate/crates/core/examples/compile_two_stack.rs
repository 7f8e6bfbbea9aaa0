//! Compiles a two-stack machine into a rational ReLU RNN and reads the
//! machine configuration back out of the hidden state at each step boundary.
use rnnfsm::compiler::machine::library;
use rnnfsm::compiler::{compile_two_stack, simulate};

fn main() -> rnnfsm::Result<()> {
    let m = library::transfer();
    let input = [true, false, true];
    let c = compile_two_stack(&m, &input)?;
    println!(
        "states {:?}, hidden dim {}, {} RNN steps per machine step",
        c.state_names,
        c.hidden_dim(),
        c.step_dilation
    );

    let trace = simulate(&c, 6)?;
    let direct = m.trace(&input, 6);
    for (t, h) in trace.iter().zip(c.boundary_states(6)?) {
        let cfg = c.decode(&h)?;
        assert_eq!(cfg, direct[t.boundary]);
        println!(
            "boundary {}: {cfg}  stacks ({}, {})  halted {}",
            t.boundary, t.stacks.0, t.stacks.1, t.halting
        );
    }
    Ok(())
}
