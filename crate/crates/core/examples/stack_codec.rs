//! The base-4 stack encoding: top bit b contributes (2b + 1)/4, the next
//! (2b + 1)/16, and so on. Unlike the plain binary-fraction encoding it is
//! injective.
use rnnfsm::compiler::{decode_stack, encode_stack, encode_stack_literal};

fn main() -> rnnfsm::Result<()> {
    let stacks: [&[bool]; 5] = [&[], &[false], &[true], &[true, false], &[false, true, true]];
    for s in stacks {
        let v = encode_stack(s);
        let bits: String = s.iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!(
            "{bits:>4} -> {v:<8} literal {:<5} decodes to {:?}",
            encode_stack_literal(s),
            decode_stack(&v)?
        );
    }
    Ok(())
}
