//! Runs the built-in acceptance checks, either all of them or the ids given
//! on the command line: `cargo run --release --example verify_suite -- 1 7 10`.
use rnnfsm::decision::SearchOptions;
use rnnfsm::verify::{criterion_ids, run_criterion};

fn main() -> rnnfsm::Result<()> {
    let mut ids: Vec<u8> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    if ids.is_empty() {
        ids = criterion_ids().collect();
    }
    let opts = SearchOptions::default();
    let mut failed = 0;
    for id in ids {
        let r = run_criterion(id, &opts)?;
        failed += usize::from(!r.passed);
        println!("{r}");
    }
    std::process::exit(i32::from(failed > 0));
}
