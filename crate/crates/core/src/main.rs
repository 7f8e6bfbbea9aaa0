fn main() {
    std::process::exit(rnnfsm::cli::main_with_args(std::env::args_os()));
}
