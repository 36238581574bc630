fn main() {
    std::process::exit(markov_tracking_cli::main_with_args(std::env::args_os()));
}
