fn main() {
    std::process::exit(fiqa_harness::cli::main_with_args(std::env::args_os()));
}
