fn main() {
    std::process::exit(qid::cli::main_with(std::env::args_os()));
}
