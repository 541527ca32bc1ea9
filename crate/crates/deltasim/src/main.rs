fn main() {
    let code = deltasim::cli::main_with_args(std::env::args_os());
    std::process::exit(code);
}
