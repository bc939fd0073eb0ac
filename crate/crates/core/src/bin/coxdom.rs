fn main() {
    std::process::exit(coxdom::cli::main_with_args(std::env::args_os()));
}
