fn main() {
    std::process::exit(qhe_cli::main_with_args(std::env::args_os()));
}
