fn main() {
    std::process::exit(splitcount_cli::main_with_args(std::env::args_os()));
}
