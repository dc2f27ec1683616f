fn main() {
    std::process::exit(qds3_cli::main_with_args(std::env::args_os()));
}
