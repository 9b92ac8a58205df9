fn main() {
    std::process::exit(degdual_cli::main_with_args(std::env::args_os()));
}
