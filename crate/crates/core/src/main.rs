fn main() {
    std::process::exit(runge_kit::cli::main_with_args(std::env::args_os()));
}
