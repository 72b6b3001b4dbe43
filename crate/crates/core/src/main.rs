fn main() {
    std::process::exit(tribider::cli::main_with_args(std::env::args_os()));
}
