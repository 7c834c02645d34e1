fn main() {
    std::process::exit(almost_normal::cli::main_with_args(std::env::args_os()));
}
