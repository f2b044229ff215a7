fn main() {
    std::process::exit(ostro_core::cli::main_with_args(std::env::args_os()));
}
