fn main() {
    std::process::exit(casimir_core::cli::execute(std::env::args_os()));
}
