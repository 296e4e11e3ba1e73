fn main() {
    std::process::exit(cartesian_codes::cli::main_with(std::env::args_os()));
}
