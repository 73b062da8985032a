fn main() {
    std::process::exit(orbitwise::cli::main_with(std::env::args_os()));
}
