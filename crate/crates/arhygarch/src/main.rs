fn main() {
    std::process::exit(arhygarch::cli::main_with(std::env::args_os()));
}
