fn main() {
    std::process::exit(catconv::cli::main_with_args(std::env::args_os()));
}
