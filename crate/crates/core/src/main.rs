fn main() {
    std::process::exit(swbounds::cli::main_with_args(std::env::args_os()));
}
