fn main() {
    std::process::exit(subcover::cli::main_with_args(std::env::args_os()));
}
