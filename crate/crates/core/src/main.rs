fn main() {
    std::process::exit(mirrorlab::cli::main_with_args(std::env::args_os()));
}
