fn main() {
    std::process::exit(ncphase::cli::main_with_args(std::env::args_os()));
}
