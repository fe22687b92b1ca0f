fn main() {
    std::process::exit(dcr::cli::main_with_args(std::env::args_os()));
}
