fn main() {
    std::process::exit(openxyz::cli::main_with(std::env::args_os()));
}
