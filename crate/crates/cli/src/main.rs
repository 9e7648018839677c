fn main() {
    std::process::exit(gridtri_cli::main_with(std::env::args_os()));
}
