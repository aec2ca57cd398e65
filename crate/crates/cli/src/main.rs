fn main() {
    std::process::exit(kacroots_cli::main_with_args(std::env::args_os().collect()));
}
