fn main() {
    std::process::exit(percgame::cli::main_with_args(std::env::args_os()));
}
