fn main() {
    std::process::exit(packclass_cli::run(std::env::args_os()));
}
