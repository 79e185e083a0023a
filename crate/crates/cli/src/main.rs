fn main() {
    std::process::exit(andersen_cli::run(std::env::args_os()));
}
