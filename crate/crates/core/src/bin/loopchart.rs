fn main() {
    std::process::exit(loopchart::cli::run_cli(std::env::args_os()));
}
