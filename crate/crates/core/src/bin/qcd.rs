fn main() {
    std::process::exit(qcd::cli::run_cli(std::env::args_os()));
}
