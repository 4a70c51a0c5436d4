fn main() {
    std::process::exit(regret_forge::bench::cli::run_cli(std::env::args_os()));
}
