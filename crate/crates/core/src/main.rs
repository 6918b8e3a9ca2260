fn main() {
    std::process::exit(ffframes_core::cli::run_cli(std::env::args_os()));
}
