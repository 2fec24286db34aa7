fn main() {
    std::process::exit(nlcf_cli::run_cli(std::env::args_os()));
}
