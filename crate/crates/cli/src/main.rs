fn main() {
    std::process::exit(ghz_tomo_cli::run(std::env::args_os()));
}
