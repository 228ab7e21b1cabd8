fn main() {
    std::process::exit(dwall_cli::run(std::env::args_os()));
}
