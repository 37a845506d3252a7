fn main() {
    std::process::exit(freight_tco::cli::run(std::env::args_os()));
}
