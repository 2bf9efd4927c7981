fn main() {
    std::process::exit(pgq::cli::run(std::env::args_os()));
}
