fn main() {
    std::process::exit(sparc::cli::run(std::env::args_os()));
}
