fn main() {
    std::process::exit(fspeo::cli::run(std::env::args_os()));
}
