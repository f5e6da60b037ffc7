fn main() {
    std::process::exit(partial_covers::cli::run(std::env::args_os()));
}
