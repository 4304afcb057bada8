fn main() {
    std::process::exit(edplab::cli::run(std::env::args_os().collect()));
}
