fn main() {
    std::process::exit(frslab::cli::run(std::env::args_os()));
}
