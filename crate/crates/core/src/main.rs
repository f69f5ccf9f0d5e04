fn main() {
    std::process::exit(qhumbert::cli::run(std::env::args_os()));
}
