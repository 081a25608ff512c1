fn main() {
    std::process::exit(ldc3::cli::run(std::env::args_os()));
}
