fn main() {
    let code = nbvslab::cli::run(std::env::args_os());
    std::process::exit(code);
}
