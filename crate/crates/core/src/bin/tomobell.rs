fn main() {
    std::process::exit(tomobell::cli::run(std::env::args_os()));
}
