fn main() {
    std::process::exit(nongauss_cli::run(std::env::args_os()));
}
