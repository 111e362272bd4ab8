fn main() {
    std::process::exit(triwell_cli::run(std::env::args_os()));
}
