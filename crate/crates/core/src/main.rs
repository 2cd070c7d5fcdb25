fn main() {
    std::process::exit(genbeta::cli::run(std::env::args_os()));
}
