fn main() {
    std::process::exit(grsdual::cli::run(std::env::args_os()));
}
