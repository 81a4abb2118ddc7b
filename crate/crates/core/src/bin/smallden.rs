fn main() {
    std::process::exit(smallden::cli::run(std::env::args_os()));
}
