fn main() {
    std::process::exit(aeconv::cli::run(std::env::args_os()));
}
