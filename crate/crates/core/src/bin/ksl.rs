fn main() {
    std::process::exit(kahler_sobolev::cli::run(std::env::args_os()));
}
