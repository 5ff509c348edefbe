fn main() {
    std::process::exit(affsig::cli::run(std::env::args_os()));
}
