fn main() {
    std::process::exit(sperner_forge::cli::run(std::env::args_os()));
}
