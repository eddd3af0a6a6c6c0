fn main() {
    std::process::exit(snumbers::cli::run(std::env::args_os()));
}
