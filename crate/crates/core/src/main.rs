fn main() {
    std::process::exit(hrlz::cli::run(std::env::args_os()));
}
