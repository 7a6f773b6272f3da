fn main() {
    std::process::exit(gpcollapse::cli::run(std::env::args_os()));
}
