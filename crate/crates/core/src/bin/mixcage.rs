fn main() {
    std::process::exit(mixcage::cli::run(std::env::args_os()));
}
