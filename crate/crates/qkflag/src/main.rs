fn main() {
    std::process::exit(qkflag::cli::run(std::env::args_os()));
}
