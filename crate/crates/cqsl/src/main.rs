fn main() {
    std::process::exit(cqsl::cli::run(std::env::args_os()));
}
