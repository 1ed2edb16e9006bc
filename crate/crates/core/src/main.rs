fn main() {
    std::process::exit(ptembed::cli::run());
}
