fn main() {
    std::process::exit(hypersd::cli::run());
}
