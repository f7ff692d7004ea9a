fn main() {
    std::process::exit(revmap::cli::run());
}
