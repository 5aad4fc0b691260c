fn main() {
    std::process::exit(opdecay::cli::run());
}
