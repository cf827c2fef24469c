fn main() {
    std::process::exit(spence_abel::cli::run());
}
