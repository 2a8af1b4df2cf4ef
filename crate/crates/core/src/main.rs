fn main() {
    std::process::exit(plancon::cli::run());
}
