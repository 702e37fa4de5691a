fn main() {
    std::process::exit(monodromic::cli::run());
}
