fn main() {
    std::process::exit(greedyfs::cli::run());
}
