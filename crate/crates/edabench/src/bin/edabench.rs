fn main() {
    std::process::exit(edabench::harness::cli(std::env::args()));
}
