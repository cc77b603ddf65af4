fn main() {
    std::process::exit(presstrack::cli::run_cli());
}
