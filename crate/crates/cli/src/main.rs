fn main() {
    std::process::exit(wordmap_cli::run_from_env());
}
