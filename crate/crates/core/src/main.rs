fn main() {
    std::process::exit(coherence_atlas::cli::run(std::env::args_os()));
}
