fn main() {
    std::process::exit(causal_frames_cli::run(std::env::args()));
}
