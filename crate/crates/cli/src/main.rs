fn main() {
    std::process::exit(metric_pairs_cli::run(std::env::args_os()));
}
