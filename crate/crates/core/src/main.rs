fn main() {
    std::process::exit(wildmcg::cli::run(std::env::args_os()));
}
