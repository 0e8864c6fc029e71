fn main() {
    std::process::exit(restricted_percolation::cli::run(std::env::args_os()));
}
