fn main() {
    std::process::exit(mars_ising::cli::run(std::env::args_os()));
}
