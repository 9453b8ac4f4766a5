fn main() {
    std::process::exit(theta_lab::cli::run(std::env::args_os()));
}
