use std::process::exit;

fn main() {
    exit(gaussian_romanov::cli::run());
}
