fn main() {
    std::process::exit(harmonic_curvature::cli::main_with_args(std::env::args_os()));
}
