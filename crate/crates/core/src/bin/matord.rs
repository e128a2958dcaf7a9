fn main() {
    std::process::exit(matrix_order::cli::run(std::env::args_os()));
}
