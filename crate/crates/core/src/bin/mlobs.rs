fn main() {
    std::process::exit(ml_obstruction::cli::run(std::env::args_os()));
}
