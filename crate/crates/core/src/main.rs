fn main() {
    std::process::exit(pg_curvelab::cli::main_with_args(std::env::args_os()));
}
