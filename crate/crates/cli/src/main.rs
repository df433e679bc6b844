fn main() {
    std::process::exit(qista_cli::dispatch(std::env::args_os()));
}
