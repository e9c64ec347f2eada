fn main() {
    std::process::exit(wavestab::cli::dispatch(std::env::args_os()));
}
