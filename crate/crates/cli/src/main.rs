fn main() {
    std::process::exit(freewill_cli::run(std::env::args_os()));
}
