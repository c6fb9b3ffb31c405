fn main() {
    std::process::exit(nlgap::cli::cli_main(std::env::args_os()));
}
