fn main() {
    std::process::exit(kinsv_cli::cli_main(std::env::args_os()));
}
