fn main() {
    std::process::exit(miranda_layers::harness::cli_main(std::env::args_os()));
}
