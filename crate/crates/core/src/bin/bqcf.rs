fn main() {
    std::process::exit(bqcf::experiments::cli_main(std::env::args_os()));
}
