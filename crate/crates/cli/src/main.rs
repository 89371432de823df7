fn main() {
    std::process::exit(cdlst_cli::run(std::env::args_os()));
}
