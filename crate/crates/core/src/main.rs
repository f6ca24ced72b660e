fn main() {
    std::process::exit(macrospin::cli::run(std::env::args_os()));
}
