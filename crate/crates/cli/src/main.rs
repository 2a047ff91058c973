fn main() {
    std::process::exit(semistable_cli::run(std::env::args_os()));
}
