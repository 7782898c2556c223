fn main() {
    std::process::exit(rgsym::runner::run_cli(std::env::args_os()));
}
