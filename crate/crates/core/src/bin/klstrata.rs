fn main() {
    std::process::exit(klstrata::runner::main_with_args(std::env::args_os()));
}
