fn main() {
    std::process::exit(metaplectic_ice::cli::main_with_args(std::env::args_os()));
}
