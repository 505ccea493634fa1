fn main() {
    std::process::exit(cslwalk::cli::main_from_env());
}
