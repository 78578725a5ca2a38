fn main() {
    std::process::exit(ranwatt::cli::main());
}
