fn main() {
    std::process::exit(decohere::cli::main());
}
