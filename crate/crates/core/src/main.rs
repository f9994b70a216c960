fn main() {
    std::process::exit(addrhash::cli::main_with_std_streams());
}
