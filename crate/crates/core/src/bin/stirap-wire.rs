fn main() {
    std::process::exit(stirap_wire::cli::main());
}
