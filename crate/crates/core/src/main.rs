fn main() {
    std::process::exit(hypstab::cli::main());
}
