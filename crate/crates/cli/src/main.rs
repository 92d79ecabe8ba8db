fn main() {
    std::process::exit(cca_transport_cli::run());
}
