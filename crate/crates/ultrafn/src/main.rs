fn main() {
    std::process::exit(ultrafn::cli::run());
}
