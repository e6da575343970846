fn main() {
    std::process::exit(pinpat_cli::run());
}
