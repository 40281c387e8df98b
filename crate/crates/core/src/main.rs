fn main() {
    std::process::exit(mpolylog::cli::run());
}
