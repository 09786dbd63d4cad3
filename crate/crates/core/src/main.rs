fn main() {
    std::process::exit(ihara_lab::cli::main_entry());
}
