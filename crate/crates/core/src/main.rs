fn main() {
    std::process::exit(polyzeta::cli::main_entry());
}
