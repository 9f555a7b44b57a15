fn main() {
    std::process::exit(systole_lab::cli::run(std::env::args_os()));
}
