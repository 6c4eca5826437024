fn main() {
    std::process::exit(addcomb::cli::run(std::env::args_os()));
}
