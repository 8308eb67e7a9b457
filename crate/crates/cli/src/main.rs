fn main() {
    std::process::exit(adiashort::run(std::env::args_os()));
}
