fn main() {
    std::process::exit(fracpow_lab::run(std::env::args_os()));
}
