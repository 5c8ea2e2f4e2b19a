fn main() {
    std::process::exit(tdres::cli::run(std::env::args().skip(1)));
}
