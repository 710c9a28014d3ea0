fn main() {
    std::process::exit(pdem_scatter::cli::execute(std::env::args()));
}
