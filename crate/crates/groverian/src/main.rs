fn main() {
    let argv: Vec<String> = std::env::args().collect();
    std::process::exit(groverian::cli::dispatch(&argv));
}
