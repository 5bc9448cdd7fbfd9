fn main() {
    if let Err(e) = gpvortex::cli::run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
