fn main() {
    eprintln!("plasthin: not yet wired up");
    std::process::exit(2);
}
