fn main() {
    eprintln!("ahres CLI under construction");
    std::process::exit(1);
}
