fn main() {
    std::process::exit(ncsym::run());
}
