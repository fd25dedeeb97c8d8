fn main() {
    std::process::exit(biharmonic_lab::main_with(std::env::args()));
}
