fn main() {
    // CLI wired up after the simulation engine lands.
}
