fn main() {
    std::process::exit(funkgeo::cli::run(std::env::args_os()));
}
