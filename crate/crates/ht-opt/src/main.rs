fn main() {
    std::process::exit(ht_opt::cli::run(std::env::args_os()));
}
