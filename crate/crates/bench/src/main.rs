fn main() {
    std::process::exit(rtopt_bench::cli::run(std::env::args_os()));
}
