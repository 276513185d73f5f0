fn main() {
    let code = lagrange_forcing::cli::run(std::env::args_os());
    std::process::exit(code);
}
