fn main() {
    let args: Vec<String> = std::env::args().collect();
    let (code, out) = cyclocohom::cli::run(&args);
    print!("{out}");
    std::process::exit(code);
}
