use std::io;
use std::process;

fn main() {
    let status = respmod::cli::run(
        std::env::args_os(),
        &mut io::stdin().lock(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    process::exit(status.code());
}
