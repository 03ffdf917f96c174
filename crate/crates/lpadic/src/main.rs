use std::io::Write;

fn main() {
    let out = lpadic::cli::run(std::env::args_os());
    // a closed pipe is not an error worth reporting
    let _ = if out.code == 2 {
        writeln!(std::io::stderr().lock(), "{}", out.body)
    } else {
        writeln!(std::io::stdout().lock(), "{}", out.body)
    };
    std::process::exit(out.code);
}
