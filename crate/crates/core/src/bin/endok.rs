use std::io::Write;

fn main() {
    let out = endok::cli::main_with(std::env::args_os());
    // a closed pipe is not worth a panic
    let _ = if out.to_stderr { std::io::stderr().write_all(out.text.as_bytes()) } else { std::io::stdout().write_all(out.text.as_bytes()) };
    std::process::exit(out.code);
}
