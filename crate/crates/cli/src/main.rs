use std::io::Write;

use clap::Parser;
use fincorr_cli::{cli_output, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            e.print().expect("printing a usage message");
            std::process::exit(code);
        }
    };
    let (out, err, code) = cli_output(&cli);
    std::io::stdout().write_all(out.as_bytes()).expect("writing to stdout");
    std::io::stderr().write_all(err.as_bytes()).expect("writing to stderr");
    std::process::exit(code);
}
