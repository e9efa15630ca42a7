use clap::Parser;

use cpdomains::cli::{self, Cli, EXIT_INPUT_ERROR};

fn main() {
    let cli = Cli::parse();
    match cli::run(&cli) {
        Ok((report, code)) => {
            match cli::output_path(&cli) {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, format!("{report}\n")) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        std::process::exit(EXIT_INPUT_ERROR);
                    }
                }
                None => println!("{report}"),
            }
            std::process::exit(code);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(EXIT_INPUT_ERROR);
        }
    }
}
