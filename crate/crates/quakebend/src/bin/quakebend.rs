use clap::Parser;
use quakebend::cli::{execute, Cli, EXIT_CONFIG};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; fold usage errors into exit 1
            let _ = e.print();
            std::process::exit(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    let out = execute(&cli.command);
    println!("{}", out.summary);
    if let Some(csv) = out.csv {
        match out.out_path {
            Some(path) => {
                if let Err(e) = std::fs::write(&path, csv) {
                    eprintln!("cannot write {}: {e}", path.display());
                    std::process::exit(EXIT_CONFIG);
                }
            }
            None => print!("{csv}"),
        }
    }
    std::process::exit(out.exit_code);
}
