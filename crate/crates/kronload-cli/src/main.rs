use clap::error::ErrorKind;
use clap::Parser;

use kronload_cli::args::Cli;
use kronload_cli::commands;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = e.print();
                std::process::exit(0);
            }
            _ => {
                // Strip clap's own "error: " lead-in so the prefix carries
                // the exit code exactly once.
                let message = e.to_string();
                let message = message.strip_prefix("error: ").unwrap_or(&message);
                eprint!("error[1]: {}", message);
                if !message.ends_with('\n') {
                    eprintln!();
                }
                std::process::exit(1);
            }
        },
    };

    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("warning: could not size the thread pool: {}", e);
        }
    }

    if let Err(e) = commands::execute(cli) {
        let code = e.exit_code();
        eprintln!("error[{}]: {}", code, e);
        std::process::exit(code);
    }
}
