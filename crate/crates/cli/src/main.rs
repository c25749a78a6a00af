use clap::Parser;

use jumpmc_cli::{run, schedule_table, Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args).map(|outcome| {
            if !args.quiet {
                eprintln!("wrote results to {}", outcome.out.display());
            }
        }),
        Command::Schedule(args) => schedule_table(args).map(|t| print!("{t}")),
    };
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(e.kind.exit_code());
    }
}
