use clap::CommandFactory;
use fbm_springs_cli::{run, Cli};

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    // help, version and usage errors are clap's business
    let full = std::iter::once("fbm-springs".to_string()).chain(argv.iter().cloned());
    if let Err(e) = Cli::command().try_get_matches_from(full) {
        e.exit();
    }
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = run(&argv, &mut stdout) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
