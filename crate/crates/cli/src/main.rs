use bolforge_cli::{run, Cli, Env};
use bolforge_core::harness::StandardChecker;
use clap::Parser;

fn main() {
    let cli = Cli::parse();
    let (mut stdout, mut stderr) = (std::io::stdout().lock(), std::io::stderr());
    let code = run(
        cli,
        &mut Env {
            stdout: &mut stdout,
            stderr: &mut stderr,
            checker: &StandardChecker,
        },
    );
    std::process::exit(code);
}
