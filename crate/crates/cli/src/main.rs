use std::process::ExitCode;

use birkhoff_cli::{list_verbs, render, run, thread_count, Cli, CliError};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

fn fail(e: &CliError) -> ExitCode {
    eprintln!("birkhoff: {e}");
    ExitCode::from(1)
}

fn main() -> ExitCode {
    if std::env::args_os().len() <= 1 {
        eprint!("{}", list_verbs());
        eprintln!("\n{}", Cli::command().render_usage());
        return ExitCode::from(1);
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let Some(cfg) = cli.into_config() else {
        print!("{}", list_verbs());
        return ExitCode::SUCCESS;
    };
    match thread_count(&cfg) {
        Ok(Some(n)) => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                return fail(&CliError::Config(e.to_string()));
            }
        }
        Ok(None) => {}
        Err(e) => return fail(&e),
    }
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let text = render(&report, cfg.format);
    match &cfg.out {
        Some(path) => {
            if let Err(source) = std::fs::write(path, &text) {
                return fail(&CliError::Output { path: path.clone(), source });
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
