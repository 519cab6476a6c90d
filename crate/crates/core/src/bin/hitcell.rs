use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hitcell::driver::{run, Command, Options, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "hitcell",
    version,
    about = "Check, evaluate and lint higher inductive type modules"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Schema library to load before each file (defaults to the builtin one).
    #[arg(long, value_name = "PATH", global = true)]
    prelude: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse, validate schemas and typecheck every definition.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check, then evaluate eval requests in the finite-set model.
    Eval {
        file: PathBuf,
        /// Name of a single request to evaluate.
        request: Option<String>,
        /// Saturation rounds, overriding each request's own fuel.
        #[arg(long)]
        fuel: Option<usize>,
        /// Confirm initiality against all algebras up to this size.
        #[arg(long, value_name = "BOUND")]
        check_initiality: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Validate schema declarations only.
    Lint {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let (cmd, files, common, opts) = match cli.cmd {
        Cmd::Check { files, common } => (Command::Check, files, common, Options::default()),
        Cmd::Lint { files, common } => (Command::Lint, files, common, Options::default()),
        Cmd::Eval {
            file,
            request,
            fuel,
            check_initiality,
            common,
        } => (
            Command::Eval,
            vec![file],
            common,
            Options {
                fuel,
                check_initiality,
                request,
                ..Options::default()
            },
        ),
    };
    let opts = Options {
        prelude: common.prelude,
        ..opts
    };
    let out = run(cmd, &files, &opts);
    if common.json {
        println!("{}", out.report.to_json());
    } else {
        print!("{}", out.report.to_human());
    }
    ExitCode::from(out.exit as u8)
}
