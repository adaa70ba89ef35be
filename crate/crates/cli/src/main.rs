use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "qsyslab", version, about = "Verify Q-systems, bimodules, quantum groups and quantum bi-elements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check in a workspace file.
    Verify {
        file: PathBuf,
        /// Residual tolerance for checks without their own.
        #[arg(long, env = "QSYSLAB_TOL")]
        tol: Option<f64>,
        /// Write a JSON report here.
        #[arg(long, value_name = "OUT.json")]
        report: Option<PathBuf>,
    },
    /// Evaluate one named equation.
    CheckEq {
        file: PathBuf,
        #[arg(long = "eq", value_name = "NAME")]
        eq: String,
        #[arg(long, env = "QSYSLAB_TOL")]
        tol: Option<f64>,
    },
    /// List or write the bundled example workspaces.
    #[command(group(ArgGroup::new("action").required(true).args(["list", "emit"])))]
    Examples {
        #[arg(long)]
        list: bool,
        #[arg(long, num_args = 2, value_names = ["NAME", "PATH"])]
        emit: Option<Vec<String>>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout();
    let result = match cli.command {
        Command::Verify { file, tol, report } => qsyslab::verify(&file, tol, report.as_deref(), &mut stdout),
        Command::CheckEq { file, eq, tol } => qsyslab::check_eq(&file, &eq, tol, &mut stdout),
        Command::Examples { list, emit } => {
            if list {
                qsyslab::list_examples(&mut stdout);
                Ok(0)
            } else {
                let emit = emit.unwrap_or_default();
                qsyslab::emit_example(&emit[0], emit[1].as_ref()).map(|()| 0)
            }
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
