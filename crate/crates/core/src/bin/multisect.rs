use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use multisect::format::DiagramFile;
use multisect::multisection::Variant;
use multisect::report::{run, Command, RunError, RunOptions};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cmd {
    Validate,
    Homology,
    RelHomology,
    TwistedHomology,
    Torsion,
    IntersectionForm,
    Monodromy,
    Boundary,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Validate => Command::Validate,
            Cmd::Homology => Command::Homology,
            Cmd::RelHomology => Command::RelHomology,
            Cmd::TwistedHomology => Command::TwistedHomology,
            Cmd::Torsion => Command::Torsion,
            Cmd::IntersectionForm => Command::IntersectionForm,
            Cmd::Monodromy => Command::Monodromy,
            Cmd::Boundary => Command::Boundary,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Absolute,
    Relative,
    Closed,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Absolute => Variant::Absolute,
            VariantArg::Relative => Variant::Relative,
            VariantArg::Closed => Variant::Closed,
        }
    }
}

/// Homology, torsion, intersection forms and open-book data of multisected 4-manifolds.
#[derive(Debug, Parser)]
#[command(name = "multisect", version)]
struct Args {
    /// What to compute.
    #[arg(value_enum)]
    command: Cmd,
    /// Diagram file (.msd).
    file: PathBuf,
    /// Replace the file's twist, e.g. "x=t,y=-t^2".
    #[arg(long, value_name = "SPEC")]
    twist_override: Option<String>,
    /// Which chain complex to use.
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    /// Print intermediate matrices.
    #[arg(long)]
    trace: bool,
    /// Emit a JSON document instead of text.
    #[arg(long)]
    machine_output: bool,
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let command: Command = args.command.into();
    let opts = RunOptions {
        twist_override: args.twist_override.clone(),
        variant: args.variant.map(Into::into),
        trace: args.trace,
    };
    let result = DiagramFile::read(&args.file)
        .map_err(RunError::from)
        .and_then(|f| run(command, &f, &opts));
    match result {
        Ok(r) => {
            if args.machine_output {
                println!("{}", serde_json::to_string_pretty(&r.json).expect("json"));
            } else {
                print!("{}", r.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if args.machine_output {
                let doc = serde_json::json!({
                    "command": command.name(),
                    "error": e.to_string(),
                    "exit_code": e.exit_code(),
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
