use std::io::Read;
use std::path::Path;
use std::process::ExitCode;

use ainf::commands::{run, Command, RunOptions, Verify};
use ainf::graded::Grading;
use ainf::linalg::Field;
use ainf::model::{corpus_model, Model};
use ainf::Error;
use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact A(∞) transfer, bar constructions, Massey products and twisting
/// cochains on finite algebraic models.
#[derive(Parser)]
#[command(name = "ainf", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Transfer the A(∞) structure of a DGA to its homology.
    Transfer(Flags),
    /// Transfer an A(∞)-module structure to the homology of a DG module.
    ModuleTransfer(Flags),
    /// Compare B̃ of the transferred structure with the bar construction.
    TildeB(Flags),
    /// Homology of the classifying space from chain data (homological grading).
    ClassifyingSpace(Flags),
    /// Cohomology of the loop space from a cochain model (cohomological grading).
    LoopSpace(Flags),
    /// Massey triple products via X3, checked against a direct computation.
    Massey(Flags),
    /// Transfer a twisting cochain to homology.
    TwistTransfer(Flags),
    /// Homology of the twisted tensor product before and after transfer.
    Fiber(Flags),
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Json,
    Table,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyArg {
    Strict,
    Fast,
}

#[derive(Args)]
struct Flags {
    /// Model file, `-` for stdin, or the name of a bundled model.
    model: String,
    #[arg(long)]
    degree_cap: i32,
    #[arg(long)]
    arity_cap: Option<usize>,
    #[arg(long)]
    length_cap: Option<usize>,
    /// `Q` or `Zp:<p>`; overrides the model's field.
    #[arg(long, value_parser = parse_field)]
    field: Option<Field>,
    /// `homological` or `cohomological`; overrides the model's grading.
    #[arg(long, value_parser = parse_grading)]
    grading: Option<Grading>,
    #[arg(long, value_enum, default_value = "table")]
    output: Output,
    #[arg(long, value_enum, default_value = "strict")]
    verify: VerifyArg,
    /// Restrict `massey` to one triple, e.g. `e1,e2,e2`.
    #[arg(long, value_delimiter = ',')]
    triple: Option<Vec<String>>,
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).map_err(|e| e.to_string())
}

fn parse_grading(s: &str) -> Result<Grading, String> {
    Grading::parse(s).map_err(|e| e.to_string())
}

fn load(spec: &str) -> Result<Model, Error> {
    if spec == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse { line: 0, msg: format!("reading stdin: {e}") })?;
        return Model::load(&text);
    }
    let path = Path::new(spec);
    if path.exists() {
        Model::load_path(path)
    } else {
        corpus_model(spec)
    }
}

fn execute(cmd: Command, f: &Flags) -> Result<bool, Error> {
    let model = load(&f.model)?;
    let triple = f.triple.clone().map(|t| <[String; 3]>::try_from(t).expect("checked in main"));
    let opts = RunOptions {
        degree_cap: f.degree_cap,
        arity_cap: f.arity_cap,
        length_cap: f.length_cap,
        field: f.field,
        grading: f.grading,
        verify: match f.verify {
            VerifyArg::Strict => Verify::Strict,
            VerifyArg::Fast => Verify::Fast,
        },
        triple,
    };
    let report = run(cmd, &model, &opts)?;
    let text = match f.output {
        Output::Json => report.to_json(),
        Output::Table => report.to_table(),
    };
    print!("{text}");
    Ok(report.passed())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let (cmd, flags) = match &cli.command {
        Cmd::Transfer(f) => (Command::Transfer, f),
        Cmd::ModuleTransfer(f) => (Command::ModuleTransfer, f),
        Cmd::TildeB(f) => (Command::TildeB, f),
        Cmd::ClassifyingSpace(f) => (Command::ClassifyingSpace, f),
        Cmd::LoopSpace(f) => (Command::LoopSpace, f),
        Cmd::Massey(f) => (Command::Massey, f),
        Cmd::TwistTransfer(f) => (Command::TwistTransfer, f),
        Cmd::Fiber(f) => (Command::Fiber, f),
    };
    if flags.triple.as_ref().is_some_and(|t| t.len() != 3) {
        eprintln!("error: --triple takes exactly three comma-separated names");
        return ExitCode::from(1);
    }
    match execute(cmd, flags) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("ainf: one or more checks failed");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("ainf: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
