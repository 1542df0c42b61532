mod output;
mod problem;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use opcalc::error::Error;
use opcalc::scalar::{Mode, Scalar};
use opcalc::sequence::{cauchy_product, invert, shift_left, shift_right, Sequence};
use opcalc::solver::solve_ivp;
use opcalc::transforms::{builtin_table, Realization};
use serde_json::{json, Value};

use problem::{parse_json, parse_problem, sequence_values, InputError};

const EXIT_INVALID: u8 = 2;
const EXIT_SOLVER: u8 = 3;

#[derive(Parser)]
#[command(name = "opcalc", version, about = "Operational calculus on coefficient sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem document in FILE (or stdin).
    Solve { file: Option<PathBuf> },
    /// Print the built-in transform pairs of a realization.
    Table {
        #[arg(long, value_enum)]
        realization: RealizationArg,
        /// Bessel order; required with `--realization bessel`.
        #[arg(long)]
        nu: Option<f64>,
    },
    /// Apply a sequence operation to sequence files.
    Seq {
        #[arg(value_enum)]
        op: SeqOp,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Shift distance `m`.
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// `right` multiplies by `s^m`, `left` applies `l^m`.
        #[arg(long, value_enum, default_value_t = Direction::Right)]
        direction: Direction,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum RealizationArg {
    Maclaurin,
    Bessel,
    Zbridge,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum SeqOp {
    Product,
    Invert,
    Shift,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Right,
    Left,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

enum Failure {
    Invalid(InputError),
    Solver(Error),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        Failure::Invalid(e)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Solver(e)
    }
}

fn read_input(file: Option<&Path>) -> Result<String, InputError> {
    let mut text = String::new();
    let result = match file {
        Some(path) if path != Path::new("-") => std::fs::read_to_string(path).map(|t| text = t),
        _ => std::io::stdin().read_to_string(&mut text).map(|_| ()),
    };
    result.map_err(|e| {
        let source = file.map_or("stdin".into(), |p| p.display().to_string());
        InputError::field("", format!("cannot read {source}: {e}"))
    })?;
    Ok(text)
}

fn cmd_solve(file: Option<&Path>) -> Result<Vec<Value>, Failure> {
    let doc = parse_json(&read_input(file)?)?;
    let env = std::env::var("OPCALC_TRUNCATION").ok();
    let parsed = parse_problem(&doc, env.as_deref())?;
    let problem = if parsed.mode == Mode::Float {
        to_float(parsed.problem)
    } else {
        parsed.problem
    };
    let sol = solve_ivp(&problem, parsed.truncation)?;
    Ok(vec![output::solution_doc(&problem, &sol, parsed.sample_points.as_deref())])
}

fn to_float(mut p: opcalc::solver::IVProblem) -> opcalc::solver::IVProblem {
    use opcalc::solver::Rhs;
    p.op_poly = p.op_poly.iter().map(Scalar::to_float).collect();
    p.init = p.init.iter().map(Scalar::to_float).collect();
    p.rhs = match p.rhs {
        Rhs::Zero => Rhs::Zero,
        Rhs::Rational(g) => Rhs::Rational(g.to_mode(Mode::Float)),
        Rhs::Named(mut f) => {
            f.prefactor = f.prefactor.to_float();
            f.param = f.param.to_float();
            Rhs::Named(f)
        }
    };
    p
}

fn cmd_table(realization: RealizationArg, nu: Option<f64>) -> Result<Vec<Value>, Failure> {
    let realization = match (realization, nu) {
        (RealizationArg::Bessel, Some(nu)) => {
            Realization::bessel(nu).map_err(|e| InputError::field("--nu", e.to_string()))?
        }
        (RealizationArg::Bessel, None) => return Err(InputError::field("--nu", "required with --realization bessel").into()),
        (_, Some(_)) => return Err(InputError::field("--nu", "only the bessel realization takes --nu").into()),
        (RealizationArg::Maclaurin, None) => Realization::Maclaurin,
        (RealizationArg::Zbridge, None) => Realization::ZBridge,
    };
    Ok(builtin_table(realization).iter().map(|e| e.to_json()).collect())
}

fn read_sequence(path: &Path, mode: Mode) -> Result<Sequence, InputError> {
    let located = |e: InputError| match e {
        InputError::Syntax { line, column, message } => InputError::Syntax {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        InputError::Field { field, message } => InputError::field(format!("{}:{field}", path.display()), message),
    };
    let doc = parse_json(&read_input(Some(path))?).map_err(located)?;
    let values = sequence_values(&doc, mode).map_err(located)?;
    if values.is_empty() {
        return Err(located(InputError::field("coefficients", "a sequence needs at least one term")));
    }
    Ok(Sequence::new(values))
}

fn cmd_seq(op: SeqOp, files: &[PathBuf], steps: usize, direction: Direction, mode: ModeArg) -> Result<Vec<Value>, Failure> {
    let mode = match mode {
        ModeArg::Exact => Mode::Exact,
        ModeArg::Float => Mode::Float,
    };
    let expected = match op {
        SeqOp::Product => None,
        SeqOp::Invert | SeqOp::Shift => Some(1),
    };
    if let Some(n) = expected.filter(|&n| n != files.len()) {
        return Err(InputError::field("FILES", format!("this operation takes {n} file, got {}", files.len())).into());
    }
    if op == SeqOp::Product && files.len() < 2 {
        return Err(InputError::field("FILES", "product takes at least two files").into());
    }
    let seqs = files
        .iter()
        .map(|f| read_sequence(f, mode))
        .collect::<Result<Vec<_>, _>>()?;
    let result = match op {
        SeqOp::Product => {
            let mut acc = seqs[0].clone();
            for s in &seqs[1..] {
                acc = cauchy_product(&acc, s)?;
            }
            acc
        }
        SeqOp::Invert => invert(&seqs[0])?,
        SeqOp::Shift => match direction {
            Direction::Right => shift_right(&seqs[0], steps),
            Direction::Left => shift_left(&seqs[0], steps),
        },
    };
    Ok(vec![json!({"coefficients": output::sequence_json(&result)})])
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve { file } => cmd_solve(file.as_deref()),
        Command::Table { realization, nu } => cmd_table(*realization, *nu),
        Command::Seq {
            op,
            files,
            steps,
            direction,
            mode,
        } => cmd_seq(*op, files, *steps, *direction, *mode),
    };
    match outcome {
        Ok(docs) => {
            for d in docs {
                println!("{d}");
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Invalid(e)) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(EXIT_INVALID)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("{}", json!({"error": e.name(), "message": e.to_string()}));
            ExitCode::from(EXIT_SOLVER)
        }
    }
}
