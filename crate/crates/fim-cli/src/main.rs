//! `fimkit` — exact analysis of finitely presented modules of m-tuples of
//! finite sets with injections, truncated to a finite box.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fimkit::combinat::Shape;
use fimkit::error::{FimError, Result};
use fimkit::linalg::FieldSpec;

use commands::Outcome;
use render::OutFormat;

#[derive(Parser)]
#[command(
    name = "fimkit",
    version,
    about = "Exact invariants of finitely presented modules over tuples of finite sets and injections"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the dimension table over the whole box
    Expand(Common),
    /// Full bundle: homology, torsion, projectivity, shift resolution, dimension fit, stability
    Analyze(AnalyzeArgs),
    /// Verify structure-map axioms and the four-term dimension identity
    Check(Common),
    /// Apply the shift functor and print the resulting dimension table
    Shift(ShiftArgs),
    /// Resolve by iterated shift kernels and test the degree bounds
    Nagpal(NagpalArgs),
    /// Multiplicities of the irreducible symmetric-group representations at every object
    Decompose(Common),
    /// Fit one polynomial per direction whose product gives the stable dimensions
    Hilbert(Common),
}

#[derive(Args)]
struct Common {
    /// Presentation file (JSON)
    #[arg(long, short)]
    input: PathBuf,
    /// Override the truncation box, as "n1,...,nm"
    #[arg(long = "box", value_name = "n1,...,nm")]
    bound: Option<String>,
    /// Override the coefficient field: Q or Fp:p
    #[arg(long)]
    field: Option<String>,
    /// Output format
    #[arg(long, value_enum, default_value_t = Out::Table)]
    out: Out,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: Common,
    /// Largest homology degree to report
    #[arg(long, default_value_t = 2)]
    s_max: usize,
}

#[derive(Args)]
struct ShiftArgs {
    #[command(flatten)]
    common: Common,
    /// Shift amount, as "a1,...,am"
    #[arg(long, value_name = "a1,...,am")]
    shift: String,
}

#[derive(Args)]
struct NagpalArgs {
    #[command(flatten)]
    common: Common,
    /// Shift amount, as "a1,...,am" (default: one step in every direction)
    #[arg(long, value_name = "a1,...,am")]
    shift: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Out {
    Table,
    Structured,
}

impl From<Out> for OutFormat {
    fn from(out: Out) -> OutFormat {
        match out {
            Out::Table => OutFormat::Table,
            Out::Structured => OutFormat::Structured,
        }
    }
}

impl Cmd {
    fn common(&self) -> &Common {
        match self {
            Cmd::Expand(c) | Cmd::Check(c) | Cmd::Decompose(c) | Cmd::Hilbert(c) => c,
            Cmd::Analyze(a) => &a.common,
            Cmd::Shift(s) => &s.common,
            Cmd::Nagpal(n) => &n.common,
        }
    }
}

/// Accepts "2,3" and the display form "(2,3)".
fn parse_shape(text: &str) -> Result<Shape> {
    let trimmed = text.trim();
    let inner = trimmed
        .strip_prefix('(')
        .and_then(|rest| rest.strip_suffix(')'))
        .unwrap_or(trimmed);
    let entries = inner
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| FimError::Parse(format!("bad shape entry {:?} in {text:?}", part)))
        })
        .collect::<Result<Vec<usize>>>()?;
    if entries.is_empty() {
        return Err(FimError::Parse(format!("empty shape {text:?}")));
    }
    Ok(Shape::new(entries))
}

fn run(cli: &Cli) -> Result<Outcome> {
    let common = cli.cmd.common();
    let field = common
        .field
        .as_deref()
        .map(FieldSpec::from_str)
        .transpose()?;
    let bound = common.bound.as_deref().map(parse_shape).transpose()?;
    let ctx = commands::load(&common.input, field, bound.as_ref())?;
    match &cli.cmd {
        Cmd::Expand(_) => commands::cmd_expand(&ctx),
        Cmd::Analyze(args) => commands::cmd_analyze(&ctx, args.s_max),
        Cmd::Check(_) => commands::cmd_check(&ctx),
        Cmd::Shift(args) => {
            let amount = parse_shape(&args.shift)?;
            commands::cmd_shift(&ctx, &amount)
        }
        Cmd::Nagpal(args) => {
            let amount = args.shift.as_deref().map(parse_shape).transpose()?;
            commands::cmd_nagpal(&ctx, amount.as_ref())
        }
        Cmd::Decompose(_) => commands::cmd_decompose(&ctx),
        Cmd::Hilbert(_) => commands::cmd_hilbert(&ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = OutFormat::from(cli.cmd.common().out);
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", render::render(&outcome.report, format));
            if outcome.findings {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_parses_with_and_without_parens() {
        assert_eq!(parse_shape("2,3").unwrap(), Shape::new(vec![2, 3]));
        assert_eq!(parse_shape("(2,3)").unwrap(), Shape::new(vec![2, 3]));
        assert_eq!(parse_shape(" 4 ").unwrap(), Shape::new(vec![4]));
        assert!(parse_shape("2,-1").is_err());
        assert!(parse_shape("").is_err());
    }

    #[test]
    fn cli_declaration_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
