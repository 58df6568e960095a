mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use loday_core::{Error, Family};

#[derive(Parser)]
#[command(name = "loday", version, about = "Exact computations with Loday-type algebras")]
struct Cli {
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,
    /// Include wall-clock timings in the report.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Clone)]
pub struct RepArgs {
    /// `adjoint`, `trivial`, or a representation file.
    #[arg(long, default_value = "adjoint")]
    pub rep: String,
    /// Module dimension for `--rep trivial`.
    #[arg(long, default_value_t = 1)]
    pub mdim: usize,
}

#[derive(Subcommand)]
pub enum Verb {
    /// List the shapes of U_n.
    Shapes {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: usize,
    },
    /// Check π∘π = 0.
    Validate { algebra: PathBuf },
    /// Dimensions of Z^n, B^n, H^n.
    Cohomology {
        algebra: PathBuf,
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        n: usize,
    },
    /// Basis of the derivations Z¹(A, A).
    Derivations { algebra: PathBuf },
    /// Check the deformation equations up to an order.
    DeformCheck {
        deformation: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Extend a truncated deformation order by order.
    DeformExtend {
        deformation: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Write the extended deformation here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Obstruction cocycle of a truncated deformation and its class.
    Obstruction { deformation: PathBuf },
    /// Search for an equivalence between two deformations.
    Equivalence {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        order: Option<usize>,
    },
    /// Abelian extension from a 2-cocycle.
    Extension {
        algebra: PathBuf,
        #[arg(long)]
        cocycle: PathBuf,
        #[command(flatten)]
        rep: RepArgs,
        /// Second cocycle; reports whether the extensions are equivalent.
        #[arg(long)]
        compare: Option<PathBuf>,
    },
    /// Cohomology of the deformation complex of a morphism.
    MorphismCohomology {
        morphism: PathBuf,
        #[arg(long)]
        n: usize,
    },
    /// Extend a morphism deformation order by order.
    MorphismExtend {
        deformation: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Yau twist {π}{α, β} and its validation under the twisted rule.
    TwistValidate { algebra: PathBuf },
    /// π_n = −(1/n!) D^n · D̄^n for commuting derivations.
    UniversalDeform {
        algebra: PathBuf,
        /// Matrix `r11,r12;r21,r22`.
        #[arg(long)]
        d: String,
        /// Defaults to D.
        #[arg(long)]
        dbar: Option<String>,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = cli.timings.then(Instant::now);
    match commands::run(&cli.verb) {
        Ok(report) => {
            let text = match cli.format {
                Format::Text => report.render_text(started),
                Format::Json => report.render_json(started),
            };
            println!("{text}");
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Precondition(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}
