use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use exstruct_core::shell::{run, Cache, Command, Options};

/// Closed substructures of Ext over a bound quiver algebra and their defects.
#[derive(Parser)]
#[command(name = "exstruct", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Input description (JSON).
    input: PathBuf,
    /// Override the seed from the input file.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the sample count from the input file.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the field characteristic.
    #[arg(long = "p")]
    p: Option<u64>,
    /// Neither read nor write the table cache.
    #[arg(long)]
    no_cache: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Hom and Ext tables and simple defects.
    Analyze(Common),
    /// The lattice of substructures.
    Substructures {
        #[command(flatten)]
        common: Common,
        /// Write the Hasse diagram as a Graphviz digraph.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Factors of the defect of one class.
    Defect {
        #[command(flatten)]
        common: Common,
        /// Atlas names or indices of C and A, then the coordinates of the class in E(C, A).
        #[arg(long, num_args = 2.., value_names = ["C", "A", "COEFFS"], allow_negative_numbers = true, required = true)]
        class: Vec<String>,
    },
    /// Run the full invariant suite.
    Verify(Common),
    /// Brute-force enumeration compared with the Serre construction.
    Oracle(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match cli.command {
        Cmd::Analyze(c) => (Command::Analyze, c),
        Cmd::Substructures { common, dot } => (Command::Substructures { dot }, common),
        Cmd::Defect { common, class } => {
            let coeffs: Result<Vec<i64>, _> = class[2..].iter().map(|s| s.parse::<i64>()).collect();
            let Ok(coeffs) = coeffs else {
                eprintln!("error: class coefficients must be integers");
                return ExitCode::from(2);
            };
            let cmd = Command::Defect {
                c: class[0].clone(),
                a: class[1].clone(),
                coeffs,
            };
            (cmd, common)
        }
        Cmd::Verify(c) => (Command::Verify, c),
        Cmd::Oracle(c) => (Command::Oracle, c),
    };
    let opts = Options {
        seed: common.seed,
        samples: common.samples,
        p: common.p,
        cache: if common.no_cache { Cache::disabled() } else { Cache::from_env() },
    };
    let out = run(&cmd, &common.input, &opts);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}
