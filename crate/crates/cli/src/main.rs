//! `fillvol`: batch driver for Δ-complexes, exact ℓ¹ fillings and filling-volume reports.
//!
//! Exit codes: 0 on success, 2 on a domain error, 3 when a solver budget is exhausted.

mod commands;
mod output;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use fillvol::l1opt::DEFAULT_NODE_LIMIT;
use fillvol::CoeffMode;
use serde::Serialize;

use output::{Format, RunConfig};

#[derive(Parser)]
#[command(name = "fillvol", version, about = "Exact filling norms and filling-volume bounds")]
struct Cli {
    /// Output format; defaults to the extension of --out, else text.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Branch-and-bound node budget.
    #[arg(long, global = true, env = "FILLVOL_NODE_LIMIT", default_value_t = DEFAULT_NODE_LIMIT)]
    node_limit: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and inspect Δ-complexes.
    #[command(subcommand)]
    Complex(ComplexCmd),
    /// Exact ℓ¹ filling problems.
    #[command(subcommand)]
    Fill(FillCmd),
    /// Certified filling-volume interval for a torus mapping class.
    Fv(FvArgs),
    /// Compare tr(Aᵐ) − 2 with |det(Aᵐ − I)|.
    Torsion(TorsionArgs),
    /// Check power homogeneity and conjugation invariance of the evidence.
    Probe(ProbeArgs),
}

#[derive(Subcommand)]
pub enum ComplexCmd {
    /// Write a model complex in the interchange format.
    Build(BuildArgs),
    Validate(InArgs),
    Homology(HomologyArgs),
    FundamentalCycle(InArgs),
}

#[derive(Args, Serialize)]
#[command(group(ArgGroup::new("kind").required(true).args(["genus", "grid_torus", "one_vertex_torus", "circle", "klein_bottle"])))]
pub struct BuildArgs {
    /// Closed orientable surface of genus G (G ≥ 1).
    #[arg(long)]
    pub genus: Option<usize>,
    /// Torus triangulated from a Q × Q grid.
    #[arg(long)]
    pub grid_torus: Option<usize>,
    #[arg(long)]
    pub one_vertex_torus: bool,
    /// Circle with Q vertices.
    #[arg(long)]
    pub circle: Option<usize>,
    #[arg(long)]
    pub klein_bottle: bool,
    /// Build the mapping torus of the grid map `v ↦ Av + shift` instead (with --grid-torus).
    #[arg(long, requires = "grid_torus", value_name = "a,b,c,d", allow_hyphen_values = true)]
    pub monodromy: Option<String>,
    #[arg(long, requires = "monodromy", value_name = "x,y", default_value = "0,0", allow_hyphen_values = true)]
    pub shift: String,
}

#[derive(Args, Serialize)]
pub struct InArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
}

#[derive(Args, Serialize)]
pub struct HomologyArgs {
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    /// A single degree; all degrees when omitted.
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Subcommand)]
pub enum FillCmd {
    /// Real filling norm by exact simplex.
    Lp(FillArgs),
    /// Integral filling norm by branch and bound.
    Ilp(FillArgs),
    /// Smallest-norm cycle homologous to a given cycle.
    MinCycle(CycleArgs),
    /// Integral cycle of smallest support in a homology class.
    Weightless(CycleArgs),
    /// Sample fill(∂c)/‖∂c‖₁ over random chains.
    UbcProbe(UbcArgs),
}

#[derive(Args, Serialize)]
pub struct FillArgs {
    /// Complex in the interchange format.
    #[arg(long, conflicts_with = "problem", required_unless_present = "problem")]
    pub complex: Option<PathBuf>,
    /// Chain to fill, e.g. "v1 - v0", "2*e0 + #1.3" or "0".
    #[arg(long, requires = "complex", allow_hyphen_values = true)]
    pub target: Option<String>,
    /// Degree of the target when it is "0".
    #[arg(long, default_value_t = 0)]
    pub degree: usize,
    /// Raw problem: boundary matrix and target as JSON.
    #[arg(long)]
    pub problem: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::L1)]
    pub objective: ObjectiveArg,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveArg {
    L1,
    Support,
}

#[derive(Args, Serialize)]
pub struct CycleArgs {
    #[arg(long)]
    pub complex: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub cycle: String,
    #[arg(long, default_value = "z")]
    pub mode: CoeffMode,
}

#[derive(Args, Serialize)]
pub struct UbcArgs {
    #[arg(long)]
    pub complex: PathBuf,
    /// Degree of the boundaries being filled.
    #[arg(long, default_value_t = 0)]
    pub degree: usize,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "z")]
    pub mode: CoeffMode,
}

#[derive(Args, Serialize)]
pub struct FvArgs {
    #[arg(long, value_name = "a,b,c,d", allow_hyphen_values = true)]
    pub matrix: String,
    #[arg(long, default_value = "z")]
    pub mode: CoeffMode,
    #[arg(long, default_value_t = 20)]
    pub m_max: u64,
    #[arg(long, default_value = "word")]
    pub refine: fillvol::fillvolume::Refine,
    /// Dictionary grid denominator for refinement.
    #[arg(long, default_value_t = 1)]
    pub dict_q: usize,
    /// Dictionary displacement radius; 0 searches only the word filling's simplices.
    #[arg(long, default_value_t = 1)]
    pub dict_r: usize,
    /// Refine only for m up to this value.
    #[arg(long, default_value_t = 2)]
    pub refine_m_max: u64,
    #[arg(long, default_value_t = fillvol::fillvolume::DEFAULT_DENOMINATOR_LIMIT)]
    pub denominator_limit: u64,
}

#[derive(Args, Serialize)]
pub struct TorsionArgs {
    #[arg(long, value_name = "a,b,c,d", allow_hyphen_values = true)]
    pub matrix: String,
    #[arg(long, default_value_t = 10)]
    pub m_max: u64,
}

#[derive(Args, Serialize)]
pub struct ProbeArgs {
    #[arg(long, value_name = "a,b,c,d", allow_hyphen_values = true)]
    pub matrix: String,
    #[arg(long, default_value_t = 4)]
    pub k_max: u64,
    #[arg(long, default_value_t = 10)]
    pub m_max: u64,
    #[arg(long, default_value_t = 20)]
    pub conjugates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn args_value<T: Serialize>(name: &str, args: &T) -> (String, serde_json::Value) {
    (name.to_string(), serde_json::to_value(args).expect("arguments serialize"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = Format::resolve(cli.format, cli.out.as_deref());
    let (command, args) = match &cli.command {
        Command::Complex(c) => match c {
            ComplexCmd::Build(a) => args_value("complex build", a),
            ComplexCmd::Validate(a) => args_value("complex validate", a),
            ComplexCmd::Homology(a) => args_value("complex homology", a),
            ComplexCmd::FundamentalCycle(a) => args_value("complex fundamental-cycle", a),
        },
        Command::Fill(c) => match c {
            FillCmd::Lp(a) => args_value("fill lp", a),
            FillCmd::Ilp(a) => args_value("fill ilp", a),
            FillCmd::MinCycle(a) => args_value("fill min-cycle", a),
            FillCmd::Weightless(a) => args_value("fill weightless", a),
            FillCmd::UbcProbe(a) => args_value("fill ubc-probe", a),
        },
        Command::Fv(a) => args_value("fv", a),
        Command::Torsion(a) => args_value("torsion", a),
        Command::Probe(a) => args_value("probe", a),
    };
    let cfg = RunConfig {
        command,
        args,
        format,
        node_limit: cli.node_limit,
    };
    let result = match &cli.command {
        Command::Complex(c) => commands::complex(c),
        Command::Fill(c) => commands::fill(c, cli.node_limit),
        Command::Fv(a) => commands::fv(a, cli.node_limit),
        Command::Torsion(a) => commands::torsion(a),
        Command::Probe(a) => commands::probe(a),
    };
    let (text, code) = match &result {
        Ok(report) => (report.render(&cfg), 0),
        Err(e) => {
            if format != Format::Text {
                eprint!("{}", output::render_error(e, &RunConfig { format: Format::Text, ..cfg.clone() }));
            }
            (output::render_error(e, &cfg), e.exit_code())
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None if code == 0 || format != Format::Text => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
        None => std::io::stderr().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
