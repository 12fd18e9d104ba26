//! `gframe-lab`: verdicts, identity audits and dual constructions on scenario
//! files.
//!
//! Exit codes: 0 pass, 1 audit failure, 2 Bessel only, 3 not a frame,
//! 4 singular frame operator, 64 usage, 65 file or format error,
//! 66 scenario lacks a required component.

mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gframe_core::{CanonicalMode, Tolerances};

pub use report::Report;

pub mod exit {
    pub const PASS: i32 = 0;
    pub const AUDIT_FAIL: i32 = 1;
    pub const BESSEL_ONLY: i32 = 2;
    pub const NOT_FRAME: i32 = 3;
    pub const SINGULAR: i32 = 4;
    pub const USAGE: i32 = 64;
    pub const IO_FORMAT: i32 = 65;
    pub const INCOMPLETE: i32 = 66;
}

#[derive(Debug, Parser)]
#[command(
    name = "gframe-lab",
    version,
    about = "Controlled continuous g-frame verification lab"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plain and controlled frame verdicts with optimal bounds.
    Check(CheckArgs),
    /// Numerical audit of one structural identity.
    Audit(AuditArgs),
    /// Build a controlled dual and write it into a scenario file.
    Dual(DualArgs),
    /// Generate a scenario file.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Paper,
    General,
}

impl From<ModeArg> for CanonicalMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Paper => CanonicalMode::Symmetric,
            ModeArg::General => CanonicalMode::General,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AuditTarget {
    #[value(name = "2.1")]
    Equivalence,
    #[value(name = "2.2")]
    RootControlled,
    #[value(name = "2.5")]
    InducedVectors,
    #[value(name = "2.6")]
    InducedReweighted,
    #[value(name = "2.7")]
    ProductControlled,
    #[value(name = "3.3")]
    LowerBound,
    #[value(name = "3.4")]
    Reconstruction,
    #[value(name = "3.5")]
    SynthesisNorm,
    #[value(name = "3.6")]
    LeftInverse,
    #[value(name = "3.7")]
    Parametrization,
}

impl AuditTarget {
    pub fn label(self) -> &'static str {
        match self {
            AuditTarget::Equivalence => "2.1",
            AuditTarget::RootControlled => "2.2",
            AuditTarget::InducedVectors => "2.5",
            AuditTarget::InducedReweighted => "2.6",
            AuditTarget::ProductControlled => "2.7",
            AuditTarget::LowerBound => "3.3",
            AuditTarget::Reconstruction => "3.4",
            AuditTarget::SynthesisNorm => "3.5",
            AuditTarget::LeftInverse => "3.6",
            AuditTarget::Parametrization => "3.7",
        }
    }

    pub fn needs_gamma(self) -> bool {
        matches!(
            self,
            AuditTarget::LowerBound | AuditTarget::Reconstruction | AuditTarget::LeftInverse
        )
    }
}

#[derive(Debug, Clone, Args)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub frame_floor: Option<f64>,
    #[arg(long)]
    pub defect_tol: Option<f64>,
    #[arg(long)]
    pub commute_tol: Option<f64>,
    #[arg(long)]
    pub dual_tol: Option<f64>,
    #[arg(long)]
    pub kernel_tol: Option<f64>,
    #[arg(long)]
    pub orth_tol: Option<f64>,
    #[arg(long)]
    pub identity_tol: Option<f64>,
    #[arg(long)]
    pub form_tol: Option<f64>,
}

impl ToleranceArgs {
    pub fn resolve(&self) -> Result<Tolerances, String> {
        let mut t = Tolerances::default();
        let overrides = [
            (self.frame_floor, &mut t.frame_floor, "frame-floor"),
            (self.defect_tol, &mut t.defect_tol, "defect-tol"),
            (self.commute_tol, &mut t.commute_tol, "commute-tol"),
            (self.dual_tol, &mut t.dual_tol, "dual-tol"),
            (self.kernel_tol, &mut t.kernel_tol, "kernel-tol"),
            (self.orth_tol, &mut t.orth_tol, "orth-tol"),
            (self.identity_tol, &mut t.identity_tol, "identity-tol"),
            (self.form_tol, &mut t.form_tol, "form-tol"),
        ];
        for (value, slot, name) in overrides {
            if let Some(v) = value {
                if !(v.is_finite() && v >= 0.0) {
                    return Err(format!("--{name} must be a finite non-negative number"));
                }
                *slot = v;
            }
        }
        Ok(t)
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    pub scenario: PathBuf,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub theorem: AuditTarget,
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Canonical part used by the parametrization audit.
    #[arg(long, value_enum, default_value = "general")]
    pub mode: ModeArg,
    /// Kernel seed for the parametrization audit; 0 means `T = 0`.
    #[arg(long, default_value_t = 1)]
    pub kernel_seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DualArgs {
    pub scenario: PathBuf,
    #[arg(long, value_enum)]
    pub mode: ModeArg,
    /// 0 builds the canonical dual; other values draw a kernel operator.
    #[arg(long, default_value_t = 0)]
    pub kernel_seed: u64,
    /// Scenario file receiving the dual family.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[command(flatten)]
    pub tolerances: ToleranceArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    Example15,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub preset: Preset,
    #[arg(long)]
    pub out: PathBuf,
    /// Node count of the trigonometric preset.
    #[arg(long, default_value_t = 1024)]
    pub nodes: usize,
    /// Diagonal of `P` for the trigonometric preset.
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub p_diag: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub q_diag: Vec<f64>,
    /// Ambient dimension of the random preset.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Block dimensions of the random preset, one per node.
    #[arg(long, value_delimiter = ',', default_value = "2,2,2")]
    pub blocks: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Condition-number target of the random controllers.
    #[arg(long, default_value_t = 10.0)]
    pub cond: f64,
    /// Build the controllers in the eigenbasis of `S_Λ`.
    #[arg(long)]
    pub commuting: bool,
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::PASS };
            let rendered = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(rendered.as_bytes());
            return code;
        }
    };
    commands::dispatch(cli.command, stdout, stderr)
}
