use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "MOVING_WELLS_OUT";

#[derive(Debug, Parser)]
#[command(name = "moving-wells", version, about = "Wells with a uniformly moving barrier: datasets, checks, propagation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Sample states, densities and potentials on a grid.
    Sample(SampleArgs),
    /// Run the verification suite.
    Verify(VerifyArgs),
    /// Propagate a closed-form state numerically and compare.
    Propagate(PropagateArgs),
    /// Emit the datasets of the five reference figures.
    Figures(FiguresArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Box,
    Pt,
    Confluent,
}

impl FamilyArg {
    pub fn name(self) -> &'static str {
        match self {
            FamilyArg::Box => "box",
            FamilyArg::Pt => "pt",
            FamilyArg::Confluent => "confluent",
        }
    }
}

/// Well and confluent parameters shared by several commands.
#[derive(Debug, Clone, Args)]
pub struct WellArgs {
    /// Static box length L.
    #[arg(long = "L", default_value_t = 1.0)]
    pub length: f64,
    /// Seed index of the confluent family.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Confluent parameter.
    #[arg(long, default_value_t = 0.4, allow_hyphen_values = true)]
    pub omega: f64,
}

impl WellArgs {
    fn argv(&self) -> Vec<String> {
        vec![
            "--L".into(),
            self.length.to_string(),
            "--m".into(),
            self.m.to_string(),
            "--omega".into(),
            self.omega.to_string(),
        ]
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output directory.
    #[arg(long, env = OUT_ENV, default_value = "out")]
    pub out: PathBuf,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// State selectors: indices, or `eps` for the confluent missing state.
    #[arg(long, value_delimiter = ',', required = true)]
    pub n: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub times: Vec<f64>,
    /// Grid points per time, walls included.
    #[arg(long, default_value_t = 801)]
    pub points: usize,
    #[command(flatten)]
    pub well: WellArgs,
    /// File stem; defaults to `sample_<family>`.
    #[arg(long)]
    pub name: Option<String>,
    #[command(flatten)]
    pub out: OutArgs,
}

impl SampleArgs {
    pub fn stem(&self) -> String {
        self.name.clone().unwrap_or_else(|| format!("sample_{}", self.family.name()))
    }

    pub fn argv(&self) -> Vec<String> {
        let mut a = vec![
            "sample".into(),
            "--family".into(),
            self.family.name().into(),
            "--n".into(),
            self.n.join(","),
            "--times".into(),
            join(&self.times),
            "--points".into(),
            self.points.to_string(),
        ];
        a.extend(self.well.argv());
        a.extend(["--name".into(), self.stem(), "--out".into(), self.out.out.display().to_string()]);
        a
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Every family; the default when no family is given.
    #[arg(long)]
    pub all: bool,
    /// Restrict to one family.
    #[arg(long, value_enum, conflicts_with = "all")]
    pub family: Option<FamilyArg>,
    /// Run the negative controls, which pass when the underlying checks fail.
    #[arg(long)]
    pub negative_controls: bool,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
    pub times: Vec<f64>,
    #[command(flatten)]
    pub well: WellArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

impl VerifyArgs {
    pub fn argv(&self) -> Vec<String> {
        let mut a = vec!["verify".to_string()];
        if let Some(f) = self.family {
            a.extend(["--family".into(), f.name().into()]);
        } else if self.all {
            a.push("--all".into());
        }
        if self.negative_controls {
            a.push("--negative-controls".into());
        }
        a.extend(["--times".into(), join(&self.times)]);
        a.extend(self.well.argv());
        a.extend(["--out".into(), self.out.out.display().to_string()]);
        a
    }
}

#[derive(Debug, Clone, Args)]
pub struct PropagateArgs {
    #[arg(long, value_enum, default_value = "box")]
    pub family: FamilyArg,
    /// States of an equal-weight superposition of normalized states.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub n: Vec<String>,
    #[arg(long, default_value_t = 0.25, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub to: f64,
    /// Intervals of the fixed grid.
    #[arg(long, default_value_t = 2000)]
    pub nx: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub dt: f64,
    #[command(flatten)]
    pub well: WellArgs,
    #[command(flatten)]
    pub out: OutArgs,
}

impl PropagateArgs {
    pub fn argv(&self) -> Vec<String> {
        let mut a = vec![
            "propagate".into(),
            "--family".into(),
            self.family.name().into(),
            "--n".into(),
            self.n.join(","),
            "--from".into(),
            self.from.to_string(),
            "--to".into(),
            self.to.to_string(),
            "--nx".into(),
            self.nx.to_string(),
            "--dt".into(),
            self.dt.to_string(),
        ];
        a.extend(self.well.argv());
        a.extend(["--out".into(), self.out.out.display().to_string()]);
        a
    }
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    #[arg(long, default_value_t = 801)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutArgs,
}

impl FiguresArgs {
    pub fn argv(&self) -> Vec<String> {
        vec![
            "figures".into(),
            "--points".into(),
            self.points.to_string(),
            "--out".into(),
            self.out.out.display().to_string(),
        ]
    }
}

#[derive(Debug, Clone, Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Write into this directory instead of the recorded one.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
