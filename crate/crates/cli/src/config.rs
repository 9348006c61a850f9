//! Command-line flags and their normalized form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    All,
    Inequalities,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Density {
    Uniform,
    /// Proportional to `κ^{1/(n+1)}`, the density that minimizes the
    /// limiting deficit.
    Asa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Interior,
    Boundary(Density),
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "interior" => Ok(Mode::Interior),
            "boundary" | "boundary:uniform" => Ok(Mode::Boundary(Density::Uniform)),
            "boundary:asa" => Ok(Mode::Boundary(Density::Asa)),
            _ => Err(format!("unknown mode {s:?} (interior, boundary, boundary:uniform, boundary:asa)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Interior => "interior",
            Mode::Boundary(Density::Uniform) => "boundary:uniform",
            Mode::Boundary(Density::Asa) => "boundary:asa",
        })
    }
}

#[derive(Debug, Parser)]
#[command(name = "affsurf", version, about = "Affine surface area experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Body in the mini-language: ball, cube, simplex, bpn:<p>,
    /// ellipsoid:<a>,<b>[,<c>], poly:@<path>.
    #[arg(long, global = true)]
    pub body: Option<String>,
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Number of sphere directions for quadrature and halfspace families.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Affine surface area by quadrature, compared with closed forms.
    Asa {
        /// Report the closed form instead of running the quadrature.
        #[arg(long)]
        closed_form: bool,
    },
    /// Gauss curvature at the boundary point radially through `--point`.
    Curvature {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        point: Vec<f64>,
    },
    /// Floating body deficits and the affine surface area they estimate.
    Floating {
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
    },
    /// Surface measure of the rolling function's superlevel sets.
    Rolling {
        #[arg(long, default_value_t = 10)]
        tgrid: usize,
        #[arg(long, default_value_t = 20000)]
        samples: usize,
    },
    /// Volume deficits of random polytopes.
    Randpoly {
        /// interior, boundary, boundary:uniform or boundary:asa.
        #[arg(long, default_value = "interior")]
        mode: Mode,
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        reps: usize,
    },
    /// Best inscribed polygons of the disk.
    Bestapprox {
        #[arg(long = "N", value_delimiter = ',', required = true)]
        n: Vec<usize>,
    },
    /// Built-in suite of identities and inequalities.
    Check {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Command {
    Asa { closed_form: bool },
    Curvature { point: Vec<f64> },
    Floating { t: Vec<f64> },
    Rolling { tgrid: usize, samples: usize },
    Randpoly { mode: Mode, n: Vec<usize>, reps: usize },
    Bestapprox { n: Vec<usize> },
    Check { suite: Suite },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Asa { .. } => "asa",
            Command::Curvature { .. } => "curvature",
            Command::Floating { .. } => "floating",
            Command::Rolling { .. } => "rolling",
            Command::Randpoly { .. } => "randpoly",
            Command::Bestapprox { .. } => "bestapprox",
            Command::Check { .. } => "check",
        }
    }
}

/// Everything a run depends on. Converting to flags and parsing them back
/// gives the same value.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub body: Option<String>,
    pub dim: Option<usize>,
    pub grid: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

impl From<Cli> for ExperimentConfig {
    fn from(cli: Cli) -> Self {
        let command = match cli.command {
            Sub::Asa { closed_form } => Command::Asa { closed_form },
            Sub::Curvature { point } => Command::Curvature { point },
            Sub::Floating { t } => Command::Floating { t },
            Sub::Rolling { tgrid, samples } => Command::Rolling { tgrid, samples },
            Sub::Randpoly { mode, n, reps } => Command::Randpoly { mode, n, reps },
            Sub::Bestapprox { n } => Command::Bestapprox { n },
            Sub::Check { suite } => Command::Check { suite },
        };
        let c = cli.common;
        ExperimentConfig { command, body: c.body, dim: c.dim, grid: c.grid, seed: c.seed, out: c.out, format: c.format }
    }
}

impl ExperimentConfig {
    pub fn try_parse_from<I, T>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<std::ffi::OsString> + Clone,
    {
        Cli::try_parse_from(args).map(Into::into)
    }

    /// Flags reproducing this configuration, starting with the program name.
    pub fn to_args(&self) -> Vec<String> {
        let mut a: Vec<String> = vec!["affsurf".into(), self.command.name().into()];
        let mut push = |k: &str, v: String| {
            a.push(format!("--{k}"));
            a.push(v);
        };
        match &self.command {
            Command::Asa { .. } | Command::Check { .. } => {}
            Command::Curvature { point } => push("point", join(point)),
            Command::Floating { t } => push("t", join(t)),
            Command::Rolling { tgrid, samples } => {
                push("tgrid", tgrid.to_string());
                push("samples", samples.to_string());
            }
            Command::Randpoly { mode, n, reps } => {
                push("mode", mode.to_string());
                push("N", join(n));
                push("reps", reps.to_string());
            }
            Command::Bestapprox { n } => push("N", join(n)),
        }
        if let Some(b) = &self.body {
            push("body", b.clone());
        }
        if let Some(d) = self.dim {
            push("dim", d.to_string());
        }
        if let Some(g) = self.grid {
            push("grid", g.to_string());
        }
        push("seed", self.seed.to_string());
        if let Some(o) = &self.out {
            push("out", o.display().to_string());
        }
        push(
            "format",
            match self.format {
                Format::Csv => "csv".into(),
                Format::Json => "json".into(),
            },
        );
        match &self.command {
            Command::Asa { closed_form: true } => a.push("--closed-form".into()),
            Command::Check { suite } => a.push(
                match suite {
                    Suite::All => "all",
                    Suite::Inequalities => "inequalities",
                }
                .into(),
            ),
            _ => {}
        }
        a
    }
}
