//! Command-line flags, the optional TOML config file, and the resolved
//! `RunConfig` that fully determines a run.

use bisphere::exact::{DEFAULT_TERMS_CAP, DEFAULT_TOL};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(
    name = "bisphere",
    version,
    about = "Field concentration between two nearly touching conducting spheres"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Q_k(r1, r2) for k = 1..k-max, one row per r2
    QTable,
    /// Exact and limiting concentration factors per eps
    #[command(name = "c-h")]
    #[serde(rename = "c-h")]
    CH,
    /// Exact normal derivatives of h and u - H on the first sphere
    ExactProfile,
    /// Blow-up term of the normal derivative on the first sphere
    BlowupProfile,
    /// Exact normal derivative of u - H against its blow-up term
    Compare,
    /// Gradient magnitude over the x1-x3 plane
    FieldMap,
    /// Convergence of C_H^eps and growth of max q_h over an eps scan
    RateStudy,
    /// Checks every invariant of the model at one configuration
    Invariants,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Command::QTable => "q-table",
            Command::CH => "c-h",
            Command::ExactProfile => "exact-profile",
            Command::BlowupProfile => "blowup-profile",
            Command::Compare => "compare",
            Command::FieldMap => "field-map",
            Command::RateStudy => "rate-study",
            Command::Invariants => "invariants",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Default, Args)]
pub struct Opts {
    /// Radius of the lower sphere
    #[arg(long, global = true)]
    pub r1: Option<f64>,
    /// Radius of the upper sphere (repeatable for q-table)
    #[arg(long, global = true, value_delimiter = ',')]
    pub r2: Vec<f64>,
    /// Gap between the spheres (repeatable)
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub eps: Vec<f64>,
    /// Axial Taylor coefficients b1,b2,... of the external field
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub field: Option<String>,
    /// Relative tolerance for the series
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Maximum number of series terms
    #[arg(long, global = true)]
    pub terms_cap: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Grid resolution NxM
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Polar angles on the first sphere, in units of π
    #[arg(long, global = true, value_delimiter = ',')]
    pub theta_list: Vec<f64>,
    /// Largest k in the Q_k table
    #[arg(long, global = true)]
    pub k_max: Option<u32>,
    /// Significant digits of numeric output
    #[arg(long, global = true)]
    pub digits: Option<usize>,
    /// Half-width of the field-map window
    #[arg(long, global = true)]
    pub extent: Option<f64>,
    /// TOML file with any of the options above; flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// A scalar or a list in the config file.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<f64> {
        match self {
            OneOrMany::One(v) => vec![v],
            OneOrMany::Many(v) => v,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub r1: Option<f64>,
    pub r2: Option<OneOrMany>,
    pub eps: Option<OneOrMany>,
    pub field: Option<OneOrMany>,
    pub tol: Option<f64>,
    pub terms_cap: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub grid: Option<String>,
    pub theta_list: Option<OneOrMany>,
    pub k_max: Option<u32>,
    pub digits: Option<usize>,
    pub extent: Option<f64>,
}

/// Everything a run depends on. Serialized into every output file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub r1: f64,
    pub r2: Vec<f64>,
    pub eps: Vec<f64>,
    /// Axial coefficients `b1, b2, ...` of `H`.
    pub field: Vec<f64>,
    pub tol: f64,
    pub terms_cap: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub grid: [usize; 2],
    /// Units of π.
    pub theta_list: Vec<f64>,
    pub k_max: u32,
    pub digits: usize,
    pub extent: Option<f64>,
}

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

pub const TABLE_THETAS: [f64; 8] = [0.0, 0.15, 0.30, 0.45, 0.60, 0.75, 0.90, 1.00];
pub const TABLE_EPS: [f64; 10] = [1.0, 0.5, 0.05, 0.005, 5e-4, 5e-5, 5e-6, 5e-7, 5e-8, 5e-9];

struct Defaults {
    r1: f64,
    r2: Vec<f64>,
    eps: Vec<f64>,
    grid: [usize; 2],
}

fn defaults(cmd: Command) -> Defaults {
    let base = Defaults {
        r1: 3.0,
        r2: vec![2.0],
        eps: vec![0.1],
        grid: [101, 101],
    };
    match cmd {
        Command::QTable => Defaults {
            r1: 1.0,
            r2: vec![1.0, 0.7, 0.3, 0.1],
            ..base
        },
        Command::CH => Defaults {
            eps: vec![1.0, 0.1, 0.01, 1e-3, 1e-4],
            ..base
        },
        Command::ExactProfile | Command::BlowupProfile | Command::Compare => Defaults {
            eps: TABLE_EPS.to_vec(),
            ..base
        },
        Command::FieldMap => Defaults {
            eps: vec![1e-3],
            ..base
        },
        Command::RateStudy => Defaults {
            eps: vec![1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
            grid: [41, 400],
            ..base
        },
        Command::Invariants => base,
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<f64>, UsageError> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| UsageError(format!("{what}: cannot parse '{t}' as a number")))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<[usize; 2], UsageError> {
    let parts: Vec<&str> = s.split(['x', 'X']).collect();
    if parts.len() != 2 {
        return usage(format!("grid must look like NxM, got '{s}'"));
    }
    let n = parts[0].trim().parse::<usize>();
    let m = parts[1].trim().parse::<usize>();
    match (n, m) {
        (Ok(n), Ok(m)) if n >= 2 && m >= 2 => Ok([n, m]),
        _ => usage(format!("grid needs two integers >= 2, got '{s}'")),
    }
}

impl RunConfig {
    pub fn resolve(command: Command, opts: &Opts) -> Result<Self, UsageError> {
        let file = match &opts.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    UsageError(format!("cannot read config {}: {e}", path.display()))
                })?;
                toml::from_str::<FileConfig>(&text)
                    .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))?
            }
            None => FileConfig::default(),
        };
        let d = defaults(command);
        let pick_list = |flag: &Vec<f64>, file: Option<OneOrMany>, default: Vec<f64>| {
            if !flag.is_empty() {
                flag.clone()
            } else {
                file.map(OneOrMany::into_vec).unwrap_or(default)
            }
        };
        let field = match (&opts.field, file.field) {
            (Some(s), _) => parse_list(s, "field")?,
            (None, Some(f)) => f.into_vec(),
            (None, None) => vec![1.0],
        };
        let grid = match (&opts.grid, &file.grid) {
            (Some(s), _) | (None, Some(s)) => parse_grid(s)?,
            (None, None) => d.grid,
        };
        let cfg = RunConfig {
            command,
            r1: opts.r1.or(file.r1).unwrap_or(d.r1),
            r2: pick_list(&opts.r2, file.r2, d.r2),
            eps: pick_list(&opts.eps, file.eps, d.eps),
            field,
            tol: opts.tol.or(file.tol).unwrap_or(DEFAULT_TOL),
            terms_cap: opts
                .terms_cap
                .or(file.terms_cap)
                .unwrap_or(DEFAULT_TERMS_CAP),
            format: opts.format.or(file.format).unwrap_or(Format::Csv),
            out: opts.out.clone().or(file.out),
            grid,
            theta_list: pick_list(&opts.theta_list, file.theta_list, TABLE_THETAS.to_vec()),
            k_max: opts.k_max.or(file.k_max).unwrap_or(6),
            digits: opts.digits.or(file.digits).unwrap_or(6),
            extent: opts.extent.or(file.extent),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), UsageError> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.r1) || self.r2.is_empty() || !self.r2.iter().all(|&r| positive(r)) {
            return usage("radii must be positive and finite");
        }
        if self.eps.is_empty() || !self.eps.iter().all(|&e| positive(e)) {
            return usage("every eps must be positive and finite");
        }
        if self.command != Command::QTable && self.r2.len() != 1 {
            return usage(format!("{} takes a single --r2", self.command));
        }
        if matches!(self.command, Command::FieldMap | Command::Invariants) && self.eps.len() != 1 {
            return usage(format!("{} takes a single --eps", self.command));
        }
        if !self.field.iter().all(|b| b.is_finite()) {
            return usage("field coefficients must be finite");
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return usage("tol must lie in (0, 1)");
        }
        if self.terms_cap == 0 {
            return usage("terms-cap must be at least 1");
        }
        if self.k_max == 0 {
            return usage("k-max must be at least 1");
        }
        if !(1..=17).contains(&self.digits) {
            return usage("digits must lie in 1..=17");
        }
        if !self.theta_list.iter().all(|&t| (0.0..=1.0).contains(&t)) {
            return usage("theta values are in units of π and must lie in [0, 1]");
        }
        if let Some(x) = self.extent {
            if !positive(x) {
                return usage("extent must be positive");
            }
        }
        Ok(())
    }

    pub fn r2_single(&self) -> f64 {
        self.r2[0]
    }

    /// The external field as an `AxialField`.
    pub fn axial_field(&self) -> bisphere::AxialField {
        bisphere::AxialField::new(self.field.clone())
    }

    /// `E0` when the field is uniform.
    pub fn uniform_e0(&self) -> Option<f64> {
        match self.field.split_first() {
            Some((&e0, rest)) if rest.iter().all(|&b| b == 0.0) => Some(e0),
            None => Some(0.0),
            _ => None,
        }
    }
}
