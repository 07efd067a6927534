use clap::{Args, Parser, Subcommand, ValueEnum};
use ellidelta::cnum::parse_complex;
use ellidelta::identities::IdentityId;
use ellidelta::C64;

fn complex(s: &str) -> Result<C64, String> {
    parse_complex(s).map_err(|e| e.to_string())
}

fn identity(s: &str) -> Result<IdentityId, String> {
    s.parse().map_err(|e: ellidelta::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ellidelta", version, about = "Elliptic Askey-Wilson operator, Taylor expansions and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Base q, as `re`, `re+imi` or `re-imi`.
    #[arg(long, global = true, default_value = "0.35", value_parser = complex, allow_hyphen_values = true)]
    pub q: C64,
    /// Nome p; 0 is the basic case.
    #[arg(long, global = true, default_value = "0", value_parser = complex, allow_hyphen_values = true)]
    pub p: C64,
    /// Verdict tolerance; defaults depend on the command and identity.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub output: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// Basic `phi` series (p = 0).
    Phi,
    /// Terminating elliptic `E` series.
    E,
    /// Terminating very-well-poised `V` series.
    V,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExpandKind {
    /// `(bz, b/z; q, p)_n / (cz, c/z; q, p)_n`, compared with its closed-form coefficients.
    WpMonomial,
    /// A single basis element `m`; the coefficients must be the unit vector.
    Basis,
    /// The biorthogonal rational function `R_n(z; b, c, d, e, f)`.
    Rn,
}

#[derive(Debug, Args, Default, Clone)]
pub struct ParamFlags {
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub a: Option<C64>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub b: Option<C64>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub c: Option<C64>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub d: Option<C64>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub e: Option<C64>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub f: Option<C64>,
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub z: Option<C64>,
}

impl ParamFlags {
    pub fn get(&self, name: &str) -> Option<C64> {
        match name {
            "a" => self.a,
            "b" => self.b,
            "c" => self.c,
            "d" => self.d,
            "e" => self.e,
            "f" => self.f,
            "z" => self.z,
            _ => None,
        }
    }

    pub fn given(&self) -> Vec<&'static str> {
        ["a", "b", "c", "d", "e", "f", "z"].into_iter().filter(|k| self.get(k).is_some()).collect()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate theta(x; p) at each point.
    EvalTheta {
        #[arg(long, required = true, value_delimiter = ',', value_parser = complex, allow_hyphen_values = true)]
        x: Vec<C64>,
    },
    /// Sum a hypergeometric series.
    EvalSeries {
        #[arg(long, value_enum, default_value_t = SeriesKind::Phi)]
        kind: SeriesKind,
        /// Upper parameters (phi and E).
        #[arg(long, value_delimiter = ',', value_parser = complex, allow_hyphen_values = true)]
        upper: Vec<C64>,
        /// Lower parameters (phi and E).
        #[arg(long, value_delimiter = ',', value_parser = complex, allow_hyphen_values = true)]
        lower: Vec<C64>,
        /// Special parameter a_1 (V).
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        a1: Option<C64>,
        /// a_6 ... a_s (V); q^{-n} is appended.
        #[arg(long, value_delimiter = ',', value_parser = complex, allow_hyphen_values = true)]
        free: Vec<C64>,
        /// Series argument; defaults to 1.
        #[arg(long, value_parser = complex, allow_hyphen_values = true)]
        z: Option<C64>,
        /// Terminating index; required for E and V.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Elliptic Taylor coefficients in the basis with anchors a, c.
    Expand {
        #[arg(long, value_enum)]
        kind: ExpandKind,
        #[arg(long)]
        n: usize,
        /// Basis element index for `--kind basis`; defaults to n.
        #[arg(long)]
        m: Option<usize>,
        /// Also solve the collocation system and report its coefficients.
        #[arg(long)]
        oracle: bool,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Verify one identity at the given parameters.
    Verify {
        #[arg(value_parser = identity)]
        identity: IdentityId,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[command(flatten)]
        params: ParamFlags,
    },
    /// Verify an identity at seeded random parameters.
    Sweep {
        #[arg(value_parser = identity)]
        identity: IdentityId,
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, env = "ELLIDELTA_SEED")]
        seed: Option<u64>,
        /// Worker threads; output order is by sample index regardless.
        #[arg(long)]
        jobs: Option<usize>,
        /// Largest degree drawn.
        #[arg(long)]
        n_max: Option<usize>,
        /// Redraw samples whose cancellation ratio exceeds this.
        #[arg(long)]
        condition_limit: Option<f64>,
    },
}
