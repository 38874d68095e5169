use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use wnk_spectra::analysis::DEFAULT_ATOM_TOL;
use wnk_spectra::graph::DEFAULT_SIZE_CAP;
use wnk_spectra::spectral::{DEFAULT_CLUSTER_TOL, DEFAULT_SOLVER_TOL};

/// Spectra of the W(n,k) family, its truncations, and subcubic bipartite
/// median-eigenvalue experiments.
#[derive(Debug, Parser)]
#[command(name = "wnk", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Largest scaled residual accepted from the eigensolver.
    #[arg(long, global = true, default_value_t = DEFAULT_SOLVER_TOL)]
    pub tol: f64,
    /// Eigenvalues closer than this are reported as one cluster.
    #[arg(long, global = true, default_value_t = DEFAULT_CLUSTER_TOL)]
    pub cluster_tol: f64,
    /// Distance within which an eigenvalue counts as +-1.
    #[arg(long, global = true, default_value_t = DEFAULT_ATOM_TOL)]
    pub atom_tol: f64,
    /// Maximum graph order.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    pub cap: usize,
    /// Worker threads; 1 runs everything sequentially. Defaults to all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file (generate, spectrum) or directory (verify, esd, scan).
    /// Directory defaults to $WNK_OUT_DIR, then `wnk-out`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Wnk,
    Pnk,
    Heawood,
    Cycle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Numeric,
    ClosedForm,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph and write it as a graph file.
    Generate(FamilyOpts),
    /// Compute a spectrum numerically, in closed form, or both.
    Spectrum(SpectrumOpts),
    /// Check W(n,k) spectra against the closed form and the spectral gaps.
    Verify(VerifyOpts),
    /// Empirical spectral distribution of P(n,k) against the Z_k limit.
    Esd(EsdOpts),
    /// Hunt for subcubic bipartite graphs with median eigenvalues outside [-1, 1].
    Scan(ScanOpts),
}

#[derive(Debug, Args)]
pub struct FamilyOpts {
    #[arg(long, value_enum)]
    pub family: Option<FamilyArg>,
    /// Number of rings (cycle length for `cycle`).
    #[arg(long)]
    pub n: Option<usize>,
    /// Ring half-size.
    #[arg(long)]
    pub k: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SpectrumOpts {
    /// Read the graph from a graph file instead of building it.
    #[arg(long = "in", value_name = "PATH", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyOpts,
    #[arg(long, value_enum, default_value_t = Method::Numeric)]
    pub method: Method,
}

#[derive(Debug, Args)]
pub struct VerifyOpts {
    #[arg(long, conflicts_with = "grid_n")]
    pub n: Option<usize>,
    #[arg(long, conflicts_with = "grid_k")]
    pub k: Option<usize>,
    /// Inclusive range `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    pub grid_n: Option<(usize, usize)>,
    /// Inclusive range `lo:hi`.
    #[arg(long, value_parser = parse_range)]
    pub grid_k: Option<(usize, usize)>,
    /// Tolerance for spectrum, median and band comparisons.
    #[arg(long, default_value_t = 1e-8)]
    pub check_tol: f64,
    /// Also run the proof-machinery, interlacing and P(n,k) exception checks.
    #[arg(long)]
    pub extended: bool,
}

#[derive(Debug, Args)]
pub struct EsdOpts {
    #[arg(long)]
    pub k: usize,
    #[arg(long, conflicts_with = "n_list")]
    pub n: Option<usize>,
    /// Comma-separated, strictly ascending.
    #[arg(long, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Histogram bins per band.
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
}

#[derive(Debug, Args)]
pub struct ScanOpts {
    /// Inclusive order range `lo:hi`.
    #[arg(long, value_parser = parse_range, default_value = "4:16")]
    pub orders: (usize, usize),
    /// Random graphs per order.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Scan only the fixed catalog.
    #[arg(long)]
    pub catalog_only: bool,
    /// Leave the fixed catalog out of a random scan.
    #[arg(long, conflicts_with = "catalog_only")]
    pub no_catalog: bool,
    /// Also run the exhaustive pass over cubic bipartite graphs on 14 vertices.
    #[arg(long)]
    pub enumerate_cubic14: bool,
}

/// `lo:hi`, inclusive. Emptiness is checked by the command so it can exit
/// with a parameter error rather than a parse error.
pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|e| format!("bad lower bound `{lo}`: {e}"))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|e| format!("bad upper bound `{hi}`: {e}"))?;
    Ok((lo, hi))
}
