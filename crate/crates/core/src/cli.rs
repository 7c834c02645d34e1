//! Command-line front end.
//!
//! Every subcommand's parameters form a [`RunConfig`], which is echoed into
//! the header of each file the run writes. A config saved as JSON can be
//! replayed with `run --config FILE`; unknown keys are rejected. Exit codes:
//! `0` success, `2` usage or parameter error, `3` domain error.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::Error;
use crate::experiments::{
    f_scatter, fmt_float, pseudospectrum, sigma_min, truncation_scaling, write_csv, CsvRow, GridSpec, ScalingRow,
    TruncationModel,
};
use crate::gallery::{
    almost_commuting_pair, laurent_multiplication, perturbed_normal, random_normal, shift_example, EnsembleSpec,
    LaurentSymbol, PairBounds,
};
use crate::linalg::{normal_spectral_decomp, normality_defect, CMatrix, SchattenP};
use crate::nearest::{nearest_normal, MaximizeOptions};
use crate::partition::{finite_spectrum_approx, square_cover, Cover, Disc, Region};
use crate::surgery::{graph_normal_approx, remove_arc, remove_region, transport, PlaneMap};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure of a CLI run, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Library(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_domain() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Library(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Library(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// `re,im` or a bare real number.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(format!("expected `re,im`, got {s:?}")),
    };
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(format!("non-finite value {s:?}"))
    }
}

/// `n:re:im` (or `n:re`) Laurent coefficient.
fn parse_term(s: &str) -> std::result::Result<(i64, f64, f64), String> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    let bad = || format!("expected `n:re:im`, got {s:?}");
    let n = parts.first().ok_or_else(bad)?.parse::<i64>().map_err(|_| bad())?;
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad());
    match parts.as_slice() {
        [_, re] => Ok((n, num(re)?, 0.0)),
        [_, re, im] => Ok((n, num(re)?, num(im)?)),
        _ => Err(bad()),
    }
}

/// Semicolon-separated list of complex numbers on the command line.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexList(pub Vec<Complex64>);

fn parse_complex_list(s: &str) -> std::result::Result<ComplexList, String> {
    s.split(';')
        .filter(|t| !t.trim().is_empty())
        .map(parse_complex)
        .collect::<std::result::Result<_, _>>()
        .map(ComplexList)
}

// ---------------------------------------------------------------------------
// matrix files

/// Free-form description stored next to the matrix data.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixMetadata {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub generator: Option<String>,
}

/// Version and configuration of the run that wrote a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileHeader {
    pub version: String,
    pub config: Value,
}

impl FileHeader {
    pub fn new(config: &RunConfig) -> Self {
        FileHeader {
            version: VERSION.to_string(),
            config: serde_json::to_value(config).expect("config serializes"),
        }
    }
}

/// JSON matrix document: `data` holds `dim` rows of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default)]
    pub header: Option<FileHeader>,
    pub dim: usize,
    #[serde(default)]
    pub metadata: MatrixMetadata,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix, metadata: MatrixMetadata, header: Option<FileHeader>) -> Self {
        let n = m.dim();
        MatrixFile {
            header,
            dim: n,
            metadata,
            data: (0..n)
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn to_matrix(&self) -> crate::Result<CMatrix> {
        if self.data.len() != self.dim || self.data.iter().any(|r| r.len() != self.dim) {
            return Err(Error::invalid(format!("matrix data is not {0}×{0}", self.dim)));
        }
        let entries = self
            .data
            .iter()
            .flatten()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        CMatrix::new(self.dim, entries)
    }

    /// One JSON object on a single line.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix file serializes")
    }

    pub fn parse(text: &str) -> crate::Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::invalid(format!("bad matrix file: {e}")))?;
        file.to_matrix()?;
        Ok(file)
    }
}

/// Reads rows of `re,im` cells separated by whitespace or `;`. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_csv_matrix(text: &str) -> crate::Result<CMatrix> {
    let rows: Vec<Vec<Complex64>> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|line| {
            line.split(|c: char| c == ';' || c.is_whitespace())
                .filter(|cell| !cell.is_empty())
                .map(|cell| parse_complex(cell).map_err(Error::invalid))
                .collect()
        })
        .collect::<crate::Result<_>>()?;
    CMatrix::from_rows(&rows)
}

pub fn read_matrix(path: &Path) -> CliResult<CMatrix> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        Ok(MatrixFile::parse(&text)?.to_matrix()?)
    } else {
        Ok(parse_csv_matrix(&text)?)
    }
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn write_matrix(path: &Path, m: &CMatrix, metadata: MatrixMetadata, config: &RunConfig) -> CliResult<()> {
    let file = MatrixFile::from_matrix(m, metadata, Some(FileHeader::new(config)));
    write_text(path, &(file.to_json() + "\n"))
}

fn write_json_report(path: Option<&Path>, config: &RunConfig, body: Value) -> CliResult<()> {
    let doc = json!({ "header": FileHeader::new(config), "report": body });
    let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    match path {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn csv_preamble(config: &RunConfig) -> Vec<String> {
    vec![
        format!("almost-normal {VERSION}"),
        format!("config: {}", serde_json::to_string(config).expect("config serializes")),
    ]
}

fn write_csv_file<R: CsvRow>(path: &Path, preamble: &[String], rows: &[R]) -> CliResult<()> {
    let mut buf = Vec::new();
    write_csv(&mut buf, preamble, rows)?;
    write_text(path, std::str::from_utf8(&buf).expect("csv is utf-8"))
}

fn matrix_rows(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    MatrixFile::from_matrix(m, MatrixMetadata::default(), None).data
}

// ---------------------------------------------------------------------------
// arguments and run configurations

#[derive(Debug, Parser)]
#[command(
    name = "almost-normal",
    version,
    about = "Distances to normal matrices, spectral covers and spectrum surgery"
)]
pub struct Cli {
    /// Worker threads for internal parallelism (default: number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a generated matrix (or pair) to disk.
    Gallery(GalleryArgs),
    /// Nearest normal matrix and distance report.
    Nearest(NearestArgs),
    /// Finite-spectrum approximation from a square or explicit cover.
    Partition(PartitionArgs),
    /// Spectrum surgery on a normal matrix.
    Surgery(SurgeryArgs),
    /// Truncation inequalities for a Laurent multiplication model.
    Truncate(TruncateArgs),
    /// Grid ε-pseudospectrum.
    Pseudospec(PseudospecArgs),
    /// Commutator defect versus distance to the normal matrices.
    Scatter(ScatterArgs),
    /// Replay a saved run configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

/// Fully resolved parameters of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case", deny_unknown_fields)]
pub enum RunConfig {
    Gallery(GalleryArgs),
    Nearest(NearestArgs),
    Partition(PartitionArgs),
    Surgery(SurgeryArgs),
    Truncate(TruncateArgs),
    Pseudospec(PseudospecArgs),
    Scatter(ScatterArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GalleryKind {
    /// `A e_{2i} = e_{2i−1}` (needs even `--m`).
    Shift,
    /// Almost-commuting pair `A`, `B` of size `m + 1`.
    Pair,
    /// Random normal matrix plus a scaled Gaussian perturbation.
    Perturbed,
    /// Random normal matrix with eigenvalues in the unit disc.
    Normal,
    /// Laurent multiplication window.
    Laurent,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GalleryArgs {
    #[arg(value_enum)]
    pub kind: GalleryKind,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Laurent coefficient `n:re:im`; repeatable.
    #[arg(long = "coeff", value_parser = parse_term, allow_hyphen_values = true)]
    #[serde(default)]
    pub coeffs: Vec<(i64, f64, f64)>,
    #[arg(long)]
    pub window: Option<usize>,
    /// Output file (`pair` writes `A.json` and `B.json` into `--out-dir`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NearestArgs {
    pub matrix: PathBuf,
    /// Schatten exponents, e.g. `1,2,inf`.
    #[arg(long = "p", value_delimiter = ',', default_value = "2")]
    pub p: Vec<SchattenP>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_sweeps: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub obj_tol: f64,
    /// Report path (stdout when omitted).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the normal witness.
    #[arg(long)]
    pub witness: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionArgs {
    pub matrix: PathBuf,
    /// Side of the lattice squares.
    #[arg(long, conflicts_with = "cover", required_unless_present = "cover")]
    pub side: Option<f64>,
    /// JSON list of regions.
    #[arg(long)]
    pub cover: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the approximant `T`.
    #[arg(long)]
    pub approx: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SurgeryOp {
    RemoveDisc,
    RemoveArc,
    Transport,
    Graph,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    RadialCollapse,
    Affine,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurgeryArgs {
    pub matrix: PathBuf,
    #[arg(long, value_enum)]
    pub op: SurgeryOp,
    /// Disc center `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub center: Option<Complex64>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Anchor `μ` inside the disc (default: the center).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub anchor: Option<Complex64>,
    /// Chord endpoint `e₋`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub minus: Option<Complex64>,
    /// Chord endpoint `e₊`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub plus: Option<Complex64>,
    #[arg(long)]
    pub chord_tol: Option<f64>,
    #[arg(long, value_enum)]
    pub map: Option<MapKind>,
    /// Affine coefficient `a` in `z ↦ a·z + b`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub a: Option<Complex64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub b: Option<Complex64>,
    #[arg(long)]
    pub eps: Option<f64>,
    /// Output matrix file.
    #[arg(long)]
    pub out: PathBuf,
    /// Report path (stdout when omitted).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncateArgs {
    /// Symbol coefficient `n:re:im`; repeatable (default: the shift `1:1:0`).
    #[arg(long = "coeff", value_parser = parse_term, allow_hyphen_values = true)]
    #[serde(default)]
    pub coeffs: Vec<(i64, f64, f64)>,
    #[arg(long)]
    pub window: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    pub lambda: Vec<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PseudospecArgs {
    pub matrix: PathBuf,
    #[arg(long)]
    pub eps: f64,
    /// Grid center `re,im`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0,0")]
    pub center: Complex64,
    /// Half-width of the grid square (default: `‖A‖ + ε`).
    #[arg(long)]
    pub half_width: Option<f64>,
    #[arg(long, default_value_t = GridSpec::DEFAULT_RESOLUTION)]
    pub resolution: usize,
    /// Reference points `re,im;re,im;…`.
    #[arg(long, value_parser = parse_complex_list, allow_hyphen_values = true)]
    #[serde(default)]
    pub reference: Option<ComplexList>,
    /// CSV of member points.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterArgs {
    /// JSON list of ensemble members.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    /// Shift examples of these (even) sizes.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub shift: Vec<usize>,
    /// Perturbed normal members with these δ values.
    #[arg(long, value_delimiter = ',')]
    #[serde(default)]
    pub delta: Vec<f64>,
    #[arg(long, default_value_t = 8)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub restarts: usize,
    /// Members resolved from the flags above (filled in by the run).
    #[arg(skip)]
    #[serde(default)]
    pub members: Vec<EnsembleSpec>,
    #[arg(long)]
    pub out: PathBuf,
}

// ---------------------------------------------------------------------------
// commands

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| usage(format!("missing --{flag}")))
}

fn cmd_gallery(args: &GalleryArgs, config: &RunConfig) -> CliResult<()> {
    let out = || args.out.clone().ok_or_else(|| usage("missing --out"));
    let meta = |generator: &str, seed: Option<u64>| MatrixMetadata {
        name: Some(generator.to_string()),
        seed,
        generator: Some(generator.to_string()),
    };
    match args.kind {
        GalleryKind::Shift => {
            let a = shift_example(need(args.m, "m")?)?;
            write_matrix(&out()?, &a, meta("shift_example", None), config)
        }
        GalleryKind::Pair => {
            let m = need(args.m, "m")?;
            let dir = args.out_dir.clone().ok_or_else(|| usage("missing --out-dir"))?;
            let (a, b) = almost_commuting_pair(m)?;
            let bounds = PairBounds::measure(&a, &b);
            bounds.certify(m)?;
            let mut ma = meta("almost_commuting_pair", None);
            ma.name = Some("A".into());
            let mut mb = ma.clone();
            mb.name = Some("B".into());
            write_matrix(&dir.join("A.json"), &a, ma, config)?;
            write_matrix(&dir.join("B.json"), &b, mb, config)?;
            write_json_report(
                None,
                config,
                json!({
                    "m": m,
                    "norm_a": bounds.norm_a,
                    "norm_b": bounds.norm_b,
                    "self_commutator_b": bounds.self_commutator_b,
                    "commutator_ab": bounds.commutator_ab,
                    "bound_self_commutator_b": 4.0 / m as f64,
                    "bound_commutator_ab": 2.0 / m as f64,
                }),
            )
        }
        GalleryKind::Perturbed => {
            let seed = need(args.seed, "seed")?;
            let a = perturbed_normal(need(args.dim, "dim")?, need(args.delta, "delta")?, seed)?;
            write_matrix(&out()?, &a, meta("perturbed_normal", Some(seed)), config)
        }
        GalleryKind::Normal => {
            let seed = need(args.seed, "seed")?;
            let dim = need(args.dim, "dim")?;
            if dim == 0 {
                return Err(usage("--dim must be positive"));
            }
            let a = random_normal(dim, seed).matrix;
            write_matrix(&out()?, &a, meta("random_normal", Some(seed)), config)
        }
        GalleryKind::Laurent => {
            let w = laurent_multiplication(&symbol(&args.coeffs), need(args.window, "window")?)?;
            write_matrix(&out()?, &w.a, meta("laurent_multiplication", None), config)
        }
    }
}

fn symbol(coeffs: &[(i64, f64, f64)]) -> LaurentSymbol {
    if coeffs.is_empty() {
        LaurentSymbol::shift()
    } else {
        let terms: Vec<(i64, Complex64)> = coeffs.iter().map(|&(n, re, im)| (n, Complex64::new(re, im))).collect();
        LaurentSymbol::from_terms(&terms)
    }
}

fn schatten_map(v: &[(SchattenP, f64)]) -> Value {
    Value::Object(v.iter().map(|(p, x)| (p.to_string(), json!(x))).collect())
}

fn cmd_nearest(args: &NearestArgs, config: &RunConfig) -> CliResult<()> {
    let a = read_matrix(&args.matrix)?;
    if args.restarts == 0 {
        return Err(usage("--restarts must be at least 1"));
    }
    let opts = MaximizeOptions {
        max_sweeps: args.max_sweeps,
        obj_tol: args.obj_tol,
        restarts: args.restarts,
        seed: args.seed,
    };
    let r = nearest_normal(&a, &args.p, &opts);
    if let Some(path) = &args.witness {
        write_matrix(
            path,
            &r.witness,
            MatrixMetadata {
                name: Some("witness".into()),
                seed: Some(args.seed),
                generator: Some("nearest_normal".into()),
            },
            config,
        )?;
    }
    write_json_report(
        args.out.as_deref(),
        config,
        json!({
            "dim": a.dim(),
            "frobenius_exact": r.frobenius_exact,
            "distances": schatten_map(&r.distances),
            "lower_bounds": schatten_map(&r.lower_bounds),
            "witness_normality_defect": normality_defect(&r.witness),
            "sweeps": r.sweeps,
            "converged": r.converged,
            "objective_history": r.objective_history,
        }),
    )
}

fn cmd_partition(args: &PartitionArgs, config: &RunConfig) -> CliResult<()> {
    let a = read_matrix(&args.matrix)?;
    let decomp = normal_spectral_decomp(&a)?;
    let cover = match (&args.cover, args.side) {
        (Some(path), _) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            let regions: Vec<Region> =
                serde_json::from_str(&text).map_err(|e| usage(format!("bad cover file: {e}")))?;
            Cover::new(regions)?
        }
        (None, Some(side)) => square_cover(decomp.eigenvalues(), side)?,
        (None, None) => return Err(usage("one of --side or --cover is required")),
    };
    let approx = finite_spectrum_approx(&decomp, &cover)?;
    if let Some(path) = &args.approx {
        write_matrix(
            path,
            &approx.approximant,
            MatrixMetadata {
                name: Some("approximant".into()),
                seed: None,
                generator: Some("finite_spectrum_approx".into()),
            },
            config,
        )?;
    }
    let res = &approx.resolution;
    let projections: Vec<Value> = res
        .projections
        .iter()
        .zip(&res.labels)
        .zip(&res.cover.regions)
        .map(|((p, z), region)| {
            json!({
                "region": region,
                "label": [z.re, z.im],
                "rank": p.trace().re.round() as i64,
                "matrix": matrix_rows(p),
            })
        })
        .collect();
    write_json_report(
        args.out.as_deref(),
        config,
        json!({
            "dim": a.dim(),
            "regions": cover.len(),
            "multiplicity": approx.multiplicity,
            "max_diameter": cover.max_diameter(),
            "error_bound": approx.error_bound,
            "error_actual": approx.error_actual,
            "eigenvalue_displacement": approx.eigenvalue_displacement(&decomp),
            "pass": approx.error_actual <= approx.error_bound,
            "projections": projections,
        }),
    )
}

fn cmd_surgery(args: &SurgeryArgs, config: &RunConfig) -> CliResult<()> {
    let a = read_matrix(&args.matrix)?;
    let decomp = normal_spectral_decomp(&a)?;
    let disc = || -> CliResult<Disc> { Ok(Disc::new(need(args.center, "center")?, need(args.radius, "radius")?)?) };
    let meta = MatrixMetadata {
        name: Some(format!("{:?}", args.op)),
        seed: None,
        generator: Some("surgery".into()),
    };
    let (output, report) = match args.op {
        SurgeryOp::RemoveDisc => {
            let d = disc()?;
            let r = remove_region(&decomp, &d, args.anchor.unwrap_or(d.center))?;
            let report = json!({
                "moved_count": r.moved_count,
                "perturbation_norm": r.perturbation_norm,
                "bound": r.bound,
                "output_normality_defect": normality_defect(&r.output),
            });
            (r.output, report)
        }
        SurgeryOp::RemoveArc => {
            let d = disc()?;
            let r = remove_arc(
                &decomp,
                &d,
                need(args.minus, "minus")?,
                need(args.plus, "plus")?,
                args.chord_tol,
            )?;
            let report = json!({
                "moved_count": r.moved_count,
                "perturbation_norm": r.perturbation_norm,
                "bound": r.bound,
                "output_normality_defect": normality_defect(&r.output),
            });
            (r.output, report)
        }
        SurgeryOp::Transport => {
            let map = match need(args.map, "map")? {
                MapKind::RadialCollapse => PlaneMap::RadialCollapse { disc: disc()? },
                MapKind::Affine => PlaneMap::affine(need(args.a, "a")?, args.b.unwrap_or_default())?,
            };
            let out = transport(&decomp, &map);
            let report = json!({
                "map": map,
                "perturbation_norm": crate::linalg::operator_norm(&(&a - &out)),
                "output_normality_defect": normality_defect(&out),
            });
            (out, report)
        }
        SurgeryOp::Graph => {
            let g = graph_normal_approx(&decomp, need(args.eps, "eps")?)?;
            let report = json!({
                "graph": g.report,
                "graph_residual": g.graph_residual(),
                "output_normality_defect": normality_defect(&g.output),
            });
            (g.output, report)
        }
    };
    write_matrix(&args.out, &output, meta, config)?;
    write_json_report(args.report.as_deref(), config, report)
}

fn cmd_truncate(args: &TruncateArgs, config: &RunConfig) -> CliResult<()> {
    let window = laurent_multiplication(&symbol(&args.coeffs), args.window)?;
    let model = TruncationModel::from_laurent(&window)?;
    let opts = MaximizeOptions {
        restarts: args.restarts.max(1),
        ..MaximizeOptions::new(args.seed)
    };
    let rows: Vec<ScalingRow> = truncation_scaling(&model, &args.lambda, &opts)?;
    let mut preamble = csv_preamble(config);
    preamble.push(format!(
        "norm_A={} norm_commutator_GA={} edge_guard=K/2={}",
        fmt_float(model.norm_a),
        fmt_float(model.norm_commutator_ga),
        fmt_float(args.window as f64 / 2.0)
    ));
    write_csv_file(&args.out, &preamble, &rows)
}

struct MemberRow {
    z: Complex64,
    sigma_min: f64,
}

impl CsvRow for MemberRow {
    fn header() -> &'static [&'static str] {
        &["re", "im", "sigma_min"]
    }

    fn record(&self) -> Vec<String> {
        vec![fmt_float(self.z.re), fmt_float(self.z.im), fmt_float(self.sigma_min)]
    }
}

fn cmd_pseudospec(args: &PseudospecArgs) -> CliResult<()> {
    let a = read_matrix(&args.matrix)?;
    let half_width = match args.half_width {
        Some(h) => h,
        None => crate::linalg::operator_norm(&a) + args.eps,
    };
    let config = &RunConfig::Pseudospec(PseudospecArgs {
        half_width: Some(half_width),
        ..args.clone()
    });
    let grid = GridSpec {
        center: args.center,
        half_width,
        resolution: args.resolution,
    };
    let reference = args.reference.clone().unwrap_or_default().0;
    let r = pseudospectrum(&a, args.eps, &grid, &reference)?;
    let rows: Vec<MemberRow> = r
        .members
        .iter()
        .map(|&z| MemberRow {
            z,
            sigma_min: sigma_min(&a, z),
        })
        .collect();
    let mut preamble = csv_preamble(config);
    preamble.push(format!(
        "members={} grid_step={} d_eps={}",
        rows.len(),
        fmt_float(grid.step()),
        r.d_eps.map(fmt_float).unwrap_or_else(|| "undefined".into())
    ));
    write_csv_file(&args.out, &preamble, &rows)?;
    write_json_report(
        args.report.as_deref(),
        config,
        json!({
            "epsilon": args.eps,
            "grid": grid,
            "grid_step": grid.step(),
            "grid_points": grid.resolution * grid.resolution,
            "members": rows.len(),
            "d_eps": r.d_eps,
        }),
    )
}

fn scatter_members(args: &ScatterArgs) -> CliResult<Vec<EnsembleSpec>> {
    let mut members = args.members.clone();
    if let Some(path) = &args.ensemble {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let listed: Vec<EnsembleSpec> =
            serde_json::from_str(&text).map_err(|e| usage(format!("bad ensemble file: {e}")))?;
        members.extend(listed);
    }
    members.extend(args.shift.iter().map(|&m| EnsembleSpec::ShiftExample { m }));
    members.extend(args.delta.iter().map(|&delta| EnsembleSpec::PerturbedNormal {
        dim: args.dim,
        delta,
        seed: args.seed,
    }));
    Ok(members)
}

fn cmd_scatter(args: &ScatterArgs) -> CliResult<()> {
    // resolve the ensemble so the echoed config lists every member
    let resolved = ScatterArgs {
        ensemble: None,
        shift: Vec::new(),
        delta: Vec::new(),
        members: scatter_members(args)?,
        ..args.clone()
    };
    let config = RunConfig::Scatter(resolved.clone());
    let opts = MaximizeOptions {
        restarts: args.restarts.max(1),
        ..MaximizeOptions::new(args.seed)
    };
    let rows = f_scatter(&resolved.members, &opts)?;
    write_csv_file(&args.out, &csv_preamble(&config), &rows)
}

/// Executes one resolved configuration.
pub fn execute(config: &RunConfig) -> CliResult<()> {
    match config {
        RunConfig::Gallery(a) => cmd_gallery(a, config),
        RunConfig::Nearest(a) => cmd_nearest(a, config),
        RunConfig::Partition(a) => cmd_partition(a, config),
        RunConfig::Surgery(a) => cmd_surgery(a, config),
        RunConfig::Truncate(a) => cmd_truncate(a, config),
        RunConfig::Pseudospec(a) => cmd_pseudospec(a),
        RunConfig::Scatter(a) => cmd_scatter(a),
    }
}

fn resolve(command: Command) -> CliResult<RunConfig> {
    Ok(match command {
        Command::Gallery(a) => RunConfig::Gallery(a),
        Command::Nearest(a) => RunConfig::Nearest(a),
        Command::Partition(a) => RunConfig::Partition(a),
        Command::Surgery(a) => RunConfig::Surgery(a),
        Command::Truncate(a) => RunConfig::Truncate(a),
        Command::Pseudospec(a) => RunConfig::Pseudospec(a),
        Command::Scatter(a) => RunConfig::Scatter(a),
        Command::Run { config } => {
            let text = fs::read_to_string(&config).map_err(|e| CliError::Io(format!("{}: {e}", config.display())))?;
            serde_json::from_str(&text).map_err(|e| usage(format!("bad run config: {e}")))?
        }
    })
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match resolve(cli.command).and_then(|config| execute(&config)) {
        Ok(()) => {
            let _ = std::io::stdout().flush();
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
