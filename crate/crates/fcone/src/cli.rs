//! The `fcone` command line front end.
//!
//! Machine-readable output goes to stdout, diagnostics to stderr. Exit
//! codes: 0 on success, 1 on a domain error (an operation rejected its
//! input), 2 on usage errors including malformed JSON. Repeated runs of
//! a command produce byte-identical stdout.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::ample_model::{classify, sweep, ChamberRecord, GridSpec, SweepSummary};
use crate::divisor::{AdjointParams, DivisorClass, Space};
use crate::error::DomainError;
use crate::fcurve::{enumerate_fcurves, intersect, FCurve};
use crate::geometry::{descends, factorize, is_q_factorial};
use crate::index_set::{MarkedGenus, TSubset, TSubsetWire};
use crate::positivity::{brute_force_verdict, ps_verdict, PositivityStatus, PositivityVerdict};

#[derive(Parser)]
#[command(
    name = "fcone",
    version,
    about = "Exact divisor calculus on moduli of stable pointed curves"
)]
pub struct Cli {
    /// Seed for sampled subcommands; accepted for reproducibility even
    /// though every current subcommand is fully deterministic.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// The boundary index set of (g, n)
    Indices {
        #[command(subcommand)]
        cmd: IndicesCmd,
    },
    /// Admissible subsets of the boundary index set
    Admissible {
        #[command(subcommand)]
        cmd: AdmissibleCmd,
    },
    /// F-curves up to numerical equivalence
    Fcurves {
        #[command(subcommand)]
        cmd: FcurvesCmd,
    },
    /// Intersection number of a divisor class with an F-curve
    Intersect {
        /// Divisor class JSON file
        #[arg(long)]
        divisor: PathBuf,
        /// F-curve JSON file
        #[arg(long)]
        curve: PathBuf,
    },
    /// F-nef and F-ample testing
    Nef {
        #[command(subcommand)]
        cmd: NefCmd,
    },
    /// Ample-model classification of adjoint divisors
    #[command(name = "ample-model")]
    AmpleModel {
        #[command(subcommand)]
        cmd: AmpleModelCmd,
    },
    /// Classify every point of a coefficient grid into chambers
    Sweep {
        /// Grid specification JSON file
        #[arg(long)]
        spec: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Optional SVG rendering of a 2D slice
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Properties of the compactification attached to a subset
    Space {
        #[command(subcommand)]
        cmd: SpaceCmd,
    },
    /// Whether a class descends to the compactification of a subset
    Descend {
        /// Divisor class JSON file (pseudostable space)
        #[arg(long)]
        divisor: PathBuf,
        /// Subset JSON file
        #[arg(long)]
        t: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum IndicesCmd {
    /// List every boundary class
    List {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// Omit the irr class
        #[arg(long)]
        no_irr: bool,
    },
}

#[derive(Subcommand)]
pub enum AdmissibleCmd {
    /// Closed-form count of admissible subsets
    Count {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
    /// Enumerate admissible subsets (unions of minimal subsets)
    List {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// Enumeration cap
        #[arg(long, default_value_t = 1 << 20)]
        cap: u64,
    },
    /// List the minimal subsets
    Minimal {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Subcommand)]
pub enum FcurvesCmd {
    /// List the F-curves of (g, n) up to numerical equivalence
    List {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NefModeArg {
    Ample,
    Nef,
}

#[derive(Subcommand)]
pub enum NefCmd {
    /// Verdict of the brute-force scan over the F-curves
    Check {
        /// Divisor class JSON file
        #[arg(long)]
        divisor: PathBuf,
        /// Expect the class on the pseudostable space and test against
        /// the face of a subset
        #[arg(long)]
        space: Option<SpaceArg>,
        /// Subset JSON file (pseudostable checks; defaults to empty)
        #[arg(long)]
        t: Option<PathBuf>,
        /// What "passes" means in the report
        #[arg(long, value_enum, default_value_t = NefModeArg::Nef)]
        mode: NefModeArg,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SpaceArg {
    Mgn,
    Ps,
}

#[derive(Subcommand)]
pub enum AmpleModelCmd {
    /// Classify the ample model of an adjoint divisor
    Classify {
        /// Adjoint parameters JSON file
        #[arg(long)]
        params: PathBuf,
    },
}

#[derive(Subcommand)]
pub enum SpaceCmd {
    /// Q-factoriality, Q-Gorenstein-ness and the contraction factorization
    Props {
        /// Subset JSON file
        #[arg(long)]
        t: PathBuf,
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
    },
}

enum CliError {
    /// Bad invocation or unparseable input: exit 2.
    Usage(String),
    /// A domain operation rejected its input: exit 1.
    Domain(DomainError),
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Domain(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// Entry point: dispatch and translate errors into exit codes.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Domain(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {what} file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("cannot parse {what} file {}: {e}", path.display())))
}

fn read_tsubset(path: &Path, ambient: MarkedGenus) -> CliResult<TSubset> {
    let wire: TSubsetWire = read_json(path, "subset")?;
    Ok(TSubset::from_wire(ambient, &wire)?)
}

fn print_json<T: Serialize>(value: &T) -> CliResult<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Indices { cmd } => run_indices(cmd),
        Command::Admissible { cmd } => run_admissible(cmd),
        Command::Fcurves { cmd } => run_fcurves(cmd),
        Command::Intersect { divisor, curve } => run_intersect(&divisor, &curve),
        Command::Nef { cmd } => run_nef(cmd),
        Command::AmpleModel { cmd } => run_ample_model(cmd),
        Command::Sweep { spec, out, svg } => run_sweep(&spec, &out, svg.as_deref()),
        Command::Space { cmd } => run_space(cmd),
        Command::Descend { divisor, t } => run_descend(&divisor, &t),
    }
}

fn run_indices(cmd: IndicesCmd) -> CliResult<()> {
    match cmd {
        IndicesCmd::List { g, n, no_irr } => {
            let amb = MarkedGenus::new(g, n);
            let wire = TSubsetWire {
                irr: !no_irr,
                pairs: amb
                    .pair_classes()
                    .into_iter()
                    .map(|p| (p.genus(), p.marks().iter().copied().collect()))
                    .collect(),
            };
            print_json(&wire)
        }
    }
}

fn run_admissible(cmd: AdmissibleCmd) -> CliResult<()> {
    match cmd {
        AdmissibleCmd::Count { g, n } => {
            let count = MarkedGenus::new(g, n).count_admissible()?;
            println!("{count}");
            Ok(())
        }
        AdmissibleCmd::List { g, n, cap } => {
            let subsets = MarkedGenus::new(g, n).enumerate_admissible(cap)?;
            print_json(&subsets)
        }
        AdmissibleCmd::Minimal { g, n } => {
            let subsets = MarkedGenus::new(g, n).minimal_subsets();
            print_json(&subsets)
        }
    }
}

fn run_fcurves(cmd: FcurvesCmd) -> CliResult<()> {
    match cmd {
        FcurvesCmd::List { g, n } => {
            let curves = enumerate_fcurves(MarkedGenus::new(g, n));
            print_json(&curves)
        }
    }
}

fn run_intersect(divisor: &Path, curve: &Path) -> CliResult<()> {
    let l: DivisorClass = read_json(divisor, "divisor")?;
    let c: FCurve = read_json(curve, "curve")?;
    let value = intersect(&l, &c)?;
    println!("{value}");
    Ok(())
}

#[derive(Serialize)]
struct NefReport<'a> {
    status: PositivityStatus,
    passes: bool,
    witnesses: &'a [(FCurve, String)],
}

fn run_nef(cmd: NefCmd) -> CliResult<()> {
    let NefCmd::Check {
        divisor,
        space,
        t,
        mode,
    } = cmd;
    let l: DivisorClass = read_json(&divisor, "divisor")?;
    let expected_space = match space {
        Some(SpaceArg::Mgn) => Some(Space::Mgn),
        Some(SpaceArg::Ps) => Some(Space::MgnPs),
        None => None,
    };
    if let Some(expected) = expected_space {
        if l.space() != expected {
            return Err(CliError::Usage(format!(
                "--space disagrees with the divisor file (file says {})",
                l.space().name()
            )));
        }
    }
    let verdict: PositivityVerdict = match l.space() {
        Space::Mgn => {
            if t.is_some() {
                return Err(CliError::Usage(
                    "--t applies only to pseudostable checks".into(),
                ));
            }
            brute_force_verdict(&l)?
        }
        Space::MgnPs => {
            let t = match &t {
                Some(path) => read_tsubset(path, l.ambient())?,
                None => TSubset::empty(l.ambient()),
            };
            ps_verdict(&l, &t)?
        }
    };
    let passes = match mode {
        NefModeArg::Ample => verdict.status == PositivityStatus::FAmple,
        NefModeArg::Nef => verdict.status != PositivityStatus::NotFNef,
    };
    print_json(&NefReport {
        status: verdict.status,
        passes,
        witnesses: &verdict.witnesses,
    })
}

fn run_ample_model(cmd: AmpleModelCmd) -> CliResult<()> {
    let AmpleModelCmd::Classify { params } = cmd;
    let p: AdjointParams = read_json(&params, "parameters")?;
    let result = classify(&p);
    print_json(&result)
}

fn run_sweep(spec_path: &Path, out: &Path, svg: Option<&Path>) -> CliResult<()> {
    let spec: GridSpec = read_json(spec_path, "grid spec")?;
    let mut writer = csv::WriterBuilder::new()
        .from_path(out)
        .map_err(|e| CliError::Usage(format!("cannot open {}: {e}", out.display())))?;
    writer
        .write_record(["g", "n", "a", "alpha_irr", "alpha", "model", "t", "clause"])
        .map_err(|e| CliError::Usage(format!("csv write failed: {e}")))?;
    let mut summary = SweepSummary::default();
    let mut cells: Vec<ChamberRecord> = Vec::new();
    let keep_cells = svg.is_some();
    for record in sweep(&spec)? {
        summary.record(&record.result);
        writer
            .write_record([
                spec.ambient.g.to_string(),
                spec.ambient.n.to_string(),
                record.a.to_string(),
                record.alpha_irr.to_string(),
                record
                    .alpha
                    .as_ref()
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                record.result.model_label(),
                record.result.t_label(),
                record.result.certificate.clause.short().to_string(),
            ])
            .map_err(|e| CliError::Usage(format!("csv write failed: {e}")))?;
        if keep_cells {
            cells.push(record);
        }
    }
    writer
        .flush()
        .map_err(|e| CliError::Usage(format!("csv write failed: {e}")))?;
    if let Some(svg_path) = svg {
        let image = render_svg(&cells)
            .ok_or_else(|| CliError::Usage("svg rendering needs a uniform 2D slice".into()))?;
        fs::write(svg_path, image)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", svg_path.display())))?;
    }
    eprintln!(
        "{}",
        serde_json::to_string(&summary).expect("summary serializes")
    );
    Ok(())
}

/// Render a uniform-profile sweep as a colored cell grid
/// (shared multiplier on the x axis, `alpha_irr` on the y axis).
fn render_svg(cells: &[ChamberRecord]) -> Option<String> {
    let mut xs: Vec<String> = Vec::new();
    let mut ys: Vec<String> = Vec::new();
    for record in cells {
        let alpha = record.alpha.as_ref()?.to_string();
        if !xs.contains(&alpha) {
            xs.push(alpha);
        }
        let irr = record.alpha_irr.to_string();
        if !ys.contains(&irr) {
            ys.push(irr);
        }
    }
    if xs.is_empty() || ys.is_empty() {
        return None;
    }
    const PALETTE: [&str; 8] = [
        "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b", "#b279a2", "#9d755d",
    ];
    let mut colors: BTreeMap<String, &str> = BTreeMap::new();
    let cell = 8u32;
    let width = xs.len() as u32 * cell;
    let height = ys.len() as u32 * cell;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    );
    for record in cells {
        let alpha = record.alpha.as_ref()?.to_string();
        let x = xs.iter().position(|v| *v == alpha)? as u32 * cell;
        // flip so alpha_irr grows upward
        let row = ys.iter().position(|v| *v == record.alpha_irr.to_string())? as u32;
        let y = height - (row + 1) * cell;
        let label = format!("{}{}", record.result.model_label(), record.result.t_label());
        let next = PALETTE[colors.len() % PALETTE.len()];
        let color = *colors.entry(label.clone()).or_insert(next);
        let _ = writeln!(
            out,
            "<rect x=\"{x}\" y=\"{y}\" width=\"{cell}\" height=\"{cell}\" fill=\"{color}\">\
             <title>{label}</title></rect>"
        );
    }
    let _ = writeln!(out, "</svg>");
    Some(out)
}

#[derive(Serialize)]
struct SpacePropsReport {
    q_factorial: bool,
    q_gorenstein: bool,
    factorization: crate::geometry::FactorizationDescriptor,
}

fn run_space(cmd: SpaceCmd) -> CliResult<()> {
    let SpaceCmd::Props { t, g, n } = cmd;
    let ambient = MarkedGenus::new(g, n);
    let t = read_tsubset(&t, ambient)?;
    let q_factorial = is_q_factorial(&t)?;
    let factorization = factorize(&t)?;
    print_json(&SpacePropsReport {
        q_factorial,
        // Q-factoriality and Q-Gorenstein-ness coincide here
        q_gorenstein: q_factorial,
        factorization,
    })
}

#[derive(Serialize)]
struct DescendReport {
    descends: bool,
}

fn run_descend(divisor: &Path, t: &Path) -> CliResult<()> {
    let l: DivisorClass = read_json(divisor, "divisor")?;
    let t = read_tsubset(t, l.ambient())?;
    let verdict = descends(&l, &t)?;
    print_json(&DescendReport { descends: verdict })
}
