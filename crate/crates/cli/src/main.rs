use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use kacmoody::cartan::{CartanError, CartanType, DynkinDiagram, GcmInput, GeneralizedCartanMatrix};
use kacmoody::groupgen::{GroupError, GroupWord, Representation};
use kacmoody::roots::{enumerate_real_roots, Root};
use kacmoody::verifier::{commutator_sign_table, kernel_probe, SignEntry, VerificationReport, VerifyError};
use kacmoody::weightmod::{BasisVector, BuildLimits, DominantWeight, ModuleError, TruncatedModule};

const EXIT_IO: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_FAILED: u8 = 3;
const EXIT_WINDOW: u8 = 4;
const EXIT_ORACLE: u8 = 5;

/// Integral Kac–Moody group toolkit: diagrams, real roots, truncated
/// ℤ-forms of highest-weight modules and presentation checks.
#[derive(Parser)]
#[command(name = "kacmoody", version)]
struct Cli {
    /// Worker threads (defaults to the number of CPUs).
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    jobs: Option<u32>,
    /// Write JSON here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite / affine / indefinite type and hyperbolicity.
    Classify(GcmArg),
    /// Real roots up to a height bound.
    Roots {
        #[command(flatten)]
        gcm: GcmArg,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(i64).range(1..))]
        height: i64,
    },
    /// Weight spaces and divided-power matrices, or the matrix of a word.
    Module {
        #[command(flatten)]
        job: ModuleArgs,
        /// Group word such as "X1(1) S2 S1^-1".
        #[arg(long)]
        word: Option<String>,
    },
    /// Check every defining relation instance.
    Verify(ModuleArgs),
    /// Kernel of the action restricted to the torus H(ℤ).
    Kernel(ModuleArgs),
    /// Resolved commutator signs for adjacent ordered pairs.
    CommutatorSigns(ModuleArgs),
}

#[derive(Args)]
struct GcmArg {
    /// JSON file of the form {"matrix": [[...], ...]}.
    #[arg(long)]
    gcm: PathBuf,
}

#[derive(Args)]
struct ModuleArgs {
    #[command(flatten)]
    gcm: GcmArg,
    /// Highest weight as ⟨λ, αᵢ^∨⟩, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    /// Cap on the number of basis vectors built.
    #[arg(long, default_value_t = BuildLimits::default().max_basis)]
    max_basis: usize,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Display) -> Self {
        Self { code, message: message.to_string() }
    }
}

impl From<CartanError> for Failure {
    fn from(e: CartanError) -> Self {
        Failure::new(EXIT_INPUT, e)
    }
}

impl From<ModuleError> for Failure {
    fn from(e: ModuleError) -> Self {
        let code = match e {
            ModuleError::NonDominantWeight(_) | ModuleError::RankMismatch { .. } | ModuleError::NotSimplyLaced => {
                EXIT_INPUT
            }
            _ => EXIT_IO,
        };
        Failure::new(code, e)
    }
}

impl From<GroupError> for Failure {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::Module(m) => m.into(),
            GroupError::Parse(_) | GroupError::NonUnitScalar(_) | GroupError::NodeOutOfRange { .. } => {
                Failure::new(EXIT_INPUT, e)
            }
            GroupError::WindowEmpty { .. } => Failure::new(EXIT_WINDOW, e),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        match e {
            VerifyError::Group(g) => g.into(),
            VerifyError::OracleMismatch(_) => Failure::new(EXIT_ORACLE, e),
            _ => Failure::new(EXIT_IO, e),
        }
    }
}

fn read_gcm(path: &Path) -> Result<GeneralizedCartanMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", path.display())))?;
    let input: GcmInput =
        serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    Ok(GeneralizedCartanMatrix::simply_laced(input.matrix)?)
}

fn parse_lambda(s: &str, rank: usize) -> Result<DominantWeight, Failure> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Failure::new(EXIT_INPUT, format!("lambda entry {t:?}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != rank {
        return Err(ModuleError::RankMismatch { rank, got: coords.len() }.into());
    }
    Ok(DominantWeight::new(coords)?)
}

fn build_module(args: &ModuleArgs) -> Result<TruncatedModule, Failure> {
    let gcm = read_gcm(&args.gcm.gcm)?;
    let lambda = parse_lambda(&args.lambda, gcm.rank())?;
    let limits = BuildLimits { max_depth: args.depth, max_basis: args.max_basis };
    Ok(TruncatedModule::build_with_limits(&gcm, &lambda, args.depth, limits)?)
}

#[derive(Serialize)]
struct Classification {
    #[serde(rename = "type")]
    kind: CartanType,
    simply_laced: bool,
    connected: bool,
    hyperbolic: bool,
    diagram: DynkinDiagram,
}

#[derive(Serialize)]
struct RootsReport {
    height: i64,
    count: usize,
    roots: Vec<Root>,
}

#[derive(Serialize)]
struct WordColumn {
    column: BasisVector,
    image: Option<Vec<(BasisVector, i128)>>,
}

#[derive(Serialize)]
struct WordReport {
    word: String,
    built_depth: u32,
    valid_depth: i64,
    columns: Vec<WordColumn>,
}

#[derive(Serialize)]
struct KernelOutput {
    label: &'static str,
    lambda: DominantWeight,
    depth: u32,
    generators: Vec<Vec<usize>>,
    order: u64,
    members: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct SignsOutput {
    lambda: DominantWeight,
    depth: u32,
    signs: Vec<SignEntry>,
}

fn emit(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::new(EXIT_IO, e))?;
    text.push('\n');
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new(EXIT_IO, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Classify(arg) => {
            let gcm = read_gcm(&arg.gcm)?;
            let connected = gcm.is_connected();
            let report = Classification {
                kind: gcm.classify()?,
                simply_laced: gcm.is_simply_laced(),
                connected,
                hyperbolic: connected && gcm.is_hyperbolic()?,
                diagram: gcm.diagram(),
            };
            emit(&report, out)?;
        }
        Command::Roots { gcm, height } => {
            let gcm = read_gcm(&gcm.gcm)?;
            let set = enumerate_real_roots(&gcm, height).map_err(|e| Failure::new(EXIT_INPUT, e))?;
            let roots: Vec<Root> = set.roots().iter().cloned().collect();
            emit(&RootsReport { height, count: roots.len(), roots }, out)?;
        }
        Command::Module { job, word } => {
            let module = build_module(&job)?;
            match word {
                None => emit(&module.dump()?, out)?,
                Some(w) => {
                    let parsed: GroupWord = w.parse()?;
                    let rep = Representation::new(&module);
                    let mat = rep.evaluate_word(&parsed)?;
                    let columns = mat
                        .columns()
                        .iter()
                        .enumerate()
                        .map(|(k, b)| WordColumn { column: b.clone(), image: mat.image(k).map(|v| v.terms().collect()) })
                        .collect();
                    let report = WordReport {
                        word: parsed.to_string(),
                        built_depth: mat.built_depth(),
                        valid_depth: mat.valid_depth(),
                        columns,
                    };
                    emit(&report, out)?;
                }
            }
        }
        Command::Verify(job) => {
            let module = build_module(&job)?;
            let report = VerificationReport::run(&module)?;
            emit(&report, out)?;
            if report.any_failed() {
                return Ok(EXIT_FAILED);
            }
            if report.any_window_empty() {
                return Ok(EXIT_WINDOW);
            }
        }
        Command::Kernel(job) => {
            let module = build_module(&job)?;
            let report = kernel_probe(&Representation::new(&module))?;
            let output = KernelOutput {
                label: "K^λ ∩ H(ℤ) under the truncation oracle",
                lambda: module.lambda().clone(),
                depth: module.depth(),
                generators: report.generators,
                order: report.order,
                members: report.members.iter().map(|s| s.iter().map(|i| i + 1).collect()).collect(),
            };
            emit(&output, out)?;
        }
        Command::CommutatorSigns(job) => {
            let module = build_module(&job)?;
            let signs = commutator_sign_table(&Representation::new(&module))?;
            emit(&SignsOutput { lambda: module.lambda().clone(), depth: module.depth(), signs }, out)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_IO);
        }
    }
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
