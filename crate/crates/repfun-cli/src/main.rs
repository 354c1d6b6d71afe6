//! Batch front-end for the library: load groupoid, representation, or
//! Hopf-algebroid files, run a pipeline stage, and emit a deterministic
//! report.
//!
//! Exit codes: 0 — every requested check passed; 1 — a check failed (the
//! report carries the witnesses); 2 — an input did not parse or is
//! malformed; 3 — an enumeration guard was exceeded; 4 — character
//! computation is unsupported over the requested field.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use repfun::duality::{duality_bijection_check, round_trip};
use repfun::field::FieldSpec;
use repfun::groupoid::{
    connected_components, validate_groupoid, FiniteGroupoid, GroupoidError,
};
use repfun::hopf::{
    character_groupoid, check_hopf_axioms, CharacterError, HopfAlgebroid, HopfError,
};
use repfun::io::{self, detect_kind, InputKind, IoError};
use repfun::rep::{validate_rep, Representation};
use repfun::repfun::{
    repfun, repfun_concrete, transitive_decomposition, zeta_report, RepFunError, RepFunOptions,
};
use repfun::report::{canonical_json, RunReport};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_UNSUPPORTED_FIELD: u8 = 4;

/// Random elements per groupoid for the sampled evaluation-map identities.
const ZETA_SAMPLES: usize = 100;

#[derive(Parser)]
#[command(
    name = "repfun",
    version,
    about = "Exact-arithmetic toolkit for finite groupoids, their function Hopf \
             algebroids, character groupoids, and the duality between them"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Coefficient field for models built from plain groupoid files:
    /// `rational` or `fp:<prime>`
    #[arg(long, global = true, default_value = "rational")]
    field: String,

    /// Tensor-closure depth of the representation family behind the coend
    /// model
    #[arg(long, global = true, default_value_t = 2)]
    depth: usize,

    /// Seed for the sampled identity checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Cap on the number of domain arrows for morphism enumeration
    #[arg(long, global = true, default_value_t = 10)]
    guard: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check the axioms of groupoid, representation, or Hopf-algebroid files
    Validate { inputs: Vec<PathBuf> },
    /// List connected components and transitivity of groupoid files
    Components { inputs: Vec<PathBuf> },
    /// Build the function Hopf algebroid of each groupoid, cross-check it
    /// against the coend presentation, and dump it
    Repfun { inputs: Vec<PathBuf> },
    /// Compute the character groupoid of Hopf-algebroid dumps (or of the
    /// function model of groupoid files)
    Characters { inputs: Vec<PathBuf> },
    /// Run the full duality round-trip on groupoid files: the evaluation
    /// functor into the character groupoid, both triangle identities, and
    /// the flatness report
    RoundTrip { inputs: Vec<PathBuf> },
    /// Verify that groupoid morphisms into the character groupoid are in
    /// bijection with Hopf-algebroid morphisms out of the algebroid
    HomCheck {
        /// groupoid file (the domain)
        groupoid: PathBuf,
        /// Hopf-algebroid dump, or a groupoid file standing for its
        /// function model
        algebroid: PathBuf,
    },
    /// Split a transitive groupoid as a band over an isotropy group and
    /// verify the induced isomorphism of function algebroids
    Decompose {
        inputs: Vec<PathBuf>,
        /// Object index used as the base point
        #[arg(long, default_value_t = 0)]
        base_point: usize,
    },
}

// ---------------------------------------------------------------------------
// Errors that abort the run (as opposed to checks that fail inside it)
// ---------------------------------------------------------------------------

enum CliError {
    BadInput(String),
    Guard(String),
    UnsupportedField(String),
}

impl CliError {
    fn render(&self) -> (u8, &str) {
        match self {
            CliError::BadInput(m) => (EXIT_BAD_INPUT, m),
            CliError::Guard(m) => (EXIT_GUARD, m),
            CliError::UnsupportedField(m) => (EXIT_UNSUPPORTED_FIELD, m),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> CliError {
        CliError::BadInput(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> CliError {
        CliError::BadInput(format!("serialization failed: {e}"))
    }
}

impl From<HopfError> for CliError {
    fn from(e: HopfError) -> CliError {
        match &e {
            HopfError::Character(CharacterError::UnsupportedField) => {
                CliError::UnsupportedField(e.to_string())
            }
            HopfError::Character(CharacterError::GuardExceeded { .. }) => {
                CliError::Guard(e.to_string())
            }
            HopfError::Groupoid(GroupoidError::GuardExceeded { .. }) => {
                CliError::Guard(e.to_string())
            }
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

impl From<RepFunError> for CliError {
    fn from(e: RepFunError) -> CliError {
        match e {
            RepFunError::Hopf(h) => h.into(),
            RepFunError::Groupoid(g @ GroupoidError::GuardExceeded { .. }) => {
                CliError::Guard(g.to_string())
            }
            other => CliError::BadInput(other.to_string()),
        }
    }
}

// ---------------------------------------------------------------------------
// Input loading
// ---------------------------------------------------------------------------

enum Loaded {
    Groupoid(Arc<FiniteGroupoid>),
    Rep(Representation),
    Hopf(Arc<HopfAlgebroid>),
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::BadInput(format!("{}: {e}", path.display())))?;
    Ok(match detect_kind(&text)? {
        InputKind::Groupoid => Loaded::Groupoid(io::groupoid_from_json(&text)?),
        InputKind::Representation => {
            Loaded::Rep(io::representation_from_json(&text, path.parent())?)
        }
        InputKind::Hopf => Loaded::Hopf(io::hopf_from_json(&text)?),
    })
}

fn load_groupoid(path: &Path) -> Result<Arc<FiniteGroupoid>, CliError> {
    match load(path)? {
        Loaded::Groupoid(g) => Ok(g),
        _ => Err(CliError::BadInput(format!(
            "{}: expected a groupoid file",
            path.display()
        ))),
    }
}

fn stem(path: &Path) -> String {
    path.file_stem().unwrap_or(path.as_os_str()).to_string_lossy().into_owned()
}

fn path_key(path: &Path) -> String {
    path.to_string_lossy().into_owned()
}

fn list_paths(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| path_key(p)).collect()
}

fn require_inputs(paths: &[PathBuf]) -> Result<(), CliError> {
    if paths.is_empty() {
        Err(CliError::BadInput("no input files given".into()))
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let field = FieldSpec::from_name(&cli.field).map_err(|e| CliError::BadInput(e.to_string()))?;
    match &cli.command {
        Command::Validate { inputs } => cmd_validate(inputs, field.name()),
        Command::Components { inputs } => cmd_components(inputs, field.name()),
        Command::Repfun { inputs } => cmd_repfun(inputs, field, cli.depth, cli.seed),
        Command::Characters { inputs } => cmd_characters(inputs, field),
        Command::RoundTrip { inputs } => cmd_round_trip(inputs, field),
        Command::HomCheck { groupoid, algebroid } => {
            cmd_hom_check(groupoid, algebroid, field, cli.guard)
        }
        Command::Decompose { inputs, base_point } => {
            cmd_decompose(inputs, field, *base_point)
        }
    }
}

fn cmd_validate(inputs: &[PathBuf], field_name: String) -> Result<RunReport, CliError> {
    require_inputs(inputs)?;
    let mut report = RunReport::new("validate", field_name);
    report.inputs = list_paths(inputs);
    for path in inputs {
        let name = stem(path);
        match load(path)? {
            Loaded::Groupoid(g) => {
                let r = validate_groupoid(&g);
                let detail = if r.ok() {
                    format!("{} objects, {} arrows", g.n_objects(), g.n_arrows())
                } else {
                    format!(
                        "{} violation(s), first: {:?}",
                        r.violations.len(),
                        &r.violations[..r.violations.len().min(3)]
                    )
                };
                report.push(format!("groupoid axioms ({name})"), r.ok(), detail);
            }
            Loaded::Rep(e) => {
                let r = validate_rep(&e);
                let detail = if r.violations.is_empty() {
                    format!("rank {}, {} arrows", e.rank(), e.groupoid().n_arrows())
                } else {
                    format!(
                        "{} violation(s), first: {:?}",
                        r.violations.len(),
                        &r.violations[..r.violations.len().min(3)]
                    )
                };
                report.push(
                    format!("representation laws ({name})"),
                    r.violations.is_empty(),
                    detail,
                );
            }
            Loaded::Hopf(h) => {
                let r = check_hopf_axioms(&h);
                let detail = if r.ok() {
                    let mut d = format!(
                        "base {}, total {}, {} clauses",
                        h.base_dim(),
                        h.dim(),
                        r.clauses.len()
                    );
                    if !r.warnings.is_empty() {
                        d.push_str(&format!("; warnings: {}", r.warnings.join("; ")));
                    }
                    d
                } else {
                    let failing: Vec<String> = r
                        .clauses
                        .iter()
                        .filter(|c| !c.ok)
                        .map(|c| format!("{}: {}", c.clause, c.witnesses.join(", ")))
                        .collect();
                    failing.join(" | ")
                };
                report.push(format!("hopf axioms ({name})"), r.ok(), detail);
            }
        }
    }
    Ok(report)
}

fn cmd_components(inputs: &[PathBuf], field_name: String) -> Result<RunReport, CliError> {
    require_inputs(inputs)?;
    let mut report = RunReport::new("components", field_name);
    report.inputs = list_paths(inputs);
    let mut data = BTreeMap::new();
    for path in inputs {
        let name = stem(path);
        let g = load_groupoid(path)?;
        let r = validate_groupoid(&g);
        report.push(
            format!("groupoid axioms ({name})"),
            r.ok(),
            if r.ok() { String::new() } else { format!("{:?}", r.violations) },
        );
        let comps = connected_components(&g);
        let members: Vec<Vec<String>> = comps
            .members
            .iter()
            .map(|objs| objs.iter().map(|&x| g.object_names()[x].clone()).collect())
            .collect();
        let detail = format!(
            "{} component(s) {:?}; transitive: {}",
            members.len(),
            members,
            g.is_transitive()
        );
        report.push(format!("connected components ({name})"), true, detail);
        data.insert(
            path_key(path),
            serde_json::json!({
                "components": members,
                "component_arrows": comps.subgroupoids.iter().map(|s| s.n_arrows()).collect::<Vec<_>>(),
                "transitive": g.is_transitive(),
            }),
        );
    }
    report.data = Some(serde_json::Value::Object(data.into_iter().collect()));
    Ok(report)
}

fn cmd_repfun(
    inputs: &[PathBuf],
    field: FieldSpec,
    depth: usize,
    seed: u64,
) -> Result<RunReport, CliError> {
    require_inputs(inputs)?;
    let mut report = RunReport::new("repfun", field.name());
    report.inputs = list_paths(inputs);
    report.seed = Some(seed);
    let mut data = BTreeMap::new();
    for path in inputs {
        let name = stem(path);
        let g = load_groupoid(path)?;
        let options = RepFunOptions { depth, ..Default::default() };
        let r = repfun(&g, field, options)?;

        let axioms = check_hopf_axioms(&r.concrete);
        report.push(
            format!("hopf axioms ({name})"),
            axioms.ok(),
            summarize_clauses(&axioms),
        );
        report.push(
            format!("total dimension equals arrow count ({name})"),
            r.concrete.dim() == g.n_arrows(),
            format!("dimension {}", r.concrete.dim()),
        );

        let z = zeta_report(&r, ZETA_SAMPLES, seed);
        report.push(
            format!("evaluation map is injective ({name})"),
            z.kernel_dim == 0,
            format!("kernel dimension {}", z.kernel_dim),
        );
        report.push(
            format!("evaluation map is surjective ({name})"),
            z.image_dim == z.total_dim,
            format!("image dimension {} of {}", z.image_dim, z.total_dim),
        );
        let identities = [
            ("unital", z.unital),
            ("multiplicative", z.multiplicative),
            ("base-bilinear", z.base_bilinear),
            ("counit", z.counit_identity),
            ("antipode", z.antipode_identity),
            ("comultiplication", z.comultiplication_identity),
        ];
        let failing: Vec<&str> =
            identities.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        report.push(
            format!("evaluation-map identities ({name})"),
            failing.is_empty(),
            if failing.is_empty() {
                format!("all identities hold on the basis and {ZETA_SAMPLES} samples")
            } else {
                format!("failing: {}", failing.join(", "))
            },
        );
        data.insert(path_key(path), serde_json::from_str(&io::hopf_to_json(&r.concrete))?);
    }
    report.data = Some(serde_json::Value::Object(data.into_iter().collect()));
    Ok(report)
}

fn summarize_clauses(r: &repfun::hopf::HopfReport) -> String {
    if r.ok() {
        format!("{} clauses hold", r.clauses.len())
    } else {
        r.clauses
            .iter()
            .filter(|c| !c.ok)
            .map(|c| format!("{}: {}", c.clause, c.witnesses.join(", ")))
            .collect::<Vec<_>>()
            .join(" | ")
    }
}

fn cmd_characters(inputs: &[PathBuf], field: FieldSpec) -> Result<RunReport, CliError> {
    require_inputs(inputs)?;
    let mut report = RunReport::new("characters", field.name());
    report.inputs = list_paths(inputs);
    let mut data = BTreeMap::new();
    for path in inputs {
        let name = stem(path);
        let h = match load(path)? {
            Loaded::Hopf(h) => h,
            Loaded::Groupoid(g) => repfun_concrete(&g, field).map_err(CliError::from)?,
            Loaded::Rep(_) => {
                return Err(CliError::BadInput(format!(
                    "{}: expected a groupoid or Hopf-algebroid file",
                    path.display()
                )))
            }
        };
        let x = character_groupoid(&h).map_err(CliError::from)?;
        let r = validate_groupoid(&x.groupoid);
        report.push(
            format!("character groupoid axioms ({name})"),
            r.ok(),
            if r.ok() {
                format!(
                    "{} object characters, {} arrow characters",
                    x.object_chars.len(),
                    x.arrow_chars.len()
                )
            } else {
                format!("{:?}", r.violations)
            },
        );
        let chars_to_strings = |rows: &[Vec<repfun::field::Scalar>]| -> Vec<Vec<String>> {
            rows.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect()
        };
        data.insert(
            path_key(path),
            serde_json::json!({
                "groupoid": serde_json::from_str::<serde_json::Value>(
                    &io::groupoid_to_json(&x.groupoid)
                )?,
                "object_characters": chars_to_strings(&x.object_chars),
                "arrow_characters": chars_to_strings(&x.arrow_chars),
            }),
        );
    }
    report.data = Some(serde_json::Value::Object(data.into_iter().collect()));
    Ok(report)
}

fn cmd_round_trip(inputs: &[PathBuf], field: FieldSpec) -> Result<RunReport, CliError> {
    require_inputs(inputs)?;
    let mut report = RunReport::new("round-trip", field.name());
    report.inputs = list_paths(inputs);
    let mut data = BTreeMap::new();
    for path in inputs {
        let name = stem(path);
        let g = load_groupoid(path)?;
        let r = round_trip(&g, field)?;
        report.push(
            format!("evaluation functor is an isomorphism ({name})"),
            r.theta_iso,
            format!(
                "{} objects and {} arrows onto {} base and {} total characters",
                r.objects, r.arrows, r.base_dim, r.total_dim
            ),
        );
        report.push(format!("triangle identity on the algebroid ({name})"), r.triangle_one, String::new());
        report.push(format!("triangle identity on the groupoid ({name})"), r.triangle_two, String::new());
        report.push(
            format!("flatness over the base pair ({name})"),
            true,
            format!(
                "projective: {}; faithfully flat: {}{}",
                r.projective,
                r.faithfully_flat,
                if r.empty_blocks.is_empty() {
                    String::new()
                } else {
                    format!("; empty blocks: {:?}", r.empty_blocks)
                }
            ),
        );
        data.insert(path_key(path), serde_json::to_value(&r)?);
    }
    report.data = Some(serde_json::Value::Object(data.into_iter().collect()));
    Ok(report)
}

fn cmd_hom_check(
    groupoid: &Path,
    algebroid: &Path,
    field: FieldSpec,
    guard: usize,
) -> Result<RunReport, CliError> {
    let g = load_groupoid(groupoid)?;
    let h = match load(algebroid)? {
        Loaded::Hopf(h) => h,
        Loaded::Groupoid(gh) => repfun_concrete(&gh, field).map_err(CliError::from)?,
        Loaded::Rep(_) => {
            return Err(CliError::BadInput(format!(
                "{}: expected a groupoid or Hopf-algebroid file",
                algebroid.display()
            )))
        }
    };
    let mut report = RunReport::new("hom-check", field.name());
    report.inputs = vec![path_key(groupoid), path_key(algebroid)];
    let r = duality_bijection_check(&h, &g, guard)?;
    report.push(
        format!("hom-set bijection ({} vs {})", stem(groupoid), stem(algebroid)),
        r.ok(),
        if r.ok() {
            format!("{} groupoid morphisms, bijection verified", r.morphisms)
        } else {
            format!("failures: {:?}", r.failures)
        },
    );
    report.data = Some(serde_json::to_value(&r)?);
    Ok(report)
}

fn cmd_decompose(
    inputs: &[PathBuf],
    field: FieldSpec,
    base_point: usize,
) -> Result<RunReport, CliError> {
    require_inputs(inputs)?;
    let mut report = RunReport::new("decompose", field.name());
    report.inputs = list_paths(inputs);
    let mut data = BTreeMap::new();
    for path in inputs {
        let name = stem(path);
        let g = load_groupoid(path)?;
        match transitive_decomposition(&g, base_point, field) {
            Ok(d) => {
                let order = g.loops_at(base_point).len();
                report.push(
                    format!("band decomposition ({name})"),
                    d.ok(),
                    format!(
                        "band on {} objects over an isotropy group of order {order}; \
                         function algebroid dimension {}",
                        g.n_objects(),
                        d.band.n_arrows()
                    ),
                );
                data.insert(
                    path_key(path),
                    serde_json::json!({
                        "band": serde_json::from_str::<serde_json::Value>(
                            &io::groupoid_to_json(&d.band)
                        )?,
                        "isotropy_order": order,
                        "iso_verified": d.ok(),
                    }),
                );
            }
            Err(RepFunError::NotTransitive { components }) => {
                report.push(
                    format!("band decomposition ({name})"),
                    false,
                    format!("not transitive; object components {components:?}"),
                );
            }
            Err(other) => return Err(other.into()),
        }
    }
    if !data.is_empty() {
        report.data = Some(serde_json::Value::Object(data.into_iter().collect()));
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = cli.output;
    match run(&cli) {
        Ok(report) => {
            match output {
                Output::Json => print!("{}", report.to_json()),
                Output::Text => print!("{}", report.to_text()),
            }
            if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECK_FAILED)
            }
        }
        Err(err) => {
            let (code, message) = err.render();
            eprintln!("error: {message}");
            if matches!(output, Output::Json) {
                print!(
                    "{}",
                    canonical_json(&serde_json::json!({ "error": message, "exit": code }))
                );
            }
            ExitCode::from(code)
        }
    }
}
