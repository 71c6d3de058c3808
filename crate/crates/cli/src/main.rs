//! Single entry point over the library: loads documents, runs checks, and
//! prints deterministic JSON reports. Exit codes: 0 all checks passed,
//! 1 a law or correspondence check failed, 2 bad input.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ehresmann::actions::{
    check_conditions_ab, check_full, check_order_preserving, check_strong,
};
use ehresmann::fixtures::{build_subset_expansion, sample, FlaUniverse};
use ehresmann::globalization::{globalize, verify_globalisation};
use ehresmann::io::{
    globalization_value, reconstruct_doc, run_laws_suite, run_pipeline, Doc, DocRef, IoError,
    Registry,
};
use ehresmann::laws::{Biunary, Mode, SampleCfg};
use ehresmann::pl::PlContext;
use ehresmann::ql::QlContext;
use ehresmann::report::LawReport;

#[derive(Parser)]
#[command(name = "ehresmann", version, about = "Finite biunary monoid toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a partial action document
    CheckAction {
        /// Action document (JSON or TOML)
        action: String,
        /// Check the strong composition law
        #[arg(long)]
        strong: bool,
        /// Check that every monoid element acts somewhere
        #[arg(long)]
        full: bool,
        /// Check order preservation with downward-closed domains
        #[arg(long)]
        order: bool,
        /// Subset file: also check the two restriction conditions
        #[arg(long)]
        ab: Option<String>,
    },
    /// Embed a partial action into a total action on order ideals
    Globalize {
        /// Action document (JSON or TOML)
        action: String,
        /// Write the result here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-verify the construction and include the report
        #[arg(long)]
        verify: bool,
    },
    /// Operations in the normal-form monoid of a context
    Pl {
        #[command(subcommand)]
        op: PlOp,
    },
    /// Operations in the restricted submonoid of a context
    Ql {
        #[command(subcommand)]
        op: QlOp,
    },
    /// Identity and basis suites
    Laws {
        #[command(subcommand)]
        op: LawsOp,
    },
    /// Built-in example structures as documents
    Fixtures {
        #[command(subcommand)]
        op: FixturesOp,
    },
    /// Rebuild a monoid from its quotient data and verify the atom map
    Reconstruct {
        /// Restricted context or biunary document
        q: String,
        /// Canonical length bound for the element listing
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for sampled checks
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a staged pipeline document
    Pipeline {
        #[command(subcommand)]
        op: PipelineOp,
    },
}

#[derive(Subcommand)]
enum PlOp {
    /// Multiply two elements given as raw words
    Mul {
        a: String,
        b: String,
        #[arg(long)]
        ctx: String,
    },
    /// Reduce a raw word to its normal form
    Reduce {
        w: String,
        #[arg(long)]
        ctx: String,
    },
    /// The + of an element
    Plus {
        a: String,
        #[arg(long)]
        ctx: String,
    },
    /// The * of an element
    Star {
        a: String,
        #[arg(long)]
        ctx: String,
    },
    /// The image of an element in the acting monoid
    Ct {
        a: String,
        #[arg(long)]
        ctx: String,
    },
}

#[derive(Subcommand)]
enum QlOp {
    /// Whether an element lies in the restricted submonoid
    Member {
        a: String,
        #[arg(long)]
        ctx: String,
    },
    /// Whether two members fall in the same sigma class
    SigmaEq {
        a: String,
        b: String,
        #[arg(long)]
        ctx: String,
    },
    /// The generator representing a member's sigma class
    Rep {
        a: String,
        #[arg(long)]
        ctx: String,
    },
}

#[derive(Subcommand)]
enum LawsOp {
    /// Run one suite against a document
    Check {
        /// left-ehresmann | star | ample | atomic | proper | basis
        #[arg(long)]
        suite: String,
        /// Biunary table, action, or context document
        #[arg(long)]
        target: String,
        /// Canonical length bound for context listings
        #[arg(long, default_value_t = 4)]
        bound: usize,
        /// Sample count; omit for exhaustive quantification
        #[arg(long)]
        samples: Option<u64>,
        /// Seed for sampled quantification
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum FixturesOp {
    /// Print a fixture as a document
    Emit {
        #[command(subcommand)]
        what: EmitKind,
    },
}

#[derive(Subcommand)]
enum EmitKind {
    /// The subset expansion of a finite group, atoms designated
    SubsetExpansion {
        /// Group name: z1, z2, z3, ...
        #[arg(long)]
        group: String,
    },
    /// The bounded prefix-language structure with its generating set
    Fla {
        /// Alphabet size
        #[arg(long)]
        k: usize,
        /// Word length bound
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
}

#[derive(Subcommand)]
enum PipelineOp {
    /// Execute the stages of a pipeline document
    Run {
        /// Pipeline document
        spec: String,
        /// Override the document's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Register documents by name before running (repeatable)
        #[arg(long = "load")]
        load: Vec<String>,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn debug(msg: &str) {
    if std::env::var("EHRESMANN_LOG").is_ok_and(|v| v == "debug") {
        eprintln!("[ehresmann] {msg}");
    }
}

fn emit(value: &serde_json::Value, out: Option<&PathBuf>) -> Result<(), Failure> {
    let text = format!("{}\n", serde_json::to_string_pretty(value)?);
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn absolutize(path: &str) -> Result<PathBuf, Failure> {
    let p = PathBuf::from(path);
    if p.is_absolute() {
        return Ok(p);
    }
    let cwd = std::env::current_dir().map_err(|e| Failure(format!("no working directory: {e}")))?;
    Ok(cwd.join(p))
}

/// Loads the subcommand's main document. References inside it resolve
/// against its own directory, so commands work from any working directory;
/// paths on the command line stay relative to the caller.
fn open(path: &str) -> Result<(Registry, DocRef), Failure> {
    debug(&format!("loading {path}"));
    let abs = absolutize(path)?;
    let base = abs.parent().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
    let reg = Registry::new(base);
    let doc = reg.read_doc(&abs.display().to_string())?;
    Ok((reg, DocRef::Inline(Box::new(doc))))
}

fn parse_group(name: &str) -> Result<usize, Failure> {
    name.strip_prefix('z')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&n| n >= 1)
        .ok_or_else(|| Failure(format!("unknown group `{name}`; expected z1, z2, ...")))
}

fn check_action(
    action: &str,
    strong: bool,
    full: bool,
    order: bool,
    ab: Option<&str>,
) -> Result<bool, Failure> {
    let (reg, r) = open(action)?;
    let pa = reg.partial_action(&r)?;
    let everything = !(strong || full || order);
    let mut checks = Vec::new();
    if strong || everything {
        checks.push(check_strong(&pa));
    }
    if order || everything {
        checks.push(check_order_preserving(&pa));
    }
    if full || everything {
        checks.push(check_full(&pa));
    }
    if let Some(subset_path) = ab {
        let y = reg.load_subset(&absolutize(subset_path)?.display().to_string())?;
        if !pa.is_total() {
            return Err(Failure("restriction conditions need a total action".into()));
        }
        let total = reg.total_action(&r)?;
        let (a, b) = check_conditions_ab(&total, &y)?;
        checks.push(a);
        checks.push(b);
    }
    let report = LawReport::new("action", action, None, "exhaustive", None, checks);
    let pass = report.pass;
    emit(&serde_json::to_value(&report)?, None)?;
    Ok(pass)
}

fn run_globalize(action: &str, out: Option<&PathBuf>, verify: bool) -> Result<bool, Failure> {
    let (reg, r) = open(action)?;
    let pa = reg.partial_action(&r)?;
    let ga = globalize(&pa)?;
    let mut value = globalization_value(&ga);
    let mut pass = true;
    if verify {
        let report = verify_globalisation(&ga);
        pass = report.pass;
        value["verification"] = serde_json::to_value(&report)?;
    }
    emit(&value, out)?;
    Ok(pass)
}

fn value_line(value: serde_json::Value) -> Result<bool, Failure> {
    emit(&serde_json::json!({ "value": value }), None)?;
    Ok(true)
}

fn run_pl(op: &PlOp) -> Result<bool, Failure> {
    let ctx_of = |path: &str| -> Result<PlContext, Failure> {
        let (reg, r) = open(path)?;
        Ok(reg.pl_context(&r)?)
    };
    match op {
        PlOp::Mul { a, b, ctx } => {
            let c = ctx_of(ctx)?;
            let x = c.parse_element(a)?;
            let y = c.parse_element(b)?;
            value_line(c.mul(&x, &y).to_string().into())
        }
        PlOp::Reduce { w, ctx } => {
            let c = ctx_of(ctx)?;
            value_line(c.parse_element(w)?.to_string().into())
        }
        PlOp::Plus { a, ctx } => {
            let c = ctx_of(ctx)?;
            let x = c.parse_element(a)?;
            value_line(c.plus(&x).to_string().into())
        }
        PlOp::Star { a, ctx } => {
            let c = ctx_of(ctx)?;
            let x = c.parse_element(a)?;
            value_line(c.star(&x).to_string().into())
        }
        PlOp::Ct { a, ctx } => {
            let c = ctx_of(ctx)?;
            let x = c.parse_element(a)?;
            value_line(c.c_t(&x).into())
        }
    }
}

fn run_ql(op: &QlOp) -> Result<bool, Failure> {
    let ctx_of = |path: &str| -> Result<QlContext, Failure> {
        let (reg, r) = open(path)?;
        Ok(reg.ql_context(&r)?)
    };
    match op {
        QlOp::Member { a, ctx } => {
            let q = ctx_of(ctx)?;
            let x = q.pl().parse_element(a)?;
            value_line(q.is_member(&x).into())
        }
        QlOp::SigmaEq { a, b, ctx } => {
            let q = ctx_of(ctx)?;
            let x = q.pl().parse_element(a)?;
            let y = q.pl().parse_element(b)?;
            value_line(q.sigma_eq(&x, &y)?.into())
        }
        QlOp::Rep { a, ctx } => {
            let q = ctx_of(ctx)?;
            let x = q.pl().parse_element(a)?;
            value_line(q.sigma_rep(&x)?.to_string().into())
        }
    }
}

fn run_laws(op: &LawsOp) -> Result<bool, Failure> {
    let LawsOp::Check {
        suite,
        target,
        bound,
        samples,
        seed,
    } = op;
    let mode = match samples {
        Some(k) => Mode::Sampled(SampleCfg {
            seed: *seed,
            samples: *k as usize,
        }),
        None => Mode::Exhaustive,
    };
    let (reg, r) = open(target)?;
    let (value, pass) = run_laws_suite(&reg, suite, &r, *bound, &mode)?;
    emit(&value, None)?;
    Ok(pass)
}

fn run_fixtures(op: &FixturesOp) -> Result<bool, Failure> {
    let FixturesOp::Emit { what } = op;
    match what {
        EmitKind::SubsetExpansion { group } => {
            let n = parse_group(group)?;
            let b = build_subset_expansion(&sample::cyclic(n))?;
            let atoms: Vec<usize> = (0..b.n()).collect();
            let doc = Doc::from_biunary(&b, Some(atoms), Some(format!("subset-expansion-{group}")));
            emit(&serde_json::to_value(&doc)?, None)?;
        }
        EmitKind::Fla { k, bound } => {
            let b = FlaUniverse::new(*k, *bound);
            let elements: Vec<_> = b
                .elements()
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "set": c.set.iter().collect::<Vec<_>>(),
                        "word": c.word,
                    })
                })
                .collect();
            let atom_indices: Vec<usize> = b
                .elements()
                .iter()
                .enumerate()
                .filter(|(_, c)| FlaUniverse::is_atom(c))
                .map(|(i, _)| i)
                .collect();
            let mut value = serde_json::json!({
                "kind": "fla",
                "k": k,
                "bound": bound,
                "element_count": elements.len(),
                "atom_count": atom_indices.len(),
                "elements": elements,
                "atoms": atom_indices,
            });
            if *k >= 2 && *bound >= 2 {
                let (elem, factorizations) = b.duplicate_witness();
                fn show(c: &ehresmann::fixtures::FlaElement) -> serde_json::Value {
                    serde_json::json!({
                        "set": c.set.iter().collect::<Vec<_>>(),
                        "word": c.word,
                    })
                }
                value["duplicate_witness"] = serde_json::json!({
                    "element": show(&elem),
                    "factorizations": factorizations
                        .iter()
                        .map(|f| f.iter().map(show).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                });
            }
            emit(&value, None)?;
        }
    }
    Ok(true)
}

fn run_cmd(cmd: &Cmd) -> Result<bool, Failure> {
    match cmd {
        Cmd::CheckAction {
            action,
            strong,
            full,
            order,
            ab,
        } => check_action(action, *strong, *full, *order, ab.as_deref()),
        Cmd::Globalize {
            action,
            out,
            verify,
        } => run_globalize(action, out.as_ref(), *verify),
        Cmd::Pl { op } => run_pl(op),
        Cmd::Ql { op } => run_ql(op),
        Cmd::Laws { op } => run_laws(op),
        Cmd::Fixtures { op } => run_fixtures(op),
        Cmd::Reconstruct {
            q,
            bound,
            out,
            seed,
        } => {
            let (reg, r) = open(q)?;
            let report = reconstruct_doc(&reg, &r, *bound, *seed)?;
            let pass = report.pass;
            emit(&serde_json::to_value(&report)?, out.as_ref())?;
            Ok(pass)
        }
        Cmd::Pipeline { op } => {
            let PipelineOp::Run { spec, seed, load } = op;
            let abs = absolutize(spec)?;
            let base = abs.parent().map(PathBuf::from).unwrap_or_else(|| PathBuf::from("."));
            let mut reg = Registry::new(base);
            for path in load {
                debug(&format!("registering {path}"));
                let doc = reg.load_file(&absolutize(path)?.display().to_string())?;
                if doc.name().is_none() {
                    return Err(Failure(format!("{path} has no name to register under")));
                }
            }
            let doc = reg.read_doc(&abs.display().to_string())?;
            if doc.kind() != "pipeline" {
                return Err(IoError::WrongKind {
                    want: "pipeline",
                    got: doc.kind().to_string(),
                }
                .into());
            }
            let report = run_pipeline(&reg, &doc, *seed)?;
            let pass = report.pass;
            emit(&serde_json::to_value(&report)?, None)?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cmd(&cli.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure(detail)) => {
            println!(
                "{}",
                serde_json::json!({ "error": detail })
            );
            ExitCode::from(2)
        }
    }
}
