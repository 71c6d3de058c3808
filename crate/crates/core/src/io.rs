//! File formats and the pipeline runner. Tables travel as small JSON (or
//! TOML) documents tagged by a `type` field; documents reference each other
//! by registry name or relative path. The pipeline runner executes a list
//! of stages against loaded documents and aggregates their reports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::actions::{
    check_conditions_ab, check_full, check_order_preserving, check_strong, ActionTable,
    PartialActionTable,
};
use crate::error::Error;
use crate::globalization::{globalize, verify_globalisation, GlobalizedAction};
use crate::laws::{
    check_ample, check_atomic, check_basis, check_left_ehresmann, check_proper,
    check_star_left_ehresmann, AtomSet, BasisCheck, Biunary, BiunaryTable, Mode, PlUniverse,
    QlUniverse, SampleCfg,
};
use crate::monoid::FinMonoid;
use crate::pl::PlContext;
use crate::poset::Poset;
use crate::ql::QlContext;
use crate::reconstruct::rebuild_and_theta;
use crate::report::{LawReport, PipelineReport, StageReport};
use crate::semilattice::Semilattice;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{0}")]
    Core(#[from] Error),
    #[error("cannot read {path}: {detail}")]
    Read { path: String, detail: String },
    #[error("cannot parse {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("unresolved reference \"{name}\"")]
    Unresolved { name: String },
    #[error("duplicate document name \"{name}\"")]
    Duplicate { name: String },
    #[error("expected a {want} document, found {got}")]
    WrongKind { want: &'static str, got: String },
    #[error("{detail}")]
    Invalid { detail: String },
}

/// A reference to another document: a registry name, a relative path, or
/// the document written inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DocRef {
    Name(String),
    Inline(Box<Doc>),
}

impl DocRef {
    pub fn describe(&self) -> String {
        match self {
            DocRef::Name(n) => n.clone(),
            DocRef::Inline(d) => d.name().unwrap_or("inline").to_string(),
        }
    }
}

/// One serializable object. Tables are row-major; `one` is an index.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Doc {
    /// Meet table with a greatest element: {"n", "meet", "one"}.
    Semilattice {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        n: usize,
        meet: Vec<Vec<usize>>,
        one: usize,
    },
    /// Multiplication table with identity: {"n", "mul", "one"}.
    Monoid {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        n: usize,
        mul: Vec<Vec<usize>>,
        one: usize,
    },
    /// Reflexive order table: {"n", "leq"}.
    Poset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        n: usize,
        leq: Vec<Vec<bool>>,
    },
    /// Action rows indexed by monoid element then point; null = undefined.
    Action {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        monoid: DocRef,
        space: DocRef,
        act: Vec<Vec<Option<usize>>>,
    },
    /// A subsemilattice given by its sorted member indices.
    Subset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        of: Option<DocRef>,
        elements: Vec<usize>,
    },
    /// A monoid with unary tables: + per element, optional * and labels,
    /// optionally a designated atom subset.
    Biunary {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        n: usize,
        mul: Vec<Vec<usize>>,
        one: usize,
        plus: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        star: Option<Vec<usize>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        atoms: Option<Vec<usize>>,
    },
    /// A normal-form context: a total action.
    PlContext {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        action: DocRef,
    },
    /// A restricted context: a total action plus a subsemilattice.
    QlContext {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        action: DocRef,
        y: Vec<usize>,
    },
    /// A staged run over the other document kinds.
    Pipeline {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        stages: Vec<Stage>,
    },
}

impl Doc {
    pub fn name(&self) -> Option<&str> {
        match self {
            Doc::Semilattice { name, .. }
            | Doc::Monoid { name, .. }
            | Doc::Poset { name, .. }
            | Doc::Action { name, .. }
            | Doc::Subset { name, .. }
            | Doc::Biunary { name, .. }
            | Doc::PlContext { name, .. }
            | Doc::QlContext { name, .. }
            | Doc::Pipeline { name, .. } => name.as_deref(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Doc::Semilattice { .. } => "semilattice",
            Doc::Monoid { .. } => "monoid",
            Doc::Poset { .. } => "poset",
            Doc::Action { .. } => "action",
            Doc::Subset { .. } => "subset",
            Doc::Biunary { .. } => "biunary",
            Doc::PlContext { .. } => "pl-context",
            Doc::QlContext { .. } => "ql-context",
            Doc::Pipeline { .. } => "pipeline",
        }
    }

    pub fn from_semilattice(s: &Semilattice, name: Option<String>) -> Doc {
        let n = s.n();
        Doc::Semilattice {
            name,
            n,
            meet: (0..n)
                .map(|i| (0..n).map(|j| s.meet(i, j)).collect())
                .collect(),
            one: s.one(),
        }
    }

    pub fn from_monoid(m: &FinMonoid, name: Option<String>) -> Doc {
        let n = m.n();
        Doc::Monoid {
            name,
            n,
            mul: (0..n)
                .map(|i| (0..n).map(|j| m.mul(i, j)).collect())
                .collect(),
            one: m.one(),
        }
    }

    pub fn from_poset(p: &Poset, name: Option<String>) -> Doc {
        let n = p.n();
        Doc::Poset {
            name,
            n,
            leq: (0..n)
                .map(|i| (0..n).map(|j| p.leq(i, j)).collect())
                .collect(),
        }
    }

    pub fn from_action(a: &ActionTable, name: Option<String>) -> Doc {
        let nt = a.monoid().n();
        let ny = a.space().n();
        Doc::Action {
            name,
            monoid: DocRef::Inline(Box::new(Doc::from_monoid(a.monoid(), None))),
            space: DocRef::Inline(Box::new(Doc::from_semilattice(a.space(), None))),
            act: (0..nt)
                .map(|t| (0..ny).map(|e| Some(a.act(t, e))).collect())
                .collect(),
        }
    }

    pub fn from_partial_action(pa: &PartialActionTable, name: Option<String>) -> Doc {
        let nt = pa.monoid().n();
        let ny = pa.space().n();
        Doc::Action {
            name,
            monoid: DocRef::Inline(Box::new(Doc::from_monoid(pa.monoid(), None))),
            space: DocRef::Inline(Box::new(Doc::from_semilattice(pa.space(), None))),
            act: (0..nt)
                .map(|t| (0..ny).map(|e| pa.act(t, e)).collect())
                .collect(),
        }
    }

    pub fn from_biunary(b: &BiunaryTable, atoms: Option<Vec<usize>>, name: Option<String>) -> Doc {
        let n = b.n();
        let m = b.monoid();
        Doc::Biunary {
            name,
            n,
            mul: (0..n)
                .map(|i| (0..n).map(|j| m.mul(i, j)).collect())
                .collect(),
            one: m.one(),
            plus: (0..n).map(|a| b.plus_of(a)).collect(),
            star: b
                .has_star()
                .then(|| (0..n).map(|a| b.star_of(a).expect("has star")).collect()),
            labels: Some((0..n).map(|a| Biunary::label(b, &a)).collect()),
            atoms,
        }
    }
}

/// One step of a pipeline document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "kebab-case")]
pub enum Stage {
    /// Validate a partial action: strong, order-preserving, full, and
    /// optionally the two restriction conditions for a subset.
    CheckAction {
        action: DocRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        y: Option<Vec<usize>>,
    },
    /// Globalize a partial action and re-verify the construction.
    Globalize { action: DocRef },
    /// Run a law suite against a biunary table or a context document.
    LawsCheck {
        suite: String,
        target: DocRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        samples: Option<u64>,
    },
    /// Quotient, induce, globalize, and verify the atom correspondence.
    Reconstruct {
        q: DocRef,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<usize>,
    },
    /// Build the restricted context from an action and subset, then run
    /// the reconstruction against it.
    RoundTrip {
        action: DocRef,
        y: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bound: Option<usize>,
    },
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::CheckAction { .. } => "check-action",
            Stage::Globalize { .. } => "globalize",
            Stage::LawsCheck { .. } => "laws-check",
            Stage::Reconstruct { .. } => "reconstruct",
            Stage::RoundTrip { .. } => "round-trip",
        }
    }

    fn detail(&self) -> String {
        match self {
            Stage::CheckAction { action, .. } => action.describe(),
            Stage::Globalize { action } => action.describe(),
            Stage::LawsCheck { suite, target, .. } => format!("{suite} on {}", target.describe()),
            Stage::Reconstruct { q, .. } => q.describe(),
            Stage::RoundTrip { action, .. } => action.describe(),
        }
    }
}

fn parse_doc(path: &Path, text: &str) -> Result<Doc, IoError> {
    let is_toml = path.extension().is_some_and(|e| e == "toml");
    let parsed = if is_toml {
        toml::from_str::<Doc>(text).map_err(|e| e.to_string())
    } else {
        serde_json::from_str::<Doc>(text).map_err(|e| e.to_string())
    };
    parsed.map_err(|detail| IoError::Parse {
        path: path.display().to_string(),
        detail,
    })
}

/// Loaded documents by name, plus a base directory for relative references.
pub struct Registry {
    docs: BTreeMap<String, Doc>,
    base: PathBuf,
}

impl Default for Registry {
    fn default() -> Self {
        Registry::new(".")
    }
}

impl Registry {
    pub fn new(base: impl Into<PathBuf>) -> Self {
        Registry {
            docs: BTreeMap::new(),
            base: base.into(),
        }
    }

    pub fn insert(&mut self, name: impl Into<String>, doc: Doc) -> Result<(), IoError> {
        let name = name.into();
        if self.docs.contains_key(&name) {
            return Err(IoError::Duplicate { name });
        }
        self.docs.insert(name, doc);
        Ok(())
    }

    /// Reads a document from a path (relative paths resolve against the
    /// registry base). Does not register it.
    pub fn read_doc(&self, path: &str) -> Result<Doc, IoError> {
        let p = Path::new(path);
        let full = if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        };
        let text = std::fs::read_to_string(&full).map_err(|e| IoError::Read {
            path: full.display().to_string(),
            detail: e.to_string(),
        })?;
        parse_doc(&full, &text)
    }

    /// Reads a document and registers it under its `name` field if present.
    pub fn load_file(&mut self, path: &str) -> Result<Doc, IoError> {
        let doc = self.read_doc(path)?;
        if let Some(name) = doc.name() {
            self.insert(name.to_string(), doc.clone())?;
        }
        Ok(doc)
    }

    /// Resolves a reference: registry name first, then relative path for
    /// names that look like paths, then inline.
    pub fn resolve(&self, r: &DocRef) -> Result<Doc, IoError> {
        match r {
            DocRef::Inline(d) => Ok((**d).clone()),
            DocRef::Name(name) => {
                if let Some(d) = self.docs.get(name) {
                    return Ok(d.clone());
                }
                if name.contains('/') || name.contains('.') {
                    return self.read_doc(name);
                }
                Err(IoError::Unresolved { name: name.clone() })
            }
        }
    }

    pub fn semilattice(&self, r: &DocRef) -> Result<Semilattice, IoError> {
        match self.resolve(r)? {
            Doc::Semilattice { n, meet, one, .. } => Ok(Semilattice::new(n, &meet, one)?),
            d => Err(IoError::WrongKind {
                want: "semilattice",
                got: d.kind().to_string(),
            }),
        }
    }

    pub fn monoid(&self, r: &DocRef) -> Result<FinMonoid, IoError> {
        match self.resolve(r)? {
            Doc::Monoid { n, mul, one, .. } => Ok(FinMonoid::new(n, &mul, one)?),
            d => Err(IoError::WrongKind {
                want: "monoid",
                got: d.kind().to_string(),
            }),
        }
    }

    pub fn poset(&self, r: &DocRef) -> Result<Poset, IoError> {
        match self.resolve(r)? {
            Doc::Poset { n, leq, .. } => Ok(Poset::new(n, &leq)?),
            d => Err(IoError::WrongKind {
                want: "poset",
                got: d.kind().to_string(),
            }),
        }
    }

    pub fn partial_action(&self, r: &DocRef) -> Result<PartialActionTable, IoError> {
        match self.resolve(r)? {
            Doc::Action {
                monoid, space, act, ..
            } => {
                let m = self.monoid(&monoid)?;
                let s = self.semilattice(&space)?;
                Ok(PartialActionTable::new(m, s, &act)?)
            }
            d => Err(IoError::WrongKind {
                want: "action",
                got: d.kind().to_string(),
            }),
        }
    }

    pub fn total_action(&self, r: &DocRef) -> Result<ActionTable, IoError> {
        match self.resolve(r)? {
            Doc::Action {
                monoid, space, act, ..
            } => {
                let m = self.monoid(&monoid)?;
                let s = self.semilattice(&space)?;
                let rows: Vec<Vec<usize>> = act
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|v| {
                                v.ok_or(IoError::Invalid {
                                    detail: "action is not total".into(),
                                })
                            })
                            .collect::<Result<_, _>>()
                    })
                    .collect::<Result<_, _>>()?;
                Ok(ActionTable::new(m, s, &rows)?)
            }
            d => Err(IoError::WrongKind {
                want: "action",
                got: d.kind().to_string(),
            }),
        }
    }

    pub fn subset(&self, r: &DocRef) -> Result<Vec<usize>, IoError> {
        match self.resolve(r)? {
            Doc::Subset { elements, .. } => Ok(elements),
            d => Err(IoError::WrongKind {
                want: "subset",
                got: d.kind().to_string(),
            }),
        }
    }

    /// Accepts a pl-context document or a bare total action.
    pub fn pl_context(&self, r: &DocRef) -> Result<PlContext, IoError> {
        match self.resolve(r)? {
            Doc::PlContext { action, .. } => Ok(PlContext::new(self.total_action(&action)?)),
            Doc::Action { .. } => Ok(PlContext::new(self.total_action(r)?)),
            d => Err(IoError::WrongKind {
                want: "pl-context",
                got: d.kind().to_string(),
            }),
        }
    }

    pub fn ql_context(&self, r: &DocRef) -> Result<QlContext, IoError> {
        match self.resolve(r)? {
            Doc::QlContext { action, y, .. } => {
                let pl = PlContext::new(self.total_action(&action)?);
                Ok(QlContext::new(pl, &y)?)
            }
            d => Err(IoError::WrongKind {
                want: "ql-context",
                got: d.kind().to_string(),
            }),
        }
    }

    /// Reads a subset file: either a subset document or a bare JSON array.
    pub fn load_subset(&self, path: &str) -> Result<Vec<usize>, IoError> {
        let p = Path::new(path);
        let full = if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        };
        let text = std::fs::read_to_string(&full).map_err(|e| IoError::Read {
            path: full.display().to_string(),
            detail: e.to_string(),
        })?;
        if let Ok(v) = serde_json::from_str::<Vec<usize>>(&text) {
            return Ok(v);
        }
        match parse_doc(&full, &text)? {
            Doc::Subset { elements, .. } => Ok(elements),
            d => Err(IoError::WrongKind {
                want: "subset",
                got: d.kind().to_string(),
            }),
        }
    }

    pub fn biunary(&self, r: &DocRef) -> Result<(BiunaryTable, Option<Vec<usize>>), IoError> {
        match self.resolve(r)? {
            Doc::Biunary {
                name,
                n,
                mul,
                one,
                plus,
                star,
                labels,
                atoms,
            } => {
                let m = FinMonoid::new(n, &mul, one)?;
                let table =
                    BiunaryTable::new(m, plus, star, labels, name.unwrap_or("table".into()))?;
                Ok((table, atoms))
            }
            d => Err(IoError::WrongKind {
                want: "biunary",
                got: d.kind().to_string(),
            }),
        }
    }
}

fn basis_json<B: Biunary>(b: &B, bc: &BasisCheck<B::Elem>) -> serde_json::Value {
    serde_json::json!({
        "report": bc.report,
        "branches": bc.branches,
        "duplicates": bc
            .duplicates
            .iter()
            .map(|(e, seqs)| {
                serde_json::json!({
                    "element": b.label(e),
                    "factorizations": seqs
                        .iter()
                        .map(|s| s.iter().map(|x| b.label(x)).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                })
            })
            .collect::<Vec<_>>(),
    })
}

fn suite_mode(samples: Option<u64>, seed: u64) -> Mode {
    match samples {
        Some(samples) => Mode::Sampled(SampleCfg {
            seed,
            samples: samples as usize,
        }),
        None => Mode::Exhaustive,
    }
}

fn dispatch_suite<B: Biunary>(
    b: &B,
    h: Option<AtomSet<B::Elem>>,
    suite: &str,
    bound: usize,
    mode: &Mode,
) -> Result<(serde_json::Value, bool), IoError>
where
    B::Elem: 'static,
{
    let need_atoms = || {
        h.as_ref().ok_or(IoError::Invalid {
            detail: format!("suite {suite} needs a designated atom set"),
        })
    };
    let report_value = |r: &LawReport| {
        let pass = r.pass;
        (serde_json::to_value(r).expect("serializable"), pass)
    };
    match suite {
        "left-ehresmann" => Ok(report_value(&check_left_ehresmann(b, mode))),
        "star-left-ehresmann" | "star" => Ok(report_value(&check_star_left_ehresmann(b, mode))),
        "ample" => Ok(report_value(&check_ample(b, mode))),
        "atomic" => Ok(report_value(&check_atomic(b, need_atoms()?, mode))),
        "proper" => Ok(report_value(&check_proper(b, need_atoms()?, mode, false))),
        "basis" => {
            let bc = check_basis(b, need_atoms()?, bound, mode);
            let pass = bc.report.pass;
            Ok((basis_json(b, &bc), pass))
        }
        _ => Err(IoError::Invalid {
            detail: format!("unknown suite {suite}"),
        }),
    }
}

/// Runs one law suite against a target document, returning the report as
/// JSON plus its verdict. Suites needing an atom set take it from the
/// target: a designated `atoms` list on tables, the canonical atoms on
/// contexts.
pub fn run_laws_suite(
    reg: &Registry,
    suite: &str,
    target: &DocRef,
    bound: usize,
    mode: &Mode,
) -> Result<(serde_json::Value, bool), IoError> {
    let doc = reg.resolve(target)?;
    match &doc {
        Doc::Biunary { .. } => {
            let (table, atoms) = reg.biunary(target)?;
            let h = atoms.map(AtomSet::closed);
            dispatch_suite(&table, h, suite, bound, mode)
        }
        Doc::PlContext { .. } | Doc::Action { .. } => {
            let name = doc.name().unwrap_or("pl").to_string();
            let pl = PlUniverse::new(reg.pl_context(target)?, bound, name);
            dispatch_suite(&pl, Some(pl.atom_set()), suite, bound, mode)
        }
        Doc::QlContext { .. } => {
            let name = doc.name().unwrap_or("ql").to_string();
            let ql = QlUniverse::new(reg.ql_context(target)?, bound, name);
            dispatch_suite(&ql, Some(ql.atom_set()), suite, bound, mode)
        }
        d => Err(IoError::WrongKind {
            want: "biunary, action, pl-context or ql-context",
            got: d.kind().to_string(),
        }),
    }
}

/// The serializable view of a globalization: classes by smallest member,
/// ideals as sorted class lists, the embedding, and the induced total
/// action row per monoid element.
pub fn globalization_value(ga: &GlobalizedAction) -> serde_json::Value {
    let rep_of = |members: &[(usize, usize)]| {
        let (t, e) = members.iter().min().expect("nonempty class");
        serde_json::json!([t, e])
    };
    let sigma: Vec<_> = ga.sq.members().iter().map(|m| rep_of(m)).collect();
    let mut tau_members: Vec<Vec<(usize, usize)>> = vec![Vec::new(); ga.sq.tau_count()];
    for (c, m) in ga.sq.members().iter().enumerate() {
        tau_members[ga.sq.tau_of_sigma(c)].extend(m.iter().copied());
    }
    let tau: Vec<_> = tau_members
        .iter()
        .map(|m| {
            let mut m = m.clone();
            m.sort_unstable();
            rep_of(&m)
        })
        .collect();
    let ideals: Vec<Vec<usize>> = ga
        .ideals
        .iter()
        .map(|i| {
            let mut i = i.clone();
            i.sort_unstable();
            i
        })
        .collect();
    let nt = ga.sq.partial_action().monoid().n();
    let bullet: Vec<Vec<usize>> = (0..nt)
        .map(|t| (0..ga.big.n()).map(|c| ga.bullet.act(t, c)).collect())
        .collect();
    serde_json::json!({
        "sigma_classes": sigma,
        "tau_classes": tau,
        "ideals": ideals,
        "identity_ideal": ga.big.one(),
        "kappa": ga.kappa,
        "bullet": bullet,
    })
}

fn stage_report(stage: &Stage, value: serde_json::Value, pass: bool) -> StageReport {
    StageReport {
        stage: stage.name().to_string(),
        detail: stage.detail(),
        pass,
        error: None,
        report: Some(value),
    }
}

fn run_stage(reg: &Registry, stage: &Stage, seed: u64) -> Result<StageReport, IoError> {
    match stage {
        Stage::CheckAction { action, y } => {
            let pa = reg.partial_action(action)?;
            let mut checks = vec![
                check_strong(&pa),
                check_order_preserving(&pa),
                check_full(&pa),
            ];
            if let Some(y) = y {
                if !pa.is_total() {
                    return Err(IoError::Invalid {
                        detail: "restriction conditions need a total action".into(),
                    });
                }
                let total = reg.total_action(action)?;
                let (a, b) = check_conditions_ab(&total, y)?;
                checks.push(a);
                checks.push(b);
            }
            let report = LawReport::new(
                "action",
                action.describe(),
                None,
                "exhaustive",
                None,
                checks,
            );
            let pass = report.pass;
            Ok(stage_report(
                stage,
                serde_json::to_value(&report).expect("serializable"),
                pass,
            ))
        }
        Stage::Globalize { action } => {
            let pa = reg.partial_action(action)?;
            let ga = globalize(&pa)?;
            let report = verify_globalisation(&ga);
            let pass = report.pass;
            Ok(stage_report(
                stage,
                serde_json::to_value(&report).expect("serializable"),
                pass,
            ))
        }
        Stage::LawsCheck {
            suite,
            target,
            bound,
            samples,
        } => {
            let bound = bound.unwrap_or(4);
            let mode = suite_mode(*samples, seed);
            let (value, pass) = run_laws_suite(reg, suite, target, bound, &mode)?;
            Ok(stage_report(stage, value, pass))
        }
        Stage::Reconstruct { q, bound } => {
            let bound = bound.unwrap_or(4);
            let report = reconstruct_doc(reg, q, bound, seed)?;
            let pass = report.pass;
            Ok(stage_report(
                stage,
                serde_json::to_value(&report).expect("serializable"),
                pass,
            ))
        }
        Stage::RoundTrip { action, y, bound } => {
            let bound = bound.unwrap_or(4);
            let pl = reg.pl_context(action)?;
            let q = QlContext::new(pl, y)?;
            let universe = QlUniverse::new(q, bound, action.describe());
            let h = universe.atom_set();
            let mode = Mode::Sampled(SampleCfg {
                seed,
                samples: 500,
            });
            let report = rebuild_and_theta(&universe, &h, bound, &mode)?;
            let pass = report.pass;
            Ok(stage_report(
                stage,
                serde_json::to_value(&report).expect("serializable"),
                pass,
            ))
        }
    }
}

/// Reconstruction entry point over a document: a biunary table with
/// designated atoms, or a restricted context enumerated to the bound.
pub fn reconstruct_doc(
    reg: &Registry,
    q: &DocRef,
    bound: usize,
    seed: u64,
) -> Result<crate::report::IsoReport, IoError> {
    let mode = Mode::Sampled(SampleCfg { seed, samples: 500 });
    match reg.resolve(q)? {
        Doc::Biunary { .. } => {
            let (table, atoms) = reg.biunary(q)?;
            let atoms = atoms.ok_or(IoError::Invalid {
                detail: "reconstruction needs a designated atom set".into(),
            })?;
            Ok(rebuild_and_theta(&table, &AtomSet::closed(atoms), bound, &mode)?)
        }
        Doc::QlContext { .. } => {
            let qc = reg.ql_context(q)?;
            let universe = QlUniverse::new(qc, bound, q.describe());
            let h = universe.atom_set();
            Ok(rebuild_and_theta(&universe, &h, bound, &mode)?)
        }
        d => Err(IoError::WrongKind {
            want: "biunary or ql-context",
            got: d.kind().to_string(),
        }),
    }
}

/// Executes a pipeline document: stages run in order and a failing or
/// erroring stage halts the run, leaving the partial report.
pub fn run_pipeline(
    reg: &Registry,
    doc: &Doc,
    seed_override: Option<u64>,
) -> Result<PipelineReport, IoError> {
    let Doc::Pipeline { seed, stages, .. } = doc else {
        return Err(IoError::WrongKind {
            want: "pipeline",
            got: doc.kind().to_string(),
        });
    };
    let seed = seed_override.or(*seed).unwrap_or(0);
    let mut reports = Vec::new();
    let mut pass = true;
    for stage in stages {
        match run_stage(reg, stage, seed) {
            Ok(sr) => {
                let stage_pass = sr.pass;
                reports.push(sr);
                if !stage_pass {
                    pass = false;
                    break;
                }
            }
            Err(e) => {
                reports.push(StageReport {
                    stage: stage.name().to_string(),
                    detail: stage.detail(),
                    pass: false,
                    error: Some(e.to_string()),
                    report: None,
                });
                pass = false;
                break;
            }
        }
    }
    Ok(PipelineReport {
        seed,
        stages: reports,
        pass,
    })
}
