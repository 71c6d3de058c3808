use serde::{Deserialize, Serialize};

/// One named verification with an optional counterexample.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Check {
    pub law: String,
    pub pass: bool,
    pub witness: Option<String>,
    pub cases: u64,
}

impl Check {
    pub fn pass(law: impl Into<String>, cases: u64) -> Self {
        Check {
            law: law.into(),
            pass: true,
            witness: None,
            cases,
        }
    }

    pub fn fail(law: impl Into<String>, witness: impl Into<String>, cases: u64) -> Self {
        Check {
            law: law.into(),
            pass: false,
            witness: Some(witness.into()),
            cases,
        }
    }

    pub fn from_witness(law: impl Into<String>, witness: Option<String>, cases: u64) -> Self {
        match witness {
            None => Check::pass(law, cases),
            Some(w) => Check::fail(law, w, cases),
        }
    }
}

/// Outcome of a law suite over one structure.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawReport {
    pub suite: String,
    pub target: String,
    pub bound: Option<usize>,
    pub mode: String,
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl LawReport {
    pub fn new(
        suite: impl Into<String>,
        target: impl Into<String>,
        bound: Option<usize>,
        mode: impl Into<String>,
        seed: Option<u64>,
        checks: Vec<Check>,
    ) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        LawReport {
            suite: suite.into(),
            target: target.into(),
            bound,
            mode: mode.into(),
            seed,
            checks,
            pass,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Outcome of re-verifying a globalized action against its partial action.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalisationReport {
    pub sigma_classes: usize,
    pub tau_classes: usize,
    pub ideal_count: usize,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// How often each multiplication branch fired during canonical-form work.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct BranchCounts {
    pub prepend: u64,
    pub merge_projection: u64,
    pub merge_absorb: u64,
    pub split_incomparable: u64,
}

impl BranchCounts {
    pub fn all_hit(&self) -> bool {
        self.prepend > 0
            && self.merge_projection > 0
            && self.merge_absorb > 0
            && self.split_incomparable > 0
    }

    pub fn add(&mut self, other: &BranchCounts) {
        self.prepend += other.prepend;
        self.merge_projection += other.merge_projection;
        self.merge_absorb += other.merge_absorb;
        self.split_incomparable += other.split_incomparable;
    }
}

/// Outcome of rebuilding a structure from its quotient data and comparing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsoReport {
    pub bound: usize,
    pub t_size: usize,
    pub e_size: usize,
    pub tau_classes: usize,
    pub ideal_count: usize,
    pub atom_count: usize,
    pub element_count: usize,
    pub theta_atoms: Vec<[String; 2]>,
    pub branch_counts: BranchCounts,
    pub checks: Vec<Check>,
    pub pass: bool,
}

/// Aggregate over a sequence of pipeline stages.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    pub seed: u64,
    pub stages: Vec<StageReport>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: String,
    pub detail: String,
    pub pass: bool,
    pub error: Option<String>,
    pub report: Option<serde_json::Value>,
}
