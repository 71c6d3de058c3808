use thiserror::Error;

/// Validation and construction failures.
///
/// Every variant carries enough index data to point at a concrete
/// counterexample in the offending table, so callers can surface witnesses
/// without re-deriving them.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("row {row} has length {got}, expected {want}")]
    RaggedTable { row: usize, want: usize, got: usize },
    #[error("table has {got} rows, expected {want}")]
    WrongRowCount { want: usize, got: usize },
    #[error("entry ({row},{col}) = {value} is out of range for size {n}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        n: usize,
    },
    #[error("index {value} is out of range for size {n}")]
    IndexOutOfRange { value: usize, n: usize },
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("not commutative: {a}*{b} != {b}*{a}")]
    NotCommutative { a: usize, b: usize },
    #[error("not idempotent: {a}*{a} != {a}")]
    NotIdempotent { a: usize },
    #[error("designated identity {one} fails at element {witness}")]
    NotIdentity { one: usize, witness: usize },
    #[error("order relation is not reflexive at {a}")]
    NotReflexive { a: usize },
    #[error("order relation is not antisymmetric on {a}, {b}")]
    NotAntisymmetric { a: usize, b: usize },
    #[error("order relation is not transitive on {a} <= {b} <= {c}")]
    NotTransitive { a: usize, b: usize, c: usize },
    #[error("elements {a} and {b} have no greatest lower bound")]
    NoMeet { a: usize, b: usize },
    #[error("poset has no greatest element")]
    NoTop,
    #[error("unit element does not act as the identity at point {x}")]
    ActionUnit { x: usize },
    #[error("action composition fails: s={s}, t={t}, x={x}")]
    ActionComposition { s: usize, t: usize, x: usize },
    #[error("partial action: 1*{x} must be defined and equal {x}")]
    PartialUnit { x: usize },
    #[error("partial action composition fails at s={s}, t={t}, x={x}")]
    PartialComposition { s: usize, t: usize, x: usize },
    #[error("action of {t} is not order-preserving on {x} <= {y}")]
    NotOrderPreserving { t: usize, x: usize, y: usize },
    #[error("partial action is not strong at s={s}, t={t}, x={x}")]
    NotStrong { s: usize, t: usize, x: usize },
    #[error("subset is not closed under meet: {a} ^ {b} escapes it")]
    NotMeetClosed { a: usize, b: usize },
    #[error("subset has no greatest element of its own")]
    NoSubsetTop,
    #[error("subset is empty")]
    EmptySubset,
    #[error("duplicate element {value} in subset")]
    DuplicateInSubset { value: usize },
    #[error("downward closure fails: t={t} maps {f} into the subset but not {e} <= {f}")]
    ConditionA { t: usize, e: usize, f: usize },
    #[error("element t={t} maps no subset element into the subset")]
    ConditionB { t: usize },
    #[error("not left-cancellative: {a}*{b} = {a}*{c} but {b} != {c}")]
    NotLeftCancellative { a: usize, b: usize, c: usize },
    #[error("reduction exceeded its step budget of {budget}")]
    ReductionBudget { budget: usize },
    #[error("parse error: {detail}")]
    Parse { detail: String },
    #[error("malformed normal form: {reason}")]
    MalformedNormalForm { reason: String },
    #[error("malformed canonical form: {reason}")]
    MalformedCanonicalForm { reason: String },
    #[error("element is not a member: {detail}")]
    NotAMember { detail: String },
    #[error("structure has no star operation")]
    NoStar,
    #[error("induced action is ill-defined: {detail}")]
    IllDefinedInducedAction { detail: String },
    #[error("internal invariant violated: {detail}")]
    Internal { detail: String },
}
