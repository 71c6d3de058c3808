//! Equational law suites for biunary monoids and checks for generating
//! sets: the atomic-set axioms, properness, and canonical-form existence
//! and uniqueness.
//!
//! Structures are checked through the [`Biunary`] trait, which exposes the
//! product, the two unary operations, a finite element listing (the whole
//! structure, or a bounded window of an infinite one), and the congruence
//! identifying all projections with the identity. Two-variable laws run
//! either exhaustively over the listing or over seeded random samples.

use std::collections::BTreeMap;
use std::fmt::{Debug, Display};
use std::hash::Hash;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::congruence::{congruence_closure, Congruence};
use crate::error::Error;
use crate::monoid::FinMonoid;
use crate::pl::{PlContext, PlElement};
use crate::ql::QlContext;
use crate::report::{BranchCounts, Check, LawReport};

/// A biunary monoid presented operationally: total product, + on every
/// element, * where available, and a finite listing to quantify over.
pub trait Biunary {
    type Elem: Clone + Eq + Ord + Hash + Display + Debug;

    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn plus(&self, a: &Self::Elem) -> Self::Elem;
    /// None when the structure carries no * operation.
    fn star(&self, a: &Self::Elem) -> Option<Self::Elem>;
    /// The elements quantified over. The whole structure when
    /// `is_exhaustive`, otherwise a bounded window closed under + and *.
    fn elements(&self) -> &[Self::Elem];
    fn is_exhaustive(&self) -> bool;
    fn describe(&self) -> String;
    /// The congruence identifying every projection with the identity.
    fn sigma_eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn label(&self, a: &Self::Elem) -> String {
        format!("{a}")
    }

    /// Enumeration bound of the listing, when there is one.
    fn bound(&self) -> Option<usize> {
        None
    }

    /// The distinct + values of the listed elements, sorted.
    fn projections(&self) -> Vec<Self::Elem> {
        let mut v: Vec<Self::Elem> = self.elements().iter().map(|a| self.plus(a)).collect();
        v.sort();
        v.dedup();
        v
    }
}

/// How to quantify two-variable laws.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled(SampleCfg),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleCfg {
    pub seed: u64,
    pub samples: usize,
}

impl Default for SampleCfg {
    fn default() -> Self {
        SampleCfg {
            seed: 0,
            samples: 1000,
        }
    }
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled(_) => "sampled",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Mode::Exhaustive => None,
            Mode::Sampled(cfg) => Some(cfg.seed),
        }
    }
}

/// Whether an element is a projection: a fixed point of +.
pub fn is_projection<B: Biunary>(b: &B, x: &B::Elem) -> bool {
    b.plus(x) == *x
}

/// Order on projections: e <= f when ef = e.
fn proj_leq<B: Biunary>(b: &B, e: &B::Elem, f: &B::Elem) -> bool {
    b.mul(e, f) == *e
}

fn proj_lt<B: Biunary>(b: &B, e: &B::Elem, f: &B::Elem) -> bool {
    e != f && proj_leq(b, e, f)
}

/// Runs a predicate over index pairs per the mode; returns the first
/// violating pair and the number of cases inspected.
fn find_pair(
    n: usize,
    m: usize,
    mode: &Mode,
    mut holds: impl FnMut(usize, usize) -> bool,
) -> (Option<(usize, usize)>, u64) {
    let mut cases = 0u64;
    if n == 0 || m == 0 {
        return (None, 0);
    }
    match mode {
        Mode::Exhaustive => {
            for i in 0..n {
                for j in 0..m {
                    cases += 1;
                    if !holds(i, j) {
                        return (Some((i, j)), cases);
                    }
                }
            }
            (None, cases)
        }
        Mode::Sampled(cfg) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for _ in 0..cfg.samples {
                let i = rng.random_range(0..n);
                let j = rng.random_range(0..m);
                cases += 1;
                if !holds(i, j) {
                    return (Some((i, j)), cases);
                }
            }
            (None, cases)
        }
    }
}

fn check_unary<B: Biunary>(
    b: &B,
    law: &str,
    mut holds: impl FnMut(&B::Elem) -> bool,
) -> Check {
    let elems = b.elements();
    for x in elems {
        if !holds(x) {
            return Check::fail(law, format!("x = {}", b.label(x)), elems.len() as u64);
        }
    }
    Check::pass(law, elems.len() as u64)
}

fn check_binary<B: Biunary>(
    b: &B,
    law: &str,
    mode: &Mode,
    mut holds: impl FnMut(&B::Elem, &B::Elem) -> bool,
) -> Check {
    let elems = b.elements();
    let (bad, cases) = find_pair(elems.len(), elems.len(), mode, |i, j| {
        holds(&elems[i], &elems[j])
    });
    match bad {
        None => Check::pass(law, cases),
        Some((i, j)) => Check::fail(
            law,
            format!("x = {}, y = {}", b.label(&elems[i]), b.label(&elems[j])),
            cases,
        ),
    }
}

fn plus_suite_checks<B: Biunary>(b: &B, mode: &Mode) -> Vec<Check> {
    let one = b.one();
    let mut checks = vec![
        check_unary(b, "one-two-sided-identity", |x| {
            b.mul(&one, x) == *x && b.mul(x, &one) == *x
        }),
        check_unary(b, "plus-left-absorb", |x| b.mul(&b.plus(x), x) == *x),
        check_binary(b, "plus-product-projection", mode, |x, y| {
            let p = b.mul(&b.plus(x), &b.plus(y));
            b.plus(&p) == p
        }),
        check_binary(b, "plus-commute", mode, |x, y| {
            b.mul(&b.plus(x), &b.plus(y)) == b.mul(&b.plus(y), &b.plus(x))
        }),
        check_binary(b, "plus-left-congruence", mode, |x, y| {
            b.plus(&b.mul(x, y)) == b.plus(&b.mul(x, &b.plus(y)))
        }),
        check_unary(b, "plus-idempotent", |x| {
            let p = b.plus(x);
            b.mul(&p, &p) == p
        }),
        check_unary(b, "plus-of-plus", |x| {
            let p = b.plus(x);
            b.plus(&p) == p
        }),
    ];
    checks.push({
        let projections = b.projections();
        let elems = b.elements();
        let (bad, cases) = find_pair(elems.len(), projections.len(), mode, |i, j| {
            let (x, e) = (&elems[i], &projections[j]);
            b.mul(e, x) != *x || proj_leq(b, &b.plus(x), e)
        });
        match bad {
            None => Check::pass("plus-least-left-identity", cases),
            Some((i, j)) => Check::fail(
                "plus-least-left-identity",
                format!(
                    "x = {}, e = {}",
                    b.label(&elems[i]),
                    b.label(&projections[j])
                ),
                cases,
            ),
        }
    });
    checks
}

/// The defining laws of a left Ehresmann monoid under +, the folklore
/// consequences, and the least-left-identity property of x+.
pub fn check_left_ehresmann<B: Biunary>(b: &B, mode: &Mode) -> LawReport {
    LawReport::new(
        "left-ehresmann",
        b.describe(),
        b.bound(),
        mode.name(),
        mode.seed(),
        plus_suite_checks(b, mode),
    )
}

fn star_missing_report<B: Biunary>(b: &B, suite: &str, mode: &Mode) -> LawReport {
    LawReport::new(
        suite,
        b.describe(),
        b.bound(),
        mode.name(),
        mode.seed(),
        vec![Check::fail("star-exists", "structure carries no *", 1)],
    )
}

/// The + suite together with the * laws: * values are right identities,
/// least among projections, and the two operations exchange projections.
pub fn check_star_left_ehresmann<B: Biunary>(b: &B, mode: &Mode) -> LawReport {
    if b.star(&b.one()).is_none() {
        return star_missing_report(b, "star-left-ehresmann", mode);
    }
    let star = |x: &B::Elem| b.star(x).expect("star present");
    let mut checks = plus_suite_checks(b, mode);
    checks.push(check_unary(b, "one-star", |x| {
        let _ = x;
        star(&b.one()) == b.one()
    }));
    checks.push(check_unary(b, "star-right-absorb", |x| {
        b.mul(x, &star(x)) == *x
    }));
    checks.push(check_unary(b, "star-of-star", |x| {
        let s = star(x);
        star(&s) == s
    }));
    checks.push(check_binary(b, "star-commute", mode, |x, y| {
        b.mul(&star(x), &star(y)) == b.mul(&star(y), &star(x))
    }));
    checks.push(check_binary(b, "star-interaction", mode, |x, y| {
        let xys = star(&b.mul(x, &star(y)));
        b.mul(&xys, &star(y)) == xys
    }));
    checks.push(check_unary(b, "star-plus", |x| {
        let s = star(x);
        b.plus(&s) == s
    }));
    checks.push(check_unary(b, "plus-star", |x| {
        let p = b.plus(x);
        star(&p) == p
    }));
    checks.push({
        let projections = b.projections();
        let elems = b.elements();
        let (bad, cases) = find_pair(elems.len(), projections.len(), mode, |i, j| {
            let (x, e) = (&elems[i], &projections[j]);
            b.mul(x, e) != *x || proj_leq(b, &star(x), e)
        });
        match bad {
            None => Check::pass("star-least-right-identity", cases),
            Some((i, j)) => Check::fail(
                "star-least-right-identity",
                format!(
                    "x = {}, e = {}",
                    b.label(&elems[i]),
                    b.label(&projections[j])
                ),
                cases,
            ),
        }
    });
    LawReport::new(
        "star-left-ehresmann",
        b.describe(),
        b.bound(),
        mode.name(),
        mode.seed(),
        checks,
    )
}

/// The ample identity x y+ = (xy)+ x. Holds in left restriction monoids;
/// fails in general normal-form monoids.
pub fn check_ample<B: Biunary>(b: &B, mode: &Mode) -> LawReport {
    let checks = vec![check_binary(b, "ample-identity", mode, |x, y| {
        b.mul(x, &b.plus(y)) == b.mul(&b.plus(&b.mul(x, y)), x)
    })];
    LawReport::new(
        "ample",
        b.describe(),
        b.bound(),
        mode.name(),
        mode.seed(),
        checks,
    )
}

/// A candidate generating set with a membership test that may reach beyond
/// the listed atoms (for structures whose atom set is infinite).
pub struct AtomSet<'a, E> {
    atoms: Vec<E>,
    member: Box<dyn Fn(&E) -> bool + 'a>,
}

impl<'a, E: Clone + Ord + 'static> AtomSet<'a, E> {
    /// Membership is exactly the listed atoms.
    pub fn closed(atoms: Vec<E>) -> AtomSet<'static, E> {
        let set: std::collections::BTreeSet<E> = atoms.iter().cloned().collect();
        AtomSet {
            atoms,
            member: Box::new(move |x| set.contains(x)),
        }
    }
}

impl<'a, E> AtomSet<'a, E> {
    /// Listed atoms for quantification, a predicate for membership.
    pub fn with_membership(atoms: Vec<E>, member: impl Fn(&E) -> bool + 'a) -> Self {
        AtomSet {
            atoms,
            member: Box::new(member),
        }
    }

    pub fn atoms(&self) -> &[E] {
        &self.atoms
    }

    pub fn contains(&self, x: &E) -> bool {
        (self.member)(x)
    }
}

/// The five axioms of an atomic subset: contains the projections, closed
/// under right multiplication by projections and compatible left
/// multiplication (with the stated * values), meets every sigma class, and
/// admits witnesses refining factorizations within a sigma class.
pub fn check_atomic<B: Biunary>(b: &B, h: &AtomSet<B::Elem>, mode: &Mode) -> LawReport {
    if b.star(&b.one()).is_none() {
        return star_missing_report(b, "atomic", mode);
    }
    let star = |x: &B::Elem| b.star(x).expect("star present");
    let projections = b.projections();
    let atoms = h.atoms();
    let mut checks = Vec::new();

    {
        let mut witness = None;
        for e in &projections {
            if !h.contains(e) {
                witness = Some(format!("e = {}", b.label(e)));
                break;
            }
        }
        checks.push(Check::from_witness(
            "atoms-contain-projections",
            witness,
            projections.len() as u64,
        ));
    }

    {
        let (bad, cases) = find_pair(atoms.len(), projections.len(), mode, |i, j| {
            let (hh, e) = (&atoms[i], &projections[j]);
            let he = b.mul(hh, e);
            h.contains(&he) && star(&he) == b.mul(&star(hh), e)
        });
        let witness = bad.map(|(i, j)| {
            format!("h = {}, e = {}", b.label(&atoms[i]), b.label(&projections[j]))
        });
        checks.push(Check::from_witness("atoms-absorb-projections", witness, cases));
    }

    {
        let (bad, cases) = find_pair(atoms.len(), atoms.len(), mode, |i, j| {
            let (hh, k) = (&atoms[i], &atoms[j]);
            if is_projection(b, k) || !proj_leq(b, &b.plus(k), &star(hh)) {
                return true;
            }
            let hk = b.mul(hh, k);
            h.contains(&hk) && star(&hk) == star(k)
        });
        let witness =
            bad.map(|(i, j)| format!("h = {}, k = {}", b.label(&atoms[i]), b.label(&atoms[j])));
        checks.push(Check::from_witness("atoms-compose", witness, cases));
    }

    {
        let elems = b.elements();
        let mut witness = None;
        let mut cases = 0u64;
        for m in elems {
            cases += 1;
            if !atoms.iter().any(|hh| b.sigma_eq(m, hh)) {
                witness = Some(format!("m = {}", b.label(m)));
                break;
            }
        }
        checks.push(Check::from_witness("atoms-meet-classes", witness, cases));
    }

    {
        let mut by_star: BTreeMap<B::Elem, Vec<usize>> = BTreeMap::new();
        for (i, a) in atoms.iter().enumerate() {
            by_star.entry(star(a)).or_default().push(i);
        }
        let (bad, cases) = find_pair(atoms.len(), atoms.len(), mode, |i, j| {
            let (hh, k) = (&atoms[i], &atoms[j]);
            let hk = b.mul(hh, k);
            let antecedent = by_star
                .get(&star(k))
                .is_some_and(|ws| ws.iter().any(|&w| b.sigma_eq(&hk, &atoms[w])));
            if !antecedent {
                return true;
            }
            atoms
                .iter()
                .any(|u| b.sigma_eq(u, hh) && proj_leq(b, &b.plus(k), &star(u)))
        });
        let witness =
            bad.map(|(i, j)| format!("h = {}, k = {}", b.label(&atoms[i]), b.label(&atoms[j])));
        checks.push(Check::from_witness("atoms-refine-witnesses", witness, cases));
    }

    LawReport::new(
        "atomic",
        b.describe(),
        b.bound(),
        mode.name(),
        mode.seed(),
        checks,
    )
}

/// First pair of listed atoms violating properness: sigma-related, equal *,
/// yet distinct.
pub fn properness_failure<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
) -> Option<(B::Elem, B::Elem)> {
    let atoms = h.atoms();
    for (i, x) in atoms.iter().enumerate() {
        for y in &atoms[i + 1..] {
            if b.star(x) == b.star(y) && b.sigma_eq(x, y) && x != y {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
}

/// Properness of the atom set: sigma together with equal * separates atoms.
/// When the set is also atomic, two reformulations are checked: sigma on
/// atoms is the exchange relation h k* = k h*, and only projections are
/// sigma-related to the identity.
pub fn check_proper<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
    mode: &Mode,
    assume_atomic: bool,
) -> LawReport {
    if b.star(&b.one()).is_none() {
        return star_missing_report(b, "proper", mode);
    }
    let star = |x: &B::Elem| b.star(x).expect("star present");
    let atoms = h.atoms();
    let mut checks = Vec::new();

    {
        let (bad, cases) = find_pair(atoms.len(), atoms.len(), mode, |i, j| {
            let (x, y) = (&atoms[i], &atoms[j]);
            !(star(x) == star(y) && b.sigma_eq(x, y)) || x == y
        });
        let witness =
            bad.map(|(i, j)| format!("h = {}, k = {}", b.label(&atoms[i]), b.label(&atoms[j])));
        checks.push(Check::from_witness("atoms-proper", witness, cases));
    }

    if assume_atomic {
        {
            let (bad, cases) = find_pair(atoms.len(), atoms.len(), mode, |i, j| {
                let (x, y) = (&atoms[i], &atoms[j]);
                b.sigma_eq(x, y) == (b.mul(x, &star(y)) == b.mul(y, &star(x)))
            });
            let witness = bad.map(|(i, j)| {
                format!("h = {}, k = {}", b.label(&atoms[i]), b.label(&atoms[j]))
            });
            checks.push(Check::from_witness("sigma-is-exchange", witness, cases));
        }
        {
            let one = b.one();
            let mut witness = None;
            for x in atoms {
                if b.sigma_eq(x, &one) != is_projection(b, x) {
                    witness = Some(format!("h = {}", b.label(x)));
                    break;
                }
            }
            checks.push(Check::from_witness(
                "sigma-trivial-only-on-projections",
                witness,
                atoms.len() as u64,
            ));
        }
    }

    LawReport::new(
        "proper",
        b.describe(),
        b.bound(),
        mode.name(),
        mode.seed(),
        checks,
    )
}

/// Whether a sequence of atoms satisfies the canonical-form conditions:
/// non-empty, no projection past the first atom, * of each strictly below
/// + of the next.
pub fn is_h_canonical_seq<B: Biunary>(b: &B, seq: &[B::Elem]) -> bool {
    if seq.is_empty() {
        return false;
    }
    if seq[1..].iter().any(|x| is_projection(b, x)) {
        return false;
    }
    seq.windows(2).all(|w| match b.star(&w[0]) {
        Some(s) => proj_lt(b, &s, &b.plus(&w[1])),
        None => false,
    })
}

/// Rewrites a product of atoms to canonical form by prepending from the
/// right. At each step the incoming atom h and the current first atom k
/// fall into one of four branches: merge when k is a projection, merge when
/// k+ sits below h*, plain prepend when h* sits strictly below k+, and a
/// split through k+ when the two are incomparable. Merged products must
/// remain atoms; escaping the atom set is reported as an error string.
pub fn h_reduce<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
    word: &[B::Elem],
    counts: &mut BranchCounts,
) -> Result<Vec<B::Elem>, String> {
    let star = |x: &B::Elem| {
        b.star(x)
            .ok_or_else(|| format!("no * value for {}", b.label(x)))
    };
    let Some((last, init)) = word.split_last() else {
        return Err("empty atom word".to_string());
    };
    let mut canon = vec![last.clone()];
    for hh in init.iter().rev() {
        let k = canon[0].clone();
        if is_projection(b, &k) {
            let merged = b.mul(hh, &k);
            if !h.contains(&merged) {
                return Err(format!(
                    "projection merge escapes the atom set: {} times {}",
                    b.label(hh),
                    b.label(&k)
                ));
            }
            counts.merge_projection += 1;
            canon[0] = merged;
        } else if proj_leq(b, &b.plus(&k), &star(hh)?) {
            let merged = b.mul(hh, &k);
            if !h.contains(&merged) {
                return Err(format!(
                    "absorbing merge escapes the atom set: {} times {}",
                    b.label(hh),
                    b.label(&k)
                ));
            }
            counts.merge_absorb += 1;
            canon[0] = merged;
        } else if proj_leq(b, &star(hh)?, &b.plus(&k)) {
            counts.prepend += 1;
            canon.insert(0, hh.clone());
        } else {
            let he = b.mul(hh, &b.plus(&k));
            if !h.contains(&he) {
                return Err(format!(
                    "split through a + value escapes the atom set: {} times {}",
                    b.label(hh),
                    b.label(&b.plus(&k))
                ));
            }
            counts.split_incomparable += 1;
            canon.insert(0, he);
        }
    }
    if !is_h_canonical_seq(b, &canon) {
        return Err(format!(
            "rewriting produced a non-canonical sequence of length {}",
            canon.len()
        ));
    }
    Ok(canon)
}

/// All canonical sequences over the listed atoms with length at most
/// `max_len`, in lexicographic order of atom indices.
pub fn enumerate_h_canonical_seqs<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
    max_len: usize,
) -> Vec<Vec<B::Elem>> {
    let atoms = h.atoms();
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut stack: Vec<Vec<usize>> = (0..atoms.len()).rev().map(|i| vec![i]).collect();
    while let Some(seq) = stack.pop() {
        out.push(seq.iter().map(|&i| atoms[i].clone()).collect());
        if seq.len() >= max_len {
            continue;
        }
        let last = &atoms[*seq.last().expect("non-empty")];
        let Some(last_star) = b.star(last) else {
            continue;
        };
        for i in (0..atoms.len()).rev() {
            let a = &atoms[i];
            if !is_projection(b, a) && proj_lt(b, &last_star, &b.plus(a)) {
                let mut next = seq.clone();
                next.push(i);
                stack.push(next);
            }
        }
    }
    out
}

/// Outcome of the canonical-form suite, with the rewrite branch counts and
/// any elements realized by more than one canonical sequence.
pub struct BasisCheck<E> {
    pub report: LawReport,
    pub branches: BranchCounts,
    pub duplicates: Vec<(E, Vec<Vec<E>>)>,
}

fn product_of<B: Biunary>(b: &B, word: &[B::Elem]) -> B::Elem {
    let mut acc = b.one();
    for x in word {
        acc = b.mul(&acc, x);
    }
    acc
}

/// Canonical-form suite over atom words of length at most `bound`:
///
/// - rewriting any atom word yields a canonical sequence, no longer than
///   the word, with the same product;
/// - distinct canonical sequences denote distinct elements;
/// - when uniqueness holds, atom products detect the composability order
///   (hk an atom forces k+ below h*) and the right-to-left refactoring
///   formula reproduces the canonical form of any minimal-length word.
pub fn check_basis<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
    bound: usize,
    mode: &Mode,
) -> BasisCheck<B::Elem> {
    let mut branches = BranchCounts::default();
    if b.star(&b.one()).is_none() {
        return BasisCheck {
            report: star_missing_report(b, "basis", mode),
            branches,
            duplicates: Vec::new(),
        };
    }
    let star = |x: &B::Elem| b.star(x).expect("star present");
    let atoms = h.atoms();
    let mut checks = Vec::new();

    // Part one: rewriting agrees with the product on atom words.
    {
        let mut witness = None;
        let mut cases = 0u64;
        let words: Vec<Vec<usize>> = match mode {
            Mode::Exhaustive => {
                let mut all = Vec::new();
                let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
                for _ in 0..bound {
                    let mut next = Vec::new();
                    for w in &layer {
                        for i in 0..atoms.len() {
                            let mut v = w.clone();
                            v.push(i);
                            next.push(v);
                        }
                    }
                    all.extend(next.iter().cloned());
                    layer = next;
                }
                all
            }
            Mode::Sampled(cfg) => {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                (0..cfg.samples)
                    .map(|_| {
                        let len = rng.random_range(1..=bound.max(1));
                        (0..len).map(|_| rng.random_range(0..atoms.len())).collect()
                    })
                    .collect()
            }
        };
        for iw in &words {
            if witness.is_some() {
                break;
            }
            cases += 1;
            let word: Vec<B::Elem> = iw.iter().map(|&i| atoms[i].clone()).collect();
            match h_reduce(b, h, &word, &mut branches) {
                Err(msg) => {
                    witness = Some(format!("word of length {}: {}", word.len(), msg));
                }
                Ok(canon) => {
                    if canon.len() > word.len() {
                        witness = Some(format!(
                            "canonical length {} exceeds word length {}",
                            canon.len(),
                            word.len()
                        ));
                    } else if product_of(b, &canon) != product_of(b, &word) {
                        witness = Some(format!(
                            "product changed for a word of length {}",
                            word.len()
                        ));
                    }
                }
            }
        }
        checks.push(Check::from_witness("rewrite-to-canonical", witness, cases));
    }

    // Part two: distinct canonical sequences realize distinct elements.
    let mut duplicates: Vec<(B::Elem, Vec<Vec<B::Elem>>)> = Vec::new();
    {
        let seqs = enumerate_h_canonical_seqs(b, h, bound);
        let cases = seqs.len() as u64;
        let mut by_value: BTreeMap<B::Elem, Vec<Vec<B::Elem>>> = BTreeMap::new();
        for seq in seqs {
            by_value.entry(product_of(b, &seq)).or_default().push(seq);
        }
        for (value, group) in by_value {
            if group.len() > 1 {
                duplicates.push((value, group));
            }
        }
        let witness = duplicates.first().map(|(value, group)| {
            format!(
                "element {} has {} canonical forms",
                b.label(value),
                group.len()
            )
        });
        checks.push(Check::from_witness("canonical-unique", witness, cases));
    }
    let unique = duplicates.is_empty();

    // Part three, on structures where uniqueness held.
    if unique {
        {
            let (bad, cases) = find_pair(atoms.len(), atoms.len(), mode, |i, j| {
                let (hh, k) = (&atoms[i], &atoms[j]);
                if is_projection(b, k) || !h.contains(&b.mul(hh, k)) {
                    return true;
                }
                proj_leq(b, &b.plus(k), &star(hh))
            });
            let witness = bad.map(|(i, j)| {
                format!("h = {}, k = {}", b.label(&atoms[i]), b.label(&atoms[j]))
            });
            checks.push(Check::from_witness(
                "atom-product-detects-order",
                witness,
                cases,
            ));
        }
        {
            // Refactoring: for any word whose canonical length equals its
            // own length, the canonical form is h_i scaled by the + value
            // of its tail.
            let mut witness = None;
            let mut cases = 0u64;
            let mut rng = ChaCha8Rng::seed_from_u64(match mode {
                Mode::Sampled(cfg) => cfg.seed,
                Mode::Exhaustive => 0,
            });
            let samples = match mode {
                Mode::Sampled(cfg) => cfg.samples,
                Mode::Exhaustive => 500,
            };
            for _ in 0..samples {
                if atoms.is_empty() {
                    break;
                }
                let len = rng.random_range(1..=bound.max(1));
                let word: Vec<B::Elem> = (0..len)
                    .map(|_| atoms[rng.random_range(0..atoms.len())].clone())
                    .collect();
                let mut scratch = BranchCounts::default();
                let Ok(canon) = h_reduce(b, h, &word, &mut scratch) else {
                    continue;
                };
                if canon.len() != word.len() {
                    continue;
                }
                cases += 1;
                let mut expect = Vec::with_capacity(len);
                for i in 0..len {
                    if i + 1 < len {
                        let tail_plus = b.plus(&product_of(b, &word[i + 1..]));
                        expect.push(b.mul(&word[i], &tail_plus));
                    } else {
                        expect.push(word[i].clone());
                    }
                }
                if expect != canon {
                    witness = Some(format!(
                        "refactoring disagrees on a minimal word of length {len}"
                    ));
                    break;
                }
            }
            checks.push(Check::from_witness("refactoring-formula", witness, cases));
        }
    }

    BasisCheck {
        report: LawReport::new(
            "basis",
            b.describe(),
            b.bound(),
            mode.name(),
            mode.seed(),
            checks,
        ),
        branches,
        duplicates,
    }
}

/// A finite biunary monoid given by tables: a validated monoid product, a
/// + table, an optional * table, and the congruence generated by
/// identifying every + value with the identity.
#[derive(Debug, Clone)]
pub struct BiunaryTable {
    m: FinMonoid,
    plus: Vec<usize>,
    star: Option<Vec<usize>>,
    labels: Option<Vec<String>>,
    sigma: Congruence,
    elems: Vec<usize>,
    name: String,
}

impl BiunaryTable {
    /// Monoid laws are enforced; the unary tables only need the right shape
    /// and range, so that defective structures can be built and then fail
    /// the law suites with witnesses.
    pub fn new(
        m: FinMonoid,
        plus: Vec<usize>,
        star: Option<Vec<usize>>,
        labels: Option<Vec<String>>,
        name: impl Into<String>,
    ) -> Result<Self, Error> {
        let n = m.n();
        if plus.len() != n {
            return Err(Error::WrongRowCount {
                want: n,
                got: plus.len(),
            });
        }
        for (i, &v) in plus.iter().enumerate() {
            if v >= n {
                return Err(Error::EntryOutOfRange {
                    row: 0,
                    col: i,
                    value: v,
                    n,
                });
            }
        }
        if let Some(star) = &star {
            if star.len() != n {
                return Err(Error::WrongRowCount {
                    want: n,
                    got: star.len(),
                });
            }
            for (i, &v) in star.iter().enumerate() {
                if v >= n {
                    return Err(Error::EntryOutOfRange {
                        row: 1,
                        col: i,
                        value: v,
                        n,
                    });
                }
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != n {
                return Err(Error::WrongRowCount {
                    want: n,
                    got: labels.len(),
                });
            }
        }
        let pairs: Vec<(usize, usize)> = plus.iter().map(|&p| (p, m.one())).collect();
        let sigma = congruence_closure(&m, &pairs);
        Ok(BiunaryTable {
            elems: (0..n).collect(),
            m,
            plus,
            star,
            labels,
            sigma,
            name: name.into(),
        })
    }

    pub fn monoid(&self) -> &FinMonoid {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.n()
    }

    pub fn plus_of(&self, a: usize) -> usize {
        self.plus[a]
    }

    pub fn star_of(&self, a: usize) -> Option<usize> {
        self.star.as_ref().map(|s| s[a])
    }

    pub fn sigma(&self) -> &Congruence {
        &self.sigma
    }

    pub fn has_star(&self) -> bool {
        self.star.is_some()
    }

    /// Overwrite one + entry without revalidation or recomputing sigma.
    /// Exists to inject faults that the law suites must then catch.
    #[doc(hidden)]
    pub fn set_plus_entry_unchecked(&mut self, a: usize, v: usize) {
        self.plus[a] = v;
    }

    #[doc(hidden)]
    pub fn set_star_entry_unchecked(&mut self, a: usize, v: usize) {
        if let Some(star) = &mut self.star {
            star[a] = v;
        }
    }
}

impl Biunary for BiunaryTable {
    type Elem = usize;

    fn one(&self) -> usize {
        self.m.one()
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.m.mul(*a, *b)
    }

    fn plus(&self, a: &usize) -> usize {
        self.plus[*a]
    }

    fn star(&self, a: &usize) -> Option<usize> {
        self.star.as_ref().map(|s| s[*a])
    }

    fn elements(&self) -> &[usize] {
        &self.elems
    }

    fn is_exhaustive(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn sigma_eq(&self, a: &usize, b: &usize) -> bool {
        self.sigma.related(*a, *b)
    }

    fn label(&self, a: &usize) -> String {
        match &self.labels {
            Some(labels) => labels[*a].clone(),
            None => format!("m{a}"),
        }
    }
}

/// The normal-form monoid over a context, listed up to a canonical length
/// bound.
pub struct PlUniverse {
    ctx: PlContext,
    bound: usize,
    elems: Vec<PlElement>,
    name: String,
}

impl PlUniverse {
    pub fn new(ctx: PlContext, bound: usize, name: impl Into<String>) -> Self {
        let elems = ctx.enumerate_elements(bound);
        PlUniverse {
            ctx,
            bound,
            elems,
            name: name.into(),
        }
    }

    pub fn ctx(&self) -> &PlContext {
        &self.ctx
    }

    /// The atoms as elements. Membership reaches beyond the listing: an
    /// element belongs whenever its canonical form is a single atom, so
    /// products that merge into unlisted atoms still test positive.
    pub fn atom_set(&self) -> AtomSet<'_, PlElement> {
        let ctx = &self.ctx;
        let atoms = ctx.atoms().iter().map(|a| ctx.atom_element(*a)).collect();
        AtomSet::with_membership(atoms, move |el| ctx.to_h_canonical(el).len() == 1)
    }
}

impl Biunary for PlUniverse {
    type Elem = PlElement;

    fn one(&self) -> PlElement {
        self.ctx.identity()
    }

    fn mul(&self, a: &PlElement, b: &PlElement) -> PlElement {
        self.ctx.mul(a, b)
    }

    fn plus(&self, a: &PlElement) -> PlElement {
        self.ctx.plus(a)
    }

    fn star(&self, a: &PlElement) -> Option<PlElement> {
        Some(self.ctx.star(a))
    }

    fn elements(&self) -> &[PlElement] {
        &self.elems
    }

    fn is_exhaustive(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn sigma_eq(&self, a: &PlElement, b: &PlElement) -> bool {
        self.ctx.sigma_eq(a, b)
    }

    fn bound(&self) -> Option<usize> {
        Some(self.bound)
    }
}

/// The restricted submonoid over a context with a distinguished
/// subsemilattice, listed up to a canonical length bound.
pub struct QlUniverse {
    q: QlContext,
    bound: usize,
    elems: Vec<PlElement>,
    name: String,
}

impl QlUniverse {
    pub fn new(q: QlContext, bound: usize, name: impl Into<String>) -> Self {
        let elems = q.enumerate_members(bound);
        QlUniverse {
            q,
            bound,
            elems,
            name: name.into(),
        }
    }

    pub fn qctx(&self) -> &QlContext {
        &self.q
    }

    /// The restricted atoms as elements, with membership by canonical form
    /// as for the unrestricted universe, intersected with membership in
    /// the submonoid.
    pub fn atom_set(&self) -> AtomSet<'_, PlElement> {
        let q = &self.q;
        let atoms = q
            .qatoms()
            .iter()
            .map(|a| q.pl().atom_element(*a))
            .collect();
        AtomSet::with_membership(atoms, move |el| {
            q.is_member(el) && q.pl().to_h_canonical(el).len() == 1
        })
    }
}

impl Biunary for QlUniverse {
    type Elem = PlElement;

    fn one(&self) -> PlElement {
        self.q.identity()
    }

    fn mul(&self, a: &PlElement, b: &PlElement) -> PlElement {
        self.q.pl().mul(a, b)
    }

    fn plus(&self, a: &PlElement) -> PlElement {
        self.q.pl().plus(a)
    }

    fn star(&self, a: &PlElement) -> Option<PlElement> {
        Some(self.q.pl().star(a))
    }

    fn elements(&self) -> &[PlElement] {
        &self.elems
    }

    fn is_exhaustive(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        self.name.clone()
    }

    fn sigma_eq(&self, a: &PlElement, b: &PlElement) -> bool {
        self.q.pl().sigma_eq(a, b)
    }

    fn bound(&self) -> Option<usize> {
        Some(self.bound)
    }
}
