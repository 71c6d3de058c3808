//! Rebuilding a partial-action model from an abstract biunary monoid with a
//! designated atom set: quotient by sigma, read off the induced partial
//! action of the quotient on the projections, globalize it, and verify that
//! mapping each atom h to the pair (class of h, embedded h*) extends to an
//! isomorphism onto the resulting submonoid, up to a length bound.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::actions::{check_full, check_order_preserving, check_strong, PartialActionTable};
use crate::error::Error;
use crate::globalization::{globalize, verify_globalisation, GlobalizedAction};
use crate::laws::{enumerate_h_canonical_seqs, h_reduce, AtomSet, Biunary, Mode};
use crate::monoid::FinMonoid;
use crate::pl::{Atom, PlContext, PlElement};
use crate::ql::QlContext;
use crate::report::{BranchCounts, Check, IsoReport};
use crate::semilattice::Semilattice;

/// The quotient of a biunary monoid by its least congruence identifying
/// every projection with 1, presented by one representative per class.
pub struct QuotientT<E> {
    monoid: FinMonoid,
    reps: Vec<E>,
}

impl<E: Clone + Eq + Ord> QuotientT<E> {
    pub fn monoid(&self) -> &FinMonoid {
        &self.monoid
    }

    /// One representative per class, indexed by class.
    pub fn reps(&self) -> &[E] {
        &self.reps
    }

    /// Class of an arbitrary element, found by comparing against the
    /// representatives. Works for elements outside any bounded listing.
    pub fn class_of<B: Biunary<Elem = E>>(&self, b: &B, x: &E) -> Option<usize> {
        self.reps.iter().position(|r| b.sigma_eq(r, x))
    }
}

/// Builds the sigma quotient of `b` as a concrete monoid on class
/// representatives. Multiplication is checked to be well defined on
/// classes, exhaustively for small listings and on a fixed sample beyond.
pub fn quotient_t<B: Biunary>(b: &B) -> Result<QuotientT<B::Elem>, Error> {
    let elems = b.elements();
    let mut reps: Vec<B::Elem> = Vec::new();
    for x in elems {
        if !reps.iter().any(|r| b.sigma_eq(r, x)) {
            reps.push(x.clone());
        }
    }
    let class_of = |x: &B::Elem| reps.iter().position(|r| b.sigma_eq(r, x));
    let n = reps.len();
    let mut rows = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = class_of(&b.mul(&reps[i], &reps[j])).ok_or_else(|| Error::Internal {
                detail: format!(
                    "sigma class of {} * {} has no representative",
                    b.label(&reps[i]),
                    b.label(&reps[j])
                ),
            })?;
        }
    }
    let one = class_of(&b.one()).ok_or_else(|| Error::Internal {
        detail: "identity has no sigma class representative".into(),
    })?;
    let monoid = FinMonoid::new(n, &rows, one)?;
    // Projections must all collapse into the identity class.
    for e in b.projections() {
        if class_of(&e) != Some(one) {
            return Err(Error::Internal {
                detail: format!("projection {} not sigma-related to 1", b.label(&e)),
            });
        }
    }
    // Compatibility of the table with sigma on actual elements.
    let total = elems.len() * elems.len();
    let check_pair = |x: &B::Elem, y: &B::Elem| -> Result<(), Error> {
        let cx = class_of(x);
        let cy = class_of(y);
        let cxy = class_of(&b.mul(x, y));
        if let (Some(cx), Some(cy), Some(cxy)) = (cx, cy, cxy) {
            if rows[cx][cy] == cxy {
                return Ok(());
            }
        }
        Err(Error::Internal {
            detail: format!(
                "sigma not compatible with multiplication at {} * {}",
                b.label(x),
                b.label(y)
            ),
        })
    };
    if total <= 40_000 {
        for x in elems {
            for y in elems {
                check_pair(x, y)?;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..2000 {
            let x = &elems[rng.random_range(0..elems.len())];
            let y = &elems[rng.random_range(0..elems.len())];
            check_pair(x, y)?;
        }
    }
    Ok(QuotientT { monoid, reps })
}

/// The projections of a biunary monoid arranged as a concrete semilattice,
/// with translation between element values and indices.
pub struct ProjectionLattice<E> {
    lattice: Semilattice,
    elems: Vec<E>,
}

impl<E: Clone + Eq + Ord> ProjectionLattice<E> {
    pub fn lattice(&self) -> &Semilattice {
        &self.lattice
    }

    pub fn elems(&self) -> &[E] {
        &self.elems
    }

    pub fn index_of(&self, e: &E) -> Option<usize> {
        self.elems.binary_search(e).ok()
    }
}

/// Collects the projections of `b` into a semilattice under multiplication.
pub fn projection_lattice<B: Biunary>(b: &B) -> Result<ProjectionLattice<B::Elem>, Error> {
    let elems = b.projections();
    let n = elems.len();
    let mut rows = vec![vec![0usize; n]; n];
    for i in 0..n {
        for j in 0..n {
            rows[i][j] = elems
                .binary_search(&b.mul(&elems[i], &elems[j]))
                .map_err(|_| Error::NotMeetClosed { a: i, b: j })?;
        }
    }
    let one = elems
        .binary_search(&b.one())
        .map_err(|_| Error::Internal {
            detail: "identity is not a listed projection".into(),
        })?;
    let lattice = Semilattice::new(n, &rows, one)?;
    Ok(ProjectionLattice { lattice, elems })
}

/// The partial action induced on the projections by the sigma quotient:
/// class [m] acts on e exactly when some atom h has h sigma m and h* >= e,
/// and then [m] . e = (he)+. Building it certifies the defining scan: every
/// qualifying atom must give the same value of he, not merely of (he)+.
pub struct InducedPartialAction<E> {
    pub quotient: QuotientT<E>,
    pub lattice: ProjectionLattice<E>,
    pub pa: PartialActionTable,
}

fn star_of<B: Biunary>(b: &B, x: &B::Elem) -> Result<B::Elem, Error> {
    b.star(x).ok_or(Error::NoStar)
}

pub fn induce_partial_action<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
) -> Result<InducedPartialAction<B::Elem>, Error> {
    let quotient = quotient_t(b)?;
    let lattice = projection_lattice(b)?;
    let nt = quotient.monoid.n();
    let ne = lattice.lattice.n();
    let mut rows: Vec<Vec<Option<usize>>> = vec![vec![None; ne]; nt];
    for (c, rep) in quotient.reps.iter().enumerate() {
        let related: Vec<&B::Elem> = h
            .atoms()
            .iter()
            .filter(|hh| b.sigma_eq(hh, rep))
            .collect();
        for (ei, e) in lattice.elems.iter().enumerate() {
            let mut value: Option<(usize, &B::Elem, B::Elem)> = None;
            for hh in &related {
                let s = star_of(b, hh)?;
                let si = lattice.index_of(&s).ok_or_else(|| Error::Internal {
                    detail: format!("{} has * outside the projections", b.label(hh)),
                })?;
                if !lattice.lattice.leq(ei, si) {
                    continue;
                }
                let he = b.mul(hh, e);
                let ve = b.plus(&he);
                let vi = lattice.index_of(&ve).ok_or_else(|| Error::Internal {
                    detail: format!("({}{})+ is not a projection", b.label(hh), b.label(e)),
                })?;
                match &value {
                    None => value = Some((vi, hh, he)),
                    Some((_, prev, prev_he)) => {
                        if *prev_he != he {
                            return Err(Error::IllDefinedInducedAction {
                                detail: format!(
                                    "{} and {} both act on {} but disagree",
                                    b.label(prev),
                                    b.label(hh),
                                    b.label(e)
                                ),
                            });
                        }
                    }
                }
            }
            rows[c][ei] = value.map(|(vi, _, _)| vi);
        }
    }
    let pa = PartialActionTable::new(quotient.monoid.clone(), lattice.lattice.clone(), &rows)?;
    Ok(InducedPartialAction {
        quotient,
        lattice,
        pa,
    })
}

fn pl_product(pl: &PlContext, factors: &[PlElement]) -> PlElement {
    let mut acc = pl.identity();
    for f in factors {
        acc = pl.mul(&acc, f);
    }
    acc
}

/// Induce, globalize, rebuild the bounded submonoid over the embedded
/// projection image, and verify the atom correspondence end to end.
pub fn rebuild_and_theta<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
    bound: usize,
    mode: &Mode,
) -> Result<IsoReport, Error> {
    let ipa = induce_partial_action(b, h)?;
    rebuild_from(b, h, &ipa, bound, mode)
}

/// As `rebuild_and_theta`, from an already-built induced action. Exposed so
/// tests can corrupt the table and watch the verification catch it.
pub fn rebuild_from<B: Biunary>(
    b: &B,
    h: &AtomSet<B::Elem>,
    ipa: &InducedPartialAction<B::Elem>,
    bound: usize,
    mode: &Mode,
) -> Result<IsoReport, Error> {
    assert!(bound >= 1, "bound must be at least 1");
    let mut checks = Vec::new();
    let t_size = ipa.quotient.monoid.n();
    let e_size = ipa.lattice.lattice.n();
    let atom_count = h.atoms().len();
    let mut report = IsoReport {
        bound,
        t_size,
        e_size,
        tau_classes: 0,
        ideal_count: 0,
        atom_count,
        element_count: 0,
        theta_atoms: Vec::new(),
        branch_counts: BranchCounts::default(),
        checks: Vec::new(),
        pass: false,
    };

    let strong = check_strong(&ipa.pa);
    let order = check_order_preserving(&ipa.pa);
    let full = check_full(&ipa.pa);
    let can_globalize = strong.pass && order.pass;
    checks.push(strong);
    checks.push(order);
    checks.push(full);
    if !can_globalize {
        report.checks = checks;
        return Ok(report);
    }

    let ga: GlobalizedAction = globalize(&ipa.pa)?;
    report.tau_classes = ga.sq.tau_count();
    report.ideal_count = ga.ideals.len();
    let greport = verify_globalisation(&ga);
    let gcases: u64 = greport.checks.iter().map(|c| c.cases).sum();
    checks.push(Check::from_witness(
        "globalisation-verified",
        greport
            .checks
            .iter()
            .find(|c| !c.pass)
            .map(|c| c.law.clone()),
        gcases,
    ));

    let mut y: Vec<usize> = ga.kappa.clone();
    y.sort_unstable();
    y.dedup();
    let pl = PlContext::new(ga.bullet.clone());
    let ql = match QlContext::new(pl, &y) {
        Ok(q) => {
            checks.push(Check::pass("embedded-projections-admissible", y.len() as u64));
            q
        }
        Err(e) => {
            checks.push(Check::fail(
                "embedded-projections-admissible",
                format!("{e}"),
                y.len() as u64,
            ));
            report.checks = checks;
            return Ok(report);
        }
    };

    // Atom correspondence h -> (class of h, embedded h*).
    let mut theta: BTreeMap<B::Elem, Atom> = BTreeMap::new();
    let mut theta_atoms: Vec<[String; 2]> = Vec::new();
    for hh in h.atoms() {
        let t = ipa.quotient.class_of(b, hh).ok_or_else(|| Error::Internal {
            detail: format!("atom {} has no sigma class", b.label(hh)),
        })?;
        let s = star_of(b, hh)?;
        let si = ipa.lattice.index_of(&s).ok_or_else(|| Error::Internal {
            detail: format!("{} has * outside the projections", b.label(hh)),
        })?;
        let a = Atom {
            t,
            e: ga.kappa[si],
        };
        theta.insert(hh.clone(), a);
        theta_atoms.push([b.label(hh), a.to_string()]);
    }
    report.theta_atoms = theta_atoms;

    let mut seen: BTreeMap<Atom, B::Elem> = BTreeMap::new();
    let mut inj_witness = None;
    for (hh, a) in &theta {
        if let Some(other) = seen.get(a) {
            inj_witness = Some(format!(
                "{} and {} share image {}",
                b.label(other),
                b.label(hh),
                a
            ));
            break;
        }
        seen.insert(*a, hh.clone());
    }
    checks.push(Check::from_witness(
        "theta-injective-on-atoms",
        inj_witness,
        theta.len() as u64,
    ));

    checks.push(Check::from_witness(
        "theta-atoms-are-qatoms",
        theta
            .iter()
            .find(|(_, a)| !ql.is_qatom(**a))
            .map(|(hh, a)| format!("{} maps to non-atom {}", b.label(hh), a)),
        theta.len() as u64,
    ));

    let image: BTreeSet<Atom> = theta.values().copied().collect();
    checks.push(Check::from_witness(
        "theta-onto-qatoms",
        ql.qatoms()
            .iter()
            .find(|a| !image.contains(a))
            .map(|a| format!("atom {a} not in the image")),
        ql.qatoms().len() as u64,
    ));

    let mut unary_witness = None;
    for (hh, a) in &theta {
        let pi = ipa
            .lattice
            .index_of(&b.plus(hh))
            .ok_or_else(|| Error::Internal {
                detail: format!("{}+ is not a projection", b.label(hh)),
            })?;
        let si = ipa
            .lattice
            .index_of(&star_of(b, hh)?)
            .expect("checked above");
        if ql.pl().atom_plus(*a) != ga.kappa[pi] || ql.pl().atom_star(*a) != ga.kappa[si] {
            unary_witness = Some(format!("unary values disagree at {}", b.label(hh)));
            break;
        }
    }
    checks.push(Check::from_witness(
        "theta-preserves-unary-on-atoms",
        unary_witness,
        theta.len() as u64,
    ));

    // Bounded element inventory on the abstract side, by canonical sequence.
    let seqs = enumerate_h_canonical_seqs(b, h, bound);
    let mut by_product: BTreeMap<B::Elem, Vec<Vec<B::Elem>>> = BTreeMap::new();
    for seq in seqs {
        let mut acc = seq[0].clone();
        for x in &seq[1..] {
            acc = b.mul(&acc, x);
        }
        by_product.entry(acc).or_default().push(seq);
    }
    report.element_count = by_product.len();
    checks.push(Check::from_witness(
        "canonical-unique-up-to-bound",
        by_product
            .iter()
            .find(|(_, seqs)| seqs.len() > 1)
            .map(|(p, _)| format!("{} has multiple canonical sequences", b.label(p))),
        by_product.len() as u64,
    ));

    let theta_of_seq = |seq: &[B::Elem]| -> Result<Vec<Atom>, Error> {
        seq.iter()
            .map(|x| {
                theta.get(x).copied().ok_or_else(|| Error::Internal {
                    detail: format!("canonical factor {} is not an atom", b.label(x)),
                })
            })
            .collect()
    };

    let mut images: BTreeMap<B::Elem, PlElement> = BTreeMap::new();
    let mut canon_witness = None;
    for (p, seqs) in &by_product {
        let atoms = theta_of_seq(&seqs[0])?;
        let factors: Vec<PlElement> = atoms.iter().map(|a| ql.pl().atom_element(*a)).collect();
        let img = pl_product(ql.pl(), &factors);
        if canon_witness.is_none() && ql.pl().to_h_canonical(&img) != atoms {
            canon_witness = Some(format!(
                "image of {} has a different canonical form",
                b.label(p)
            ));
        }
        images.insert(p.clone(), img);
    }
    checks.push(Check::from_witness(
        "theta-respects-canonical-form",
        canon_witness,
        by_product.len() as u64,
    ));

    let mut rev: BTreeMap<PlElement, B::Elem> = BTreeMap::new();
    let mut inj_witness = None;
    for (p, img) in &images {
        if let Some(other) = rev.get(img) {
            inj_witness = Some(format!(
                "{} and {} share an image",
                b.label(other),
                b.label(p)
            ));
            break;
        }
        rev.insert(img.clone(), p.clone());
    }
    checks.push(Check::from_witness(
        "theta-injective-up-to-bound",
        inj_witness,
        images.len() as u64,
    ));

    let members: BTreeSet<PlElement> = ql.enumerate_members(bound).into_iter().collect();
    let image_set: BTreeSet<PlElement> = images.values().cloned().collect();
    let onto_witness = members
        .difference(&image_set)
        .next()
        .map(|m| format!("member {m} not in the image"))
        .or_else(|| {
            image_set
                .difference(&members)
                .next()
                .map(|m| format!("image {m} is not a member"))
        });
    checks.push(Check::from_witness(
        "theta-matches-bounded-members",
        onto_witness,
        members.len() as u64,
    ));

    let mut unary_witness = None;
    for (p, img) in &images {
        let pi = ipa
            .lattice
            .index_of(&b.plus(p))
            .ok_or_else(|| Error::Internal {
                detail: format!("{}+ is not a projection", b.label(p)),
            })?;
        if ql.pl().plus(img) != ql.pl().projection(ga.kappa[pi]) {
            unary_witness = Some(format!("+ disagrees at {}", b.label(p)));
            break;
        }
        let si = ipa
            .lattice
            .index_of(&star_of(b, p)?)
            .ok_or_else(|| Error::Internal {
                detail: format!("{}* is not a projection", b.label(p)),
            })?;
        if ql.pl().star(img) != ql.pl().projection(ga.kappa[si]) {
            unary_witness = Some(format!("* disagrees at {}", b.label(p)));
            break;
        }
    }
    checks.push(Check::from_witness(
        "theta-preserves-unary",
        unary_witness,
        images.len() as u64,
    ));

    // Multiplicativity over atom words, counting rewrite branches on the
    // abstract side.
    let atoms = h.atoms();
    let mut mul_witness = None;
    let mut mul_cases = 0u64;
    let mut check_word = |word: &[B::Elem]| -> Result<(), Error> {
        mul_cases += 1;
        let canon = match h_reduce(b, h, word, &mut report.branch_counts) {
            Ok(c) => c,
            Err(msg) => {
                if mul_witness.is_none() {
                    mul_witness = Some(msg);
                }
                return Ok(());
            }
        };
        let lhs_atoms: Vec<Atom> = match theta_of_seq(&canon) {
            Ok(a) => a,
            Err(_) => {
                if mul_witness.is_none() {
                    mul_witness = Some("canonical factor escapes the atom set".into());
                }
                return Ok(());
            }
        };
        let lhs_factors: Vec<PlElement> =
            lhs_atoms.iter().map(|a| ql.pl().atom_element(*a)).collect();
        let lhs = pl_product(ql.pl(), &lhs_factors);
        let rhs_factors: Vec<PlElement> = word
            .iter()
            .map(|x| ql.pl().atom_element(theta[x]))
            .collect();
        let rhs = pl_product(ql.pl(), &rhs_factors);
        if mul_witness.is_none() && lhs != rhs {
            let labels: Vec<String> = word.iter().map(|x| b.label(x)).collect();
            mul_witness = Some(format!("product of [{}] disagrees", labels.join(", ")));
        }
        Ok(())
    };
    if atoms.len() * atoms.len() <= 20_000 {
        for x in atoms {
            for y in atoms {
                check_word(&[x.clone(), y.clone()])?;
            }
        }
    }
    let (seed, samples) = match mode {
        Mode::Exhaustive => (0, 500),
        Mode::Sampled(cfg) => (cfg.seed, cfg.samples),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let len = rng.random_range(1..=bound.max(2));
        let word: Vec<B::Elem> = (0..len)
            .map(|_| atoms[rng.random_range(0..atoms.len())].clone())
            .collect();
        check_word(&word)?;
    }
    checks.push(Check::from_witness(
        "theta-multiplicative",
        mul_witness,
        mul_cases,
    ));

    report.pass = checks.iter().all(|c| c.pass);
    report.checks = checks;
    Ok(report)
}
