//! Worked structures for tests and the command line: the subset expansion
//! of a left-cancellative monoid, a bounded window of the subset expansion
//! of the free monogenic monoid, bounded free-algebra elements over prefix-
//! closed word sets, and small sample monoids, semilattices, and actions.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::laws::{Biunary, BiunaryTable};
use crate::monoid::FinMonoid;

/// The subset expansion of a left-cancellative finite monoid M: elements
/// are pairs (A, a) with A a subset of M, multiplied by
/// (A,a)(B,b) = (A v aB, ab), with (A,a)+ = (A,1) and (A,a)* = (a^-1 A, 1).
/// Encoded as a full biunary table on 2^|M| x |M| elements, indexed by
/// mask * |M| + element.
pub fn build_subset_expansion(m: &FinMonoid) -> Result<BiunaryTable, Error> {
    if let Some((a, b, c)) = m.left_cancellation_failure() {
        return Err(Error::NotLeftCancellative { a, b, c });
    }
    let nm = m.n();
    assert!(nm <= 5, "subset expansion is exponential in |M|");
    let n = (1usize << nm) * nm;
    let idx = |mask: usize, a: usize| mask * nm + a;
    let shift = |a: usize, mask: usize| {
        let mut out = 0usize;
        for b in 0..nm {
            if mask & (1 << b) != 0 {
                out |= 1 << m.mul(a, b);
            }
        }
        out
    };
    let unshift = |a: usize, mask: usize| {
        let mut out = 0usize;
        for c in 0..nm {
            if mask & (1 << m.mul(a, c)) != 0 {
                out |= 1 << c;
            }
        }
        out
    };
    let mut mul = vec![vec![0usize; n]; n];
    for ma in 0..(1usize << nm) {
        for a in 0..nm {
            for mb in 0..(1usize << nm) {
                for b in 0..nm {
                    mul[idx(ma, a)][idx(mb, b)] = idx(ma | shift(a, mb), m.mul(a, b));
                }
            }
        }
    }
    let mut plus = vec![0usize; n];
    let mut star = vec![0usize; n];
    let mut labels = vec![String::new(); n];
    for mask in 0..(1usize << nm) {
        for a in 0..nm {
            plus[idx(mask, a)] = idx(mask, m.one());
            star[idx(mask, a)] = idx(unshift(a, mask), m.one());
            let members: Vec<String> = (0..nm)
                .filter(|b| mask & (1 << b) != 0)
                .map(|b| format!("m{b}"))
                .collect();
            labels[idx(mask, a)] = format!("({{{}}},m{a})", members.join(","));
        }
    }
    let monoid = FinMonoid::new(n, &mul, idx(0, m.one()))?;
    BiunaryTable::new(monoid, plus, Some(star), Some(labels), "subset-expansion")
}

/// One element of the subset expansion of the free monoid on one letter x:
/// a finite set of powers of x (as an exponent bitmask) and a power of x.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MgElement {
    pub mask: u64,
    pub exp: u32,
}

impl fmt::Display for MgElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = (0..64)
            .filter(|k| self.mask & (1u64 << k) != 0)
            .map(|k| format!("x^{k}"))
            .collect();
        write!(f, "({{{}}},x^{})", members.join(","), self.exp)
    }
}

/// A bounded window of the subset expansion of the free monoid on one
/// letter. The listing holds every (A, x^i) with i <= exp_bound and
/// A within the first mask_bits powers. The structure is left restriction,
/// hence passes the star suite, but the full element set is not proper:
/// distinct sets can share both their sigma class and their * value.
pub struct MonogenicExpansion {
    exp_bound: u32,
    mask_bits: u32,
    elems: Vec<MgElement>,
}

impl MonogenicExpansion {
    pub fn new(mask_bits: u32, exp_bound: u32) -> Self {
        assert!(mask_bits <= 16 && exp_bound <= 16);
        let mut elems = Vec::new();
        for mask in 0..(1u64 << mask_bits) {
            for exp in 0..=exp_bound {
                elems.push(MgElement { mask, exp });
            }
        }
        MonogenicExpansion {
            exp_bound,
            mask_bits,
            elems,
        }
    }

    /// The pair of distinct elements sharing sigma class and * value:
    /// ({x}, x^3) and ({x^2}, x^3).
    pub fn properness_witness(&self) -> (MgElement, MgElement) {
        assert!(self.mask_bits >= 3 && self.exp_bound >= 3);
        (
            MgElement { mask: 1 << 1, exp: 3 },
            MgElement { mask: 1 << 2, exp: 3 },
        )
    }
}

impl Biunary for MonogenicExpansion {
    type Elem = MgElement;

    fn one(&self) -> MgElement {
        MgElement { mask: 0, exp: 0 }
    }

    fn mul(&self, a: &MgElement, b: &MgElement) -> MgElement {
        assert!(a.exp < 48 && b.mask < (1u64 << 48), "exponent window overflow");
        MgElement {
            mask: a.mask | (b.mask << a.exp),
            exp: a.exp + b.exp,
        }
    }

    fn plus(&self, a: &MgElement) -> MgElement {
        MgElement {
            mask: a.mask,
            exp: 0,
        }
    }

    fn star(&self, a: &MgElement) -> Option<MgElement> {
        Some(MgElement {
            mask: a.mask >> a.exp,
            exp: 0,
        })
    }

    fn elements(&self) -> &[MgElement] {
        &self.elems
    }

    fn is_exhaustive(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!(
            "monogenic-expansion(bits={},exp<={})",
            self.mask_bits, self.exp_bound
        )
    }

    fn sigma_eq(&self, a: &MgElement, b: &MgElement) -> bool {
        a.exp == b.exp
    }

    fn bound(&self) -> Option<usize> {
        Some(self.exp_bound as usize)
    }
}

/// An element of the free structure over words: a finite prefix-closed set
/// of words containing the distinguished word. Words run over the letters
/// 'a', 'b', ...; the empty word prints as 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FlaElement {
    pub set: BTreeSet<String>,
    pub word: String,
}

impl FlaElement {
    pub fn new(set: BTreeSet<String>, word: String) -> Self {
        let el = FlaElement { set, word };
        debug_assert!(el.is_valid());
        el
    }

    pub fn is_valid(&self) -> bool {
        self.set.contains(&self.word)
            && self.set.iter().all(|w| {
                (1..=w.len()).all(|k| self.set.contains(&w[..k - 1].to_string()))
            })
    }
}

fn show_word(w: &str) -> String {
    if w.is_empty() {
        "1".to_string()
    } else {
        w.to_string()
    }
}

impl fmt::Display for FlaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let members: Vec<String> = self.set.iter().map(|w| show_word(w)).collect();
        write!(f, "({{{}}},{})", members.join(","), show_word(&self.word))
    }
}

/// All non-empty prefix-closed sets of words of length at most `bound`
/// over the first `k` letters.
fn prefix_closed_sets(k: usize, bound: usize) -> Vec<BTreeSet<String>> {
    // Build recursively: a set is the root plus a choice of (possibly
    // absent) subtree under each letter.
    fn rec(k: usize, depth: usize, prefix: &str, out: &mut Vec<BTreeSet<String>>) {
        let mut here = BTreeSet::new();
        here.insert(prefix.to_string());
        let mut acc = vec![here];
        if depth > 0 {
            for i in 0..k {
                let letter = (b'a' + i as u8) as char;
                let child = format!("{prefix}{letter}");
                let mut subs = Vec::new();
                rec(k, depth - 1, &child, &mut subs);
                let mut next = Vec::new();
                for s in &acc {
                    next.push(s.clone());
                    for sub in &subs {
                        let mut u = s.clone();
                        u.extend(sub.iter().cloned());
                        next.push(u);
                    }
                }
                acc = next;
            }
        }
        out.extend(acc);
    }
    let mut out = Vec::new();
    rec(k, bound, "", &mut out);
    out.sort();
    out.dedup();
    out
}

/// A bounded window of the free structure: every element whose words all
/// have length at most `bound`, over a `k`-letter alphabet.
pub struct FlaUniverse {
    k: usize,
    bound: usize,
    elems: Vec<FlaElement>,
}

impl FlaUniverse {
    pub fn new(k: usize, bound: usize) -> Self {
        assert!(k >= 1 && (1..=26).contains(&k));
        let mut elems = Vec::new();
        for set in prefix_closed_sets(k, bound) {
            for word in &set {
                elems.push(FlaElement {
                    set: set.clone(),
                    word: word.clone(),
                });
            }
        }
        elems.sort();
        FlaUniverse { k, bound, elems }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Structural test for membership in the generating set: every word of
    /// the set is comparable to the distinguished word under the prefix
    /// order. These are exactly the products (a-prefixes v a B, a).
    pub fn is_atom(c: &FlaElement) -> bool {
        c.set
            .iter()
            .all(|w| c.word.starts_with(w.as_str()) || w.starts_with(&c.word))
    }

    /// The listed elements that are atoms.
    pub fn atoms(&self) -> Vec<FlaElement> {
        self.elems
            .iter()
            .filter(|c| Self::is_atom(c))
            .cloned()
            .collect()
    }

    /// One element with two distinct length-2 canonical factorizations:
    /// (A, aa) with A = {1, a, aa, ab} is both (A, 1)({1,a,aa}, aa) and
    /// ({1,a,aa,ab}, a)({1,a}, a), and each sequence is canonical.
    pub fn duplicate_witness(&self) -> (FlaElement, [Vec<FlaElement>; 2]) {
        assert!(self.k >= 2 && self.bound >= 2);
        let set = |words: &[&str]| -> BTreeSet<String> {
            words.iter().map(|w| w.to_string()).collect()
        };
        let value = FlaElement::new(set(&["", "a", "aa", "ab"]), "aa".into());
        let f1 = vec![
            FlaElement::new(set(&["", "a", "aa", "ab"]), "".into()),
            FlaElement::new(set(&["", "a", "aa"]), "aa".into()),
        ];
        let f2 = vec![
            FlaElement::new(set(&["", "a", "aa", "ab"]), "a".into()),
            FlaElement::new(set(&["", "a"]), "a".into()),
        ];
        (value, [f1, f2])
    }
}

impl Biunary for FlaUniverse {
    type Elem = FlaElement;

    fn one(&self) -> FlaElement {
        let mut set = BTreeSet::new();
        set.insert(String::new());
        FlaElement { set, word: String::new() }
    }

    fn mul(&self, a: &FlaElement, b: &FlaElement) -> FlaElement {
        let mut set = a.set.clone();
        for w in &b.set {
            set.insert(format!("{}{}", a.word, w));
        }
        FlaElement {
            set,
            word: format!("{}{}", a.word, b.word),
        }
    }

    fn plus(&self, a: &FlaElement) -> FlaElement {
        FlaElement {
            set: a.set.clone(),
            word: String::new(),
        }
    }

    fn star(&self, a: &FlaElement) -> Option<FlaElement> {
        let set: BTreeSet<String> = a
            .set
            .iter()
            .filter_map(|w| w.strip_prefix(&a.word).map(|s| s.to_string()))
            .collect();
        Some(FlaElement {
            set,
            word: String::new(),
        })
    }

    fn elements(&self) -> &[FlaElement] {
        &self.elems
    }

    fn is_exhaustive(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!("fla(k={},bound={})", self.k, self.bound)
    }

    fn sigma_eq(&self, a: &FlaElement, b: &FlaElement) -> bool {
        a.word == b.word
    }

    fn bound(&self) -> Option<usize> {
        Some(self.bound)
    }
}

/// Small named monoids, semilattices, and actions used across tests and
/// the command line.
pub mod sample {
    use super::*;
    use crate::actions::{
        order_preserving_failure, restrict_action, ActionTable, PartialActionTable,
    };
    use crate::semilattice::{subset_top, Semilattice};

    pub fn trivial_monoid() -> FinMonoid {
        FinMonoid::new(1, &[vec![0]], 0).expect("valid")
    }

    /// The cyclic group of order k on 0..k, identity 0.
    pub fn cyclic(k: usize) -> FinMonoid {
        let rows: Vec<Vec<usize>> = (0..k).map(|i| (0..k).map(|j| (i + j) % k).collect()).collect();
        FinMonoid::new(k, &rows, 0).expect("valid")
    }

    /// The Klein four-group as bitwise xor on 0..4.
    pub fn klein_four() -> FinMonoid {
        let rows: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        FinMonoid::new(4, &rows, 0).expect("valid")
    }

    /// The two-element monoid {1, t} with tt = t.
    pub fn idempotent_pair() -> FinMonoid {
        FinMonoid::new(2, &[vec![0, 1], vec![1, 1]], 0).expect("valid")
    }

    /// The monoid {1, x, ..., x^k} with x^i x^j = x^min(i+j,k).
    pub fn monogenic_aperiodic(k: usize) -> FinMonoid {
        let n = k + 1;
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).map(|j| (i + j).min(k)).collect())
            .collect();
        FinMonoid::new(n, &rows, 0).expect("valid")
    }

    /// The n-element chain. Index 0 is the top; larger indices sit lower.
    pub fn chain(n: usize) -> Semilattice {
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| i.max(j)).collect()).collect();
        Semilattice::new(n, &rows, 0).expect("valid")
    }

    /// Top 0, incomparable 1 and 2, bottom 3.
    pub fn diamond() -> Semilattice {
        let meet = |i: usize, j: usize| -> usize {
            if i == j {
                i
            } else if i == 0 {
                j
            } else if j == 0 {
                i
            } else {
                3
            }
        };
        let rows: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| meet(i, j)).collect()).collect();
        Semilattice::new(4, &rows, 0).expect("valid")
    }

    /// The idempotent pair acting on the two-chain: t sends both elements
    /// to the bottom. The smallest context whose normal-form monoid is
    /// finite and non-trivial.
    pub fn idempotent_on_two_chain() -> ActionTable {
        ActionTable::new(idempotent_pair(), chain(2), &[vec![0, 1], vec![1, 1]])
            .expect("valid")
    }

    /// The cyclic group of order two acting trivially on the three-chain.
    pub fn z2_trivial_on_chain3() -> ActionTable {
        ActionTable::new(cyclic(2), chain(3), &[vec![0, 1, 2], vec![0, 1, 2]])
            .expect("valid")
    }

    /// The three-element aperiodic monogenic monoid pushing the three-chain
    /// down one step per application of x.
    pub fn aperiodic_on_chain3() -> ActionTable {
        ActionTable::new(
            monogenic_aperiodic(2),
            chain(3),
            &[vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]],
        )
        .expect("valid")
    }

    /// The idempotent pair on the diamond: t fixes one atom and crushes
    /// the other to the bottom. Products of its atoms exercise the
    /// incomparable-split branch of canonical rewriting.
    pub fn idem_pair_on_diamond() -> ActionTable {
        ActionTable::new(idempotent_pair(), diamond(), &[vec![0, 1, 2, 3], vec![1, 1, 3, 3]])
            .expect("valid")
    }

    /// Every curated total action, named.
    pub fn named_actions() -> Vec<(String, ActionTable)> {
        vec![
            ("idem-pair-on-chain2".into(), idempotent_on_two_chain()),
            ("z2-trivial-on-chain3".into(), z2_trivial_on_chain3()),
            ("aperiodic-on-chain3".into(), aperiodic_on_chain3()),
            ("idem-pair-on-diamond".into(), idem_pair_on_diamond()),
        ]
    }

    /// Seeded stream of strong order-preserving partial actions: the
    /// curated actions restricted to randomly chosen subsemilattices, with
    /// the full restriction as a fallback. Restriction of a total action
    /// is always strong; order preservation is re-checked per draw.
    pub fn random_partial_instances(
        seed: u64,
        count: usize,
    ) -> Vec<(String, PartialActionTable)> {
        let actions = named_actions();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (name, a) in &actions {
            if out.len() >= count {
                return out;
            }
            out.push((format!("{name}/Y=all"), a.as_partial()));
        }
        let mut attempts = 0usize;
        while out.len() < count && attempts < 500 * count {
            attempts += 1;
            let (name, a) = &actions[rng.random_range(0..actions.len())];
            let ny = a.space().n();
            let mut y: Vec<usize> = (0..ny).filter(|_| rng.random_bool(0.6)).collect();
            if y.is_empty() {
                y.push(rng.random_range(0..ny));
            }
            // Close under meet so the subset is a subsemilattice.
            loop {
                let mut grew = false;
                let snapshot = y.clone();
                for &p in &snapshot {
                    for &q in &snapshot {
                        let m = a.space().meet(p, q);
                        if !y.contains(&m) {
                            y.push(m);
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            y.sort_unstable();
            y.dedup();
            if subset_top(a.space(), &y).is_err() {
                continue;
            }
            let Ok(pa) = restrict_action(a, &y) else {
                continue;
            };
            if order_preserving_failure(&pa).is_some() {
                continue;
            }
            let members: Vec<String> = y.iter().map(|e| format!("{e}")).collect();
            out.push((format!("{name}/Y={{{}}}", members.join(",")), pa));
        }
        while out.len() < count {
            let (name, a) = &actions[out.len() % actions.len()];
            out.push((format!("{name}/Y=all/again"), a.as_partial()));
        }
        out
    }
}
