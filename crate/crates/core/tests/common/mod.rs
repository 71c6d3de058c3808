#![allow(dead_code)]

use ehresmann::actions::ActionTable;
use ehresmann::fixtures::sample;
use ehresmann::monoid::FinMonoid;
use ehresmann::pl::{Letter, PlContext};
use std::collections::BTreeMap;

/// Multiplication in the free product: concatenate and merge adjacent
/// letters of the same sort, monoid letters by the monoid table and
/// semilattice letters by meet. Identity letters are ordinary letters
/// here; nothing is dropped.
pub fn fp_normalize(ctx: &PlContext, raw: &[Letter]) -> Vec<Letter> {
    let m = ctx.monoid();
    let x = ctx.space();
    let mut out: Vec<Letter> = Vec::with_capacity(raw.len());
    for &l in raw {
        match (out.last().copied(), l) {
            (Some(Letter::T(a)), Letter::T(b)) => {
                *out.last_mut().unwrap() = Letter::T(m.mul(a, b));
            }
            (Some(Letter::X(a)), Letter::X(b)) => {
                *out.last_mut().unwrap() = Letter::X(x.meet(a, b));
            }
            _ => out.push(l),
        }
    }
    out
}

/// The + of a free-product word: act on the top of the semilattice from
/// the right, letter by letter.
pub fn fp_plus(ctx: &PlContext, word: &[Letter]) -> usize {
    let x = ctx.space();
    let a = ctx.action();
    let mut acc = x.one();
    for &l in word.iter().rev() {
        acc = match l {
            Letter::T(t) => a.act(t, acc),
            Letter::X(e) => x.meet(e, acc),
        };
    }
    acc
}

struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Reference congruence on the free product, built directly from the
/// generating pairs: every (w+ w, w) together with the identification of
/// the two identity letters, closed under one-letter multiplication on
/// either side inside a bounded window of alternating words. Knows nothing
/// about normal forms; equality of classes is the oracle answer.
pub struct KOracle {
    cap: usize,
    index: BTreeMap<Vec<Letter>, usize>,
    class: Vec<usize>,
}

impl KOracle {
    pub fn build(ctx: &PlContext, cap: usize) -> KOracle {
        let nt = ctx.monoid().n();
        let nx = ctx.space().n();

        let mut words: Vec<Vec<Letter>> = Vec::new();
        let mut frontier: Vec<Vec<Letter>> = (0..nt)
            .map(|t| vec![Letter::T(t)])
            .chain((0..nx).map(|e| vec![Letter::X(e)]))
            .collect();
        for _ in 0..cap {
            words.extend(frontier.iter().cloned());
            let mut next = Vec::new();
            for w in &frontier {
                match *w.last().unwrap() {
                    Letter::T(_) => {
                        for e in 0..nx {
                            let mut v = w.clone();
                            v.push(Letter::X(e));
                            next.push(v);
                        }
                    }
                    Letter::X(_) => {
                        for t in 0..nt {
                            let mut v = w.clone();
                            v.push(Letter::T(t));
                            next.push(v);
                        }
                    }
                }
            }
            frontier = next;
        }

        let index: BTreeMap<Vec<Letter>, usize> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        let mut dsu = Dsu::new(words.len());

        let lookup = |w: &[Letter]| index.get(w).copied();

        // Generating pairs that fit in the window.
        for (i, w) in words.iter().enumerate() {
            let plus = fp_plus(ctx, w);
            let mut seeded = vec![Letter::X(plus)];
            seeded.extend_from_slice(w);
            let seeded = fp_normalize(ctx, &seeded);
            if let Some(j) = lookup(&seeded) {
                dsu.union(i, j);
            }
        }
        let it = lookup(&[Letter::T(ctx.monoid().one())]).unwrap();
        let ix = lookup(&[Letter::X(ctx.space().one())]).unwrap();
        dsu.union(it, ix);

        // Close under one-letter extension on both sides. One letter is
        // enough: longer contexts factor into single letters and every
        // intermediate word is no longer than the final one.
        let letters: Vec<Letter> = (0..nt)
            .map(Letter::T)
            .chain((0..nx).map(Letter::X))
            .collect();
        loop {
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for i in 0..words.len() {
                let r = dsu.find(i);
                groups.entry(r).or_default().push(i);
            }
            let mut changed = false;
            for members in groups.values() {
                if members.len() < 2 {
                    continue;
                }
                let w0 = members[0];
                for &w in &members[1..] {
                    for &s in &letters {
                        let left = |i: usize| {
                            let mut v = vec![s];
                            v.extend_from_slice(&words[i]);
                            fp_normalize(ctx, &v)
                        };
                        let right = |i: usize| {
                            let mut v = words[i].clone();
                            v.push(s);
                            fp_normalize(ctx, &v)
                        };
                        if let (Some(a), Some(b)) = (lookup(&left(w0)), lookup(&left(w))) {
                            changed |= dsu.union(a, b);
                        }
                        if let (Some(a), Some(b)) = (lookup(&right(w0)), lookup(&right(w))) {
                            changed |= dsu.union(a, b);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let class = (0..words.len()).map(|i| dsu.find(i)).collect();
        KOracle { cap, index, class }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Class of a raw word, which need not be alternating.
    pub fn class_of(&self, ctx: &PlContext, raw: &[Letter]) -> usize {
        let w = fp_normalize(ctx, raw);
        assert!(!w.is_empty(), "raw word must be non-empty");
        assert!(w.len() <= self.cap, "word escapes the oracle window");
        self.class[*self.index.get(&w).expect("word in window")]
    }

    pub fn are_equiv(&self, ctx: &PlContext, a: &[Letter], b: &[Letter]) -> bool {
        self.class_of(ctx, a) == self.class_of(ctx, b)
    }
}

/// All raw words over the letter alphabet of lengths 1..=max, in mixed
/// radix order.
pub fn raw_words(ctx: &PlContext, max: usize) -> Vec<Vec<Letter>> {
    let nt = ctx.monoid().n();
    let nx = ctx.space().n();
    let letters: Vec<Letter> = (0..nt)
        .map(Letter::T)
        .chain((0..nx).map(Letter::X))
        .collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &layer {
            for &l in &letters {
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Asserts that the oracle partition and the reduction map induce the same
/// partition on all raw words of length 1..=max_raw: class ids and reduced
/// values are in bijection. Returns (words checked, classes seen).
pub fn assert_reduction_matches_oracle(
    ctx: &PlContext,
    oracle: &KOracle,
    max_raw: usize,
) -> (usize, usize) {
    use ehresmann::pl::PlElement;
    let mut by_class: BTreeMap<usize, PlElement> = BTreeMap::new();
    let mut by_elem: BTreeMap<PlElement, usize> = BTreeMap::new();
    let words = raw_words(ctx, max_raw);
    for w in &words {
        let c = oracle.class_of(ctx, w);
        let el = ctx.reduce(w).expect("reduction succeeds");
        match by_class.get(&c) {
            None => {
                by_class.insert(c, el.clone());
            }
            Some(prev) => assert_eq!(
                prev, &el,
                "words in one congruence class reduced to different elements"
            ),
        }
        match by_elem.get(&el) {
            None => {
                by_elem.insert(el, c);
            }
            Some(&prev) => assert_eq!(
                prev, c,
                "words in different congruence classes reduced to one element"
            ),
        }
    }
    assert_eq!(by_class.len(), by_elem.len());
    (words.len(), by_class.len())
}

/// The idempotent pair acting on the three-chain by crushing everything
/// to the bottom.
pub fn idem_const_bottom_on_chain3() -> ActionTable {
    ActionTable::new(
        sample::idempotent_pair(),
        sample::chain(3),
        &[vec![0, 1, 2], vec![2, 2, 2]],
    )
    .expect("valid")
}

/// The idempotent pair acting on the three-chain by collapsing the top
/// two elements onto the middle one.
pub fn idem_mid_on_chain3() -> ActionTable {
    ActionTable::new(
        sample::idempotent_pair(),
        sample::chain(3),
        &[vec![0, 1, 2], vec![1, 1, 2]],
    )
    .expect("valid")
}

/// The cyclic group of order three acting trivially on the two-chain.
pub fn cyclic3_trivial_on_chain2() -> ActionTable {
    ActionTable::new(
        sample::cyclic(3),
        sample::chain(2),
        &[vec![0, 1], vec![0, 1], vec![0, 1]],
    )
    .expect("valid")
}

/// Contexts small enough for the congruence oracle: at most three monoid
/// elements and three semilattice elements each.
pub fn oracle_instances() -> Vec<(&'static str, ActionTable)> {
    vec![
        ("idem-pair-on-chain2", sample::idempotent_on_two_chain()),
        ("z2-trivial-on-chain3", sample::z2_trivial_on_chain3()),
        ("aperiodic-on-chain3", sample::aperiodic_on_chain3()),
        ("idem-const-bottom-on-chain3", idem_const_bottom_on_chain3()),
        ("idem-mid-on-chain3", idem_mid_on_chain3()),
        ("cyclic3-trivial-on-chain2", cyclic3_trivial_on_chain2()),
    ]
}

/// The two-element generated monoid used as the running worked example:
/// idempotent pair on the two-chain.
pub fn f1() -> ActionTable {
    sample::idempotent_on_two_chain()
}

/// A monoid table that is not left cancellative: the idempotent pair,
/// where t1 = tt.
pub fn non_cancellative_monoid() -> FinMonoid {
    sample::idempotent_pair()
}
