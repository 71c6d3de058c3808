//! The monoid of normal forms over a total order-preserving action.
//!
//! Given a monoid T acting on a semilattice X, words over the disjoint
//! alphabet T + X are reduced to a normal form t0 e1 t1 ... en tn in which
//! every ei is a non-unit semilattice letter, every interior ti is a
//! non-unit monoid letter, and each ei lies strictly below the + value of
//! the tail starting at ti. Normal forms multiply by concatenating and
//! re-reducing; this realizes the quotient of the free product by the
//! relations identifying the two units and collapsing w+ w to w.

use std::fmt;
use std::str::FromStr;

use crate::actions::ActionTable;
use crate::error::Error;

/// One letter of a raw word: a monoid element or a semilattice element,
/// both by index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    T(usize),
    X(usize),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::T(i) => write!(f, "t{i}"),
            Letter::X(i) => write!(f, "x{i}"),
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse {
            detail: format!("letter `{s}` is not t<index> or x<index>"),
        };
        if let Some(d) = s.strip_prefix('t') {
            Ok(Letter::T(d.parse().map_err(|_| bad())?))
        } else if let Some(d) = s.strip_prefix('x') {
            Ok(Letter::X(d.parse().map_err(|_| bad())?))
        } else {
            Err(bad())
        }
    }
}

/// A generator te of the normal-form monoid: the product of one monoid
/// letter and one semilattice letter. Distinct pairs are distinct elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub t: usize,
    pub e: usize,
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{} x{}", self.t, self.e)
    }
}

/// A factorization into atoms with strictly increasing interface:
/// star of each atom strictly below + of the next, and no projection atom
/// after the first position.
pub type HCanonicalForm = Vec<Atom>;

/// A reduced element: t0 with the (possibly empty) list of pairs
/// (e1, t1), ..., (en, tn). Always in normal form; only context operations
/// construct values.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlElement {
    t0: usize,
    pairs: Vec<(usize, usize)>,
}

impl PlElement {
    pub fn t0(&self) -> usize {
        self.t0
    }

    /// The pairs (ei, ti) after t0.
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of semilattice letters in the normal form.
    pub fn depth(&self) -> usize {
        self.pairs.len()
    }

    /// The normal form spelled out as a raw word, units included.
    pub fn to_word(&self) -> Vec<Letter> {
        let mut w = vec![Letter::T(self.t0)];
        for &(e, t) in &self.pairs {
            w.push(Letter::X(e));
            w.push(Letter::T(t));
        }
        w
    }
}

impl fmt::Display for PlElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = self.to_word();
        let mut first = true;
        for l in word {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
            first = false;
        }
        Ok(())
    }
}

/// A monoid acting on a semilattice, packaged with the reduction and
/// normal-form operations. The action table is total and order-preserving
/// by construction.
#[derive(Debug, Clone)]
pub struct PlContext {
    act: ActionTable,
}

impl PlContext {
    pub fn new(act: ActionTable) -> Self {
        PlContext { act }
    }

    pub fn action(&self) -> &ActionTable {
        &self.act
    }

    pub fn monoid(&self) -> &crate::monoid::FinMonoid {
        self.act.monoid()
    }

    pub fn space(&self) -> &crate::semilattice::Semilattice {
        self.act.space()
    }

    fn one_t(&self) -> usize {
        self.act.monoid().one()
    }

    fn one_x(&self) -> usize {
        self.act.space().one()
    }

    /// The identity element: the empty word.
    pub fn identity(&self) -> PlElement {
        PlElement {
            t0: self.one_t(),
            pairs: Vec::new(),
        }
    }

    /// The element of a single monoid letter.
    pub fn monoid_elem(&self, t: usize) -> PlElement {
        PlElement {
            t0: t,
            pairs: Vec::new(),
        }
    }

    /// The element of a single semilattice letter.
    pub fn projection(&self, e: usize) -> PlElement {
        if e == self.one_x() {
            self.identity()
        } else {
            PlElement {
                t0: self.one_t(),
                pairs: vec![(e, self.one_t())],
            }
        }
    }

    /// The element te.
    pub fn atom_element(&self, a: Atom) -> PlElement {
        if a.e == self.one_x() {
            self.monoid_elem(a.t)
        } else {
            PlElement {
                t0: a.t,
                pairs: vec![(a.e, self.one_t())],
            }
        }
    }

    /// Every atom te, in lexicographic order. These generate the monoid and
    /// are pairwise distinct as elements.
    pub fn atoms(&self) -> Vec<Atom> {
        let (nt, ny) = (self.monoid().n(), self.space().n());
        let mut out = Vec::with_capacity(nt * ny);
        for t in 0..nt {
            for e in 0..ny {
                out.push(Atom { t, e });
            }
        }
        out
    }

    fn check_letters(&self, word: &[Letter]) -> Result<(), Error> {
        for &l in word {
            match l {
                Letter::T(t) if t >= self.monoid().n() => {
                    return Err(Error::IndexOutOfRange {
                        value: t,
                        n: self.monoid().n(),
                    })
                }
                Letter::X(e) if e >= self.space().n() => {
                    return Err(Error::IndexOutOfRange {
                        value: e,
                        n: self.space().n(),
                    })
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// The + value of a raw word, as a semilattice index: fold from the
    /// right, meeting at semilattice letters and acting at monoid letters.
    pub fn word_plus(&self, word: &[Letter]) -> usize {
        let mut acc = self.one_x();
        for &l in word.iter().rev() {
            acc = match l {
                Letter::X(e) => self.space().meet(e, acc),
                Letter::T(t) => self.act.act(t, acc),
            };
        }
        acc
    }

    /// Squash a word to the alternating shape: drop unit letters, multiply
    /// adjacent monoid letters, meet adjacent semilattice letters.
    fn squash(&self, word: &[Letter]) -> Vec<Letter> {
        let mut stack: Vec<Letter> = Vec::with_capacity(word.len());
        for &l in word {
            let mut cur = l;
            loop {
                let unit = match cur {
                    Letter::T(t) => t == self.one_t(),
                    Letter::X(e) => e == self.one_x(),
                };
                if unit {
                    break;
                }
                match (stack.last().copied(), cur) {
                    (Some(Letter::T(a)), Letter::T(b)) => {
                        stack.pop();
                        cur = Letter::T(self.monoid().mul(a, b));
                    }
                    (Some(Letter::X(a)), Letter::X(b)) => {
                        stack.pop();
                        cur = Letter::X(self.space().meet(a, b));
                    }
                    _ => {
                        stack.push(cur);
                        break;
                    }
                }
            }
        }
        stack
    }

    /// Read an alternating unit-free word into form data (t0, pairs).
    fn word_to_form(&self, word: &[Letter]) -> PlElement {
        let mut t0 = self.one_t();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut it = word.iter().copied().peekable();
        if let Some(Letter::T(t)) = it.peek().copied() {
            t0 = t;
            it.next();
        }
        while let Some(l) = it.next() {
            let Letter::X(e) = l else {
                unreachable!("squashed word alternates");
            };
            let t = match it.next() {
                Some(Letter::T(t)) => t,
                None => self.one_t(),
                Some(Letter::X(_)) => unreachable!("squashed word alternates"),
            };
            pairs.push((e, t));
        }
        PlElement { t0, pairs }
    }

    /// + of the tail ti e(i+1) ... en tn for every i in 1..=n.
    /// Returned vector is indexed by i - 1.
    fn tail_plus(&self, el: &PlElement) -> Vec<usize> {
        let n = el.pairs.len();
        let mut tp = vec![0usize; n];
        let mut acc = self.one_x();
        for i in (0..n).rev() {
            let (e, t) = el.pairs[i];
            acc = self.act.act(t, acc);
            tp[i] = acc;
            acc = self.space().meet(e, acc);
        }
        tp
    }

    /// Reduce a raw word to its normal form.
    ///
    /// First squash to the alternating shape, then repair the strictness
    /// condition from the right: at the greatest offending position, either
    /// absorb the semilattice letter into its neighbours (when the tail +
    /// value sits below it) or replace it by the meet. Each repair strictly
    /// shrinks a well-founded measure; the budget is a hard safety net.
    pub fn reduce(&self, word: &[Letter]) -> Result<PlElement, Error> {
        self.check_letters(word)?;
        let budget = (word.len() + 2) * (word.len() + 2) * (self.space().n() + 1);
        let mut el = self.word_to_form(&self.squash(word));
        for _ in 0..budget {
            let tp = self.tail_plus(&el);
            let bad = (0..el.pairs.len())
                .rev()
                .find(|&i| !self.space().lt(el.pairs[i].0, tp[i]));
            let Some(i) = bad else {
                debug_assert!(self.is_normal_form(&el));
                return Ok(el);
            };
            let (e, t) = el.pairs[i];
            if self.space().leq(tp[i], e) {
                // The tail + value absorbs e: delete it and merge the
                // neighbouring monoid letters, then re-squash.
                let prev = if i == 0 { el.t0 } else { el.pairs[i - 1].1 };
                let merged = self.monoid().mul(prev, t);
                if i == 0 {
                    el.t0 = merged;
                } else {
                    el.pairs[i - 1].1 = merged;
                }
                el.pairs.remove(i);
                let w = el.to_word();
                el = self.word_to_form(&self.squash(&w));
            } else {
                el.pairs[i].0 = self.space().meet(tp[i], e);
            }
        }
        Err(Error::ReductionBudget { budget })
    }

    /// Whether the element data satisfies every normal-form condition.
    pub fn is_normal_form(&self, el: &PlElement) -> bool {
        if el.t0 >= self.monoid().n() {
            return false;
        }
        let n = el.pairs.len();
        for (j, &(e, t)) in el.pairs.iter().enumerate() {
            if e >= self.space().n() || t >= self.monoid().n() {
                return false;
            }
            if e == self.one_x() {
                return false;
            }
            if j + 1 < n && t == self.one_t() {
                return false;
            }
        }
        let tp = self.tail_plus(el);
        (0..n).all(|i| self.space().lt(el.pairs[i].0, tp[i]))
    }

    /// Product in the normal-form monoid.
    pub fn mul(&self, a: &PlElement, b: &PlElement) -> PlElement {
        let mut w = a.to_word();
        w.extend(b.to_word());
        self.reduce(&w)
            .expect("product of normal forms must reduce within budget")
    }

    /// The + value of an element, as a semilattice index.
    pub fn plus_x(&self, a: &PlElement) -> usize {
        self.word_plus(&a.to_word())
    }

    /// The + operation: the projection at the + value.
    pub fn plus(&self, a: &PlElement) -> PlElement {
        self.projection(self.plus_x(a))
    }

    /// The * value of an element, as a semilattice index: en when the
    /// normal form ends with the unit monoid letter, the top otherwise.
    pub fn star_x(&self, a: &PlElement) -> usize {
        match a.pairs.last() {
            Some(&(e, t)) if t == self.one_t() => e,
            _ => self.one_x(),
        }
    }

    /// The * operation: the projection at the * value.
    pub fn star(&self, a: &PlElement) -> PlElement {
        self.projection(self.star_x(a))
    }

    /// Image of an element under the retraction onto the monoid: the
    /// product of its monoid letters.
    pub fn c_t(&self, a: &PlElement) -> usize {
        let mut word = vec![a.t0];
        word.extend(a.pairs.iter().map(|&(_, t)| t));
        self.monoid().word_mul(&word)
    }

    /// Whether two elements have the same monoid-letter product. This is
    /// the least congruence identifying every projection with the identity.
    pub fn sigma_eq(&self, a: &PlElement, b: &PlElement) -> bool {
        self.c_t(a) == self.c_t(b)
    }

    /// + of a single atom as a semilattice index: t . e.
    pub fn atom_plus(&self, a: Atom) -> usize {
        self.act.act(a.t, a.e)
    }

    /// * of a single atom as a semilattice index: e.
    pub fn atom_star(&self, a: Atom) -> usize {
        a.e
    }

    /// The canonical atom factorization of an element.
    pub fn to_h_canonical(&self, el: &PlElement) -> HCanonicalForm {
        let n = el.pairs.len();
        if n == 0 {
            return vec![Atom {
                t: el.t0,
                e: self.one_x(),
            }];
        }
        let mut out = Vec::with_capacity(n + 1);
        let mut prev_t = el.t0;
        for &(e, t) in &el.pairs {
            out.push(Atom { t: prev_t, e });
            prev_t = t;
        }
        let (_, tn) = el.pairs[n - 1];
        if tn != self.one_t() {
            out.push(Atom {
                t: tn,
                e: self.one_x(),
            });
        }
        out
    }

    /// Whether a sequence of atoms is a canonical form: non-empty, star of
    /// each strictly below + of the next, no projection atom past the first
    /// position.
    pub fn is_h_canonical(&self, hs: &[Atom]) -> bool {
        if hs.is_empty() {
            return false;
        }
        for (i, a) in hs.iter().enumerate() {
            if a.t >= self.monoid().n() || a.e >= self.space().n() {
                return false;
            }
            if i >= 1 && a.t == self.one_t() {
                return false;
            }
        }
        hs.windows(2)
            .all(|w| self.space().lt(self.atom_star(w[0]), self.atom_plus(w[1])))
    }

    /// Rebuild the element of a canonical form.
    pub fn from_h_canonical(&self, hs: &[Atom]) -> Result<PlElement, Error> {
        if !self.is_h_canonical(hs) {
            return Err(Error::MalformedCanonicalForm {
                reason: format!("sequence of {} atoms fails the interface conditions", hs.len()),
            });
        }
        let m = hs.len();
        let el = if m == 1 && hs[0].e == self.one_x() {
            self.monoid_elem(hs[0].t)
        } else {
            let (body, tn) = if hs[m - 1].e == self.one_x() {
                (&hs[..m - 1], hs[m - 1].t)
            } else {
                (hs, self.one_t())
            };
            let t0 = body[0].t;
            let mut pairs = Vec::with_capacity(body.len());
            for (i, a) in body.iter().enumerate() {
                let t = if i + 1 < body.len() { body[i + 1].t } else { tn };
                pairs.push((a.e, t));
            }
            PlElement { t0, pairs }
        };
        if !self.is_normal_form(&el) {
            return Err(Error::Internal {
                detail: format!("canonical form rebuilt to a non-normal element `{el}`"),
            });
        }
        Ok(el)
    }

    /// Every element whose canonical form has at most `max_len` atoms,
    /// sorted. Single atoms give the length-1 elements (the identity is the
    /// unit atom); longer forms are built by depth-first extension under
    /// the interface conditions.
    pub fn enumerate_elements(&self, max_len: usize) -> Vec<PlElement> {
        let mut out = Vec::new();
        for seq in self.enumerate_h_canonical(max_len) {
            let el = self
                .from_h_canonical(&seq)
                .expect("enumerated form is canonical");
            out.push(el);
        }
        out.sort();
        out.dedup();
        out
    }

    /// Every canonical form of length at most `max_len`, in lexicographic
    /// order of atom sequences.
    pub fn enumerate_h_canonical(&self, max_len: usize) -> Vec<HCanonicalForm> {
        self.enumerate_h_canonical_from(&self.atoms(), max_len)
    }

    /// Canonical forms drawn from a restricted atom list, in lexicographic
    /// order of that list.
    pub fn enumerate_h_canonical_from(
        &self,
        atoms: &[Atom],
        max_len: usize,
    ) -> Vec<HCanonicalForm> {
        let mut out = Vec::new();
        if max_len == 0 {
            return out;
        }
        let mut stack: Vec<HCanonicalForm> = atoms.iter().map(|&a| vec![a]).collect();
        stack.reverse();
        while let Some(seq) = stack.pop() {
            out.push(seq.clone());
            if seq.len() >= max_len {
                continue;
            }
            let last = *seq.last().expect("sequences are non-empty");
            for &a in atoms.iter().rev() {
                if a.t != self.one_t() && self.space().lt(self.atom_star(last), self.atom_plus(a))
                {
                    let mut next = seq.clone();
                    next.push(a);
                    stack.push(next);
                }
            }
        }
        out
    }

    /// Parse a whitespace-separated raw word such as `t1 x0 t2`.
    pub fn parse_word(&self, s: &str) -> Result<Vec<Letter>, Error> {
        let word: Vec<Letter> = s
            .split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<_, _>>()?;
        self.check_letters(&word)?;
        Ok(word)
    }

    /// Parse a raw word and reduce it to its element.
    pub fn parse_element(&self, s: &str) -> Result<PlElement, Error> {
        let word = self.parse_word(s)?;
        self.reduce(&word)
    }
}
