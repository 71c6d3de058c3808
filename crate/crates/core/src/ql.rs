//! The submonoid cut out of the normal-form monoid by a subsemilattice.
//!
//! Fix a context over the action of T on X and a subsemilattice Y of X with
//! its own top element. Two conditions tie Y to the action:
//!
//! - (A) for e <= f in Y, if t.f lands in Y then so does t.e;
//! - (B) every t maps some element of Y into Y.
//!
//! The atoms te with e in Y and t.e in Y generate a biunary submonoid whose
//! identity is the top of Y, whose projections are exactly the elements of
//! Y, and whose members are recognized by their canonical atom sequences.

use crate::error::Error;
use crate::pl::{Atom, PlContext, PlElement};
use crate::semilattice::subset_top;

/// A normal-form context together with a distinguished subsemilattice
/// satisfying the two restriction conditions.
#[derive(Debug, Clone)]
pub struct QlContext {
    pl: PlContext,
    y: Vec<usize>,
    in_y: Vec<bool>,
    y_top: usize,
}

impl QlContext {
    /// Validates that `y` picks out a subsemilattice with a top of its own
    /// and that conditions (A) and (B) hold for the action.
    pub fn new(pl: PlContext, y: &[usize]) -> Result<Self, Error> {
        let mut ys = y.to_vec();
        ys.sort_unstable();
        let y_top = subset_top(pl.space(), &ys)?;
        let mut in_y = vec![false; pl.space().n()];
        for &e in &ys {
            in_y[e] = true;
        }
        let nt = pl.monoid().n();
        for t in 0..nt {
            for &f in &ys {
                if !in_y[pl.action().act(t, f)] {
                    continue;
                }
                for &e in &ys {
                    if pl.space().leq(e, f) && !in_y[pl.action().act(t, e)] {
                        return Err(Error::ConditionA { t, e, f });
                    }
                }
            }
            if !ys.iter().any(|&g| in_y[pl.action().act(t, g)]) {
                return Err(Error::ConditionB { t });
            }
        }
        Ok(QlContext {
            pl,
            y: ys,
            in_y,
            y_top,
        })
    }

    pub fn pl(&self) -> &PlContext {
        &self.pl
    }

    /// Sorted member indices of the subsemilattice.
    pub fn y(&self) -> &[usize] {
        &self.y
    }

    /// Top element of the subsemilattice, as an index into the full space.
    pub fn y_top(&self) -> usize {
        self.y_top
    }

    pub fn contains(&self, e: usize) -> bool {
        e < self.in_y.len() && self.in_y[e]
    }

    /// Identity of the submonoid: the projection at the top of Y.
    pub fn identity(&self) -> PlElement {
        self.pl.projection(self.y_top)
    }

    /// Whether te is a generator of the submonoid.
    pub fn is_qatom(&self, a: Atom) -> bool {
        a.t < self.pl.monoid().n()
            && self.contains(a.e)
            && self.contains(self.pl.action().act(a.t, a.e))
    }

    /// The generators, in lexicographic order.
    pub fn qatoms(&self) -> Vec<Atom> {
        self.pl
            .atoms()
            .into_iter()
            .filter(|&a| self.is_qatom(a))
            .collect()
    }

    /// Every member whose canonical factorization has at most `bound`
    /// atoms, sorted.
    pub fn enumerate_members(&self, bound: usize) -> Vec<PlElement> {
        let mut out: Vec<PlElement> = self
            .pl
            .enumerate_h_canonical_from(&self.qatoms(), bound)
            .into_iter()
            .map(|seq| {
                self.pl
                    .from_h_canonical(&seq)
                    .expect("enumerated form is canonical")
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Membership test: an element belongs to the submonoid exactly when
    /// every atom of its canonical factorization is a generator.
    pub fn is_member(&self, el: &PlElement) -> bool {
        self.pl
            .to_h_canonical(el)
            .iter()
            .all(|&a| self.is_qatom(a))
    }

    fn require_member(&self, el: &PlElement) -> Result<(), Error> {
        if self.is_member(el) {
            Ok(())
        } else {
            Err(Error::NotAMember {
                detail: format!("`{el}`"),
            })
        }
    }

    /// Whether two members are related by the least congruence identifying
    /// all projections of the submonoid. Agrees with the ambient relation.
    pub fn sigma_eq(&self, a: &PlElement, b: &PlElement) -> Result<bool, Error> {
        self.require_member(a)?;
        self.require_member(b)?;
        Ok(self.pl.c_t(a) == self.pl.c_t(b))
    }

    /// A generator representing the sigma class of a member: fold the
    /// canonical atoms from the right, at each step multiplying the monoid
    /// parts and meeting in the least element of Y that keeps the partial
    /// product inside Y. The result (w, g) satisfies w.g in Y and the
    /// member is sigma-related to the element wg.
    pub fn sigma_rep(&self, el: &PlElement) -> Result<Atom, Error> {
        self.require_member(el)?;
        let hs = self.pl.to_h_canonical(el);
        let last = hs[hs.len() - 1];
        let mut w = last.t;
        let mut g = last.e;
        for a in hs[..hs.len() - 1].iter().rev() {
            let sw = self.pl.monoid().mul(a.t, w);
            let f = self
                .y
                .iter()
                .copied()
                .find(|&f| self.in_y[self.pl.action().act(sw, f)])
                .ok_or_else(|| Error::Internal {
                    detail: format!("condition (B) fails for {sw} after validation"),
                })?;
            g = self.pl.space().meet(g, f);
            w = sw;
        }
        let rep = Atom { t: w, e: g };
        debug_assert!(self.is_qatom(rep));
        debug_assert_eq!(self.pl.c_t(el), w);
        Ok(rep)
    }
}
