use crate::error::Error;
use crate::poset::Poset;

/// Finite meet-semilattice with identity, as a dense meet table.
///
/// The identity is the greatest element of the induced order
/// `a <= b  iff  a ^ b = a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Semilattice {
    n: usize,
    meet: Vec<usize>,
    one: usize,
}

impl Semilattice {
    /// Builds a semilattice from a row-major meet table, checking
    /// idempotence, commutativity, associativity and the identity law.
    pub fn new(n: usize, rows: &[Vec<usize>], one: usize) -> Result<Self, Error> {
        let meet = read_square_table(n, rows)?;
        if one >= n {
            return Err(Error::IndexOutOfRange { value: one, n });
        }
        let s = Semilattice { n, meet, one };
        for a in 0..n {
            if s.meet(a, a) != a {
                return Err(Error::NotIdempotent { a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if s.meet(a, b) != s.meet(b, a) {
                    return Err(Error::NotCommutative { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = s.meet(a, b);
                for c in 0..n {
                    if s.meet(ab, c) != s.meet(a, s.meet(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        for a in 0..n {
            if s.meet(one, a) != a {
                return Err(Error::NotIdentity { one, witness: a });
            }
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.n + b]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet(a, b) == a
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// The induced order, as a poset.
    pub fn to_poset(&self) -> Poset {
        let rows: Vec<Vec<bool>> = (0..self.n)
            .map(|a| (0..self.n).map(|b| self.leq(a, b)).collect())
            .collect();
        Poset::new(self.n, &rows).expect("induced order of a semilattice is a partial order")
    }

    /// Meet table restricted to a validated subset, reindexed by position.
    pub fn restrict(&self, subset: &[usize]) -> Result<Semilattice, Error> {
        let top = subset_top(self, subset)?;
        let pos = |v: usize| subset.iter().position(|&u| u == v);
        let rows: Vec<Vec<usize>> = subset
            .iter()
            .map(|&a| {
                subset
                    .iter()
                    .map(|&b| pos(self.meet(a, b)).expect("subset is meet-closed"))
                    .collect()
            })
            .collect();
        Semilattice::new(subset.len(), &rows, pos(top).unwrap())
    }
}

/// Checks that `subset` (sorted, non-empty, duplicate-free, in range) is
/// closed under meet and has a greatest element of its own; returns that top.
pub fn subset_top(s: &Semilattice, subset: &[usize]) -> Result<usize, Error> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    for (i, &v) in subset.iter().enumerate() {
        if v >= s.n() {
            return Err(Error::IndexOutOfRange { value: v, n: s.n() });
        }
        if i > 0 && subset[i - 1] == v {
            return Err(Error::DuplicateInSubset { value: v });
        }
    }
    for &a in subset {
        for &b in subset {
            if subset.binary_search(&s.meet(a, b)).is_err() {
                return Err(Error::NotMeetClosed { a, b });
            }
        }
    }
    subset
        .iter()
        .copied()
        .find(|&t| subset.iter().all(|&x| s.leq(x, t)))
        .ok_or(Error::NoSubsetTop)
}

/// Builds the semilattice on a poset's elements, if every pair has a
/// greatest lower bound and a greatest element exists.
pub fn semilattice_from_poset(p: &Poset) -> Result<Semilattice, Error> {
    let n = p.n();
    let top = p.top().ok_or(Error::NoTop)?;
    let mut rows = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let glb = (0..n)
                .filter(|&c| p.leq(c, a) && p.leq(c, b))
                .find(|&c| {
                    (0..n).all(|d| !(p.leq(d, a) && p.leq(d, b)) || p.leq(d, c))
                })
                .ok_or(Error::NoMeet { a, b })?;
            rows[a][b] = glb;
        }
    }
    Semilattice::new(n, &rows, top)
}

/// The semilattice of all order ideals of `p` under intersection, together
/// with the ideals themselves in index order. The identity is the full set.
pub fn ideal_semilattice(p: &Poset) -> (Semilattice, Vec<Vec<usize>>) {
    let ideals = p.all_order_ideals();
    let index: std::collections::HashMap<&[usize], usize> = ideals
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();
    let n = ideals.len();
    let mut rows = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let mut cap: Vec<usize> = ideals[a]
                .iter()
                .copied()
                .filter(|x| ideals[b].binary_search(x).is_ok())
                .collect();
            cap.sort_unstable();
            rows[a][b] = index[cap.as_slice()];
        }
    }
    let full = index[ideals
        .iter()
        .map(|v| v.as_slice())
        .find(|v| v.len() == p.n())
        .expect("full set is an ideal")];
    let s = Semilattice::new(n, &rows, full)
        .expect("ideals under intersection form a semilattice");
    (s, ideals)
}

pub(crate) fn read_square_table(n: usize, rows: &[Vec<usize>]) -> Result<Vec<usize>, Error> {
    if rows.len() != n {
        return Err(Error::WrongRowCount {
            want: n,
            got: rows.len(),
        });
    }
    let mut flat = Vec::with_capacity(n * n);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::RaggedTable {
                row: i,
                want: n,
                got: row.len(),
            });
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::EntryOutOfRange {
                    row: i,
                    col: j,
                    value: v,
                    n,
                });
            }
            flat.push(v);
        }
    }
    Ok(flat)
}
