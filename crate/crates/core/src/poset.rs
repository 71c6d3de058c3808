use crate::error::Error;

/// Finite partial order on elements `0..n`, stored as a dense relation matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    leq: Vec<bool>,
}

impl Poset {
    /// Builds a poset from a row-major relation matrix, checking that the
    /// relation is reflexive, antisymmetric and transitive.
    pub fn new(n: usize, rows: &[Vec<bool>]) -> Result<Self, Error> {
        if rows.len() != n {
            return Err(Error::WrongRowCount {
                want: n,
                got: rows.len(),
            });
        }
        let mut leq = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::RaggedTable {
                    row: i,
                    want: n,
                    got: row.len(),
                });
            }
            leq.extend_from_slice(row);
        }
        let p = Poset { n, leq };
        for a in 0..n {
            if !p.leq(a, a) {
                return Err(Error::NotReflexive { a });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && p.leq(a, b) && p.leq(b, a) {
                    return Err(Error::NotAntisymmetric { a, b });
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !p.leq(a, b) {
                    continue;
                }
                for c in 0..n {
                    if p.leq(b, c) && !p.leq(a, c) {
                        return Err(Error::NotTransitive { a, b, c });
                    }
                }
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// Greatest element, if one exists.
    pub fn top(&self) -> Option<usize> {
        (0..self.n).find(|&t| (0..self.n).all(|x| self.leq(x, t)))
    }

    /// Downward closure of `seeds`, as a sorted element list.
    pub fn order_ideal(&self, seeds: &[usize]) -> Vec<usize> {
        (0..self.n)
            .filter(|&x| seeds.iter().any(|&s| self.leq(x, s)))
            .collect()
    }

    /// True when the sorted set `set` is downward closed.
    pub fn is_down_closed(&self, set: &[usize]) -> bool {
        set.iter()
            .all(|&a| (0..self.n).all(|b| !self.leq(b, a) || set.binary_search(&b).is_ok()))
    }

    /// A linear extension: whenever a < b, a appears before b.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut placed = vec![false; self.n];
        let mut out = Vec::with_capacity(self.n);
        while out.len() < self.n {
            for x in 0..self.n {
                if !placed[x] && (0..self.n).all(|y| placed[y] || !self.lt(y, x)) {
                    placed[x] = true;
                    out.push(x);
                }
            }
        }
        out
    }

    /// Every order ideal (downward-closed subset), the empty set included.
    ///
    /// Ideals come out as sorted element lists, ordered by size and then
    /// lexicographically, so the enumeration is canonical.
    pub fn all_order_ideals(&self) -> Vec<Vec<usize>> {
        let ext = self.linear_extension();
        let mut out: Vec<Vec<usize>> = Vec::new();
        // Walk the linear extension; an element may join only if everything
        // strictly below it is already in.
        let mut stack: Vec<(usize, Vec<bool>)> = vec![(0, vec![false; self.n])];
        while let Some((i, cur)) = stack.pop() {
            if i == ext.len() {
                let mut ideal: Vec<usize> = (0..self.n).filter(|&x| cur[x]).collect();
                ideal.sort_unstable();
                out.push(ideal);
                continue;
            }
            let x = ext[i];
            stack.push((i + 1, cur.clone()));
            if (0..self.n).all(|y| !self.lt(y, x) || cur[y]) {
                let mut with = cur;
                with[x] = true;
                stack.push((i + 1, with));
            }
        }
        out.sort_unstable_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
        out.dedup();
        out
    }
}
