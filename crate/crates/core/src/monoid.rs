use crate::error::Error;
use crate::semilattice::read_square_table;

/// Finite monoid as a dense multiplication table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinMonoid {
    n: usize,
    mul: Vec<usize>,
    one: usize,
}

impl FinMonoid {
    /// Builds a monoid from a row-major multiplication table, checking
    /// associativity and the identity law.
    pub fn new(n: usize, rows: &[Vec<usize>], one: usize) -> Result<Self, Error> {
        let mul = read_square_table(n, rows)?;
        if one >= n {
            return Err(Error::IndexOutOfRange { value: one, n });
        }
        let m = FinMonoid { n, mul, one };
        for a in 0..n {
            for b in 0..n {
                let ab = m.mul(a, b);
                for c in 0..n {
                    if m.mul(ab, c) != m.mul(a, m.mul(b, c)) {
                        return Err(Error::NotAssociative { a, b, c });
                    }
                }
            }
        }
        for a in 0..n {
            if m.mul(one, a) != a || m.mul(a, one) != a {
                return Err(Error::NotIdentity { one, witness: a });
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b]
    }

    /// Left-to-right product of a word; the empty word gives the identity.
    pub fn word_mul(&self, word: &[usize]) -> usize {
        word.iter().fold(self.one, |acc, &t| self.mul(acc, t))
    }

    /// Witness (a, b, c) with a*b = a*c and b != c, if one exists.
    pub fn left_cancellation_failure(&self) -> Option<(usize, usize, usize)> {
        for a in 0..self.n {
            for b in 0..self.n {
                for c in (b + 1)..self.n {
                    if self.mul(a, b) == self.mul(a, c) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }
}
