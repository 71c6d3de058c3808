use crate::dsu::Dsu;
use crate::error::Error;
use crate::monoid::FinMonoid;

/// Partition of a monoid's elements into congruence classes.
///
/// Classes are labelled 0..k in order of least member, so labels are
/// canonical for a given partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruence {
    class_of: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl Congruence {
    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, a: usize) -> usize {
        self.class_of[a]
    }

    pub fn related(&self, a: usize, b: usize) -> bool {
        self.class_of[a] == self.class_of[b]
    }

    /// Members of each class, sorted.
    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    fn from_labels(class_of: Vec<usize>, k: usize) -> Self {
        let mut classes = vec![Vec::new(); k];
        for (x, &c) in class_of.iter().enumerate() {
            classes[c].push(x);
        }
        Congruence { class_of, classes }
    }

    /// Witness that the partition fails compatibility with `m`, if any:
    /// (a, b, c) with a ~ b but ca !~ cb or ac !~ bc.
    pub fn compatibility_failure(&self, m: &FinMonoid) -> Option<(usize, usize, usize)> {
        for a in 0..m.n() {
            for b in 0..m.n() {
                if !self.related(a, b) {
                    continue;
                }
                for c in 0..m.n() {
                    if !self.related(m.mul(c, a), m.mul(c, b))
                        || !self.related(m.mul(a, c), m.mul(b, c))
                    {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// Quotient monoid on class labels, plus nothing else: the label map is
    /// already `class_of`.
    pub fn quotient(&self, m: &FinMonoid) -> Result<FinMonoid, Error> {
        if let Some((a, b, c)) = self.compatibility_failure(m) {
            return Err(Error::Internal {
                detail: format!(
                    "partition is not a congruence: {a} ~ {b} breaks at c={c}"
                ),
            });
        }
        let k = self.class_count();
        let mut rows = vec![vec![0usize; k]; k];
        for (ca, members_a) in self.classes.iter().enumerate() {
            for (cb, members_b) in self.classes.iter().enumerate() {
                rows[ca][cb] = self.class_of[m.mul(members_a[0], members_b[0])];
            }
        }
        FinMonoid::new(k, &rows, self.class_of[m.one()])
    }
}

/// Least monoid congruence containing the given pairs.
///
/// Worklist closure: whenever two elements merge, their left and right
/// translates by every element are merged too.
pub fn congruence_closure(m: &FinMonoid, pairs: &[(usize, usize)]) -> Congruence {
    let n = m.n();
    let mut dsu = Dsu::new(n);
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in pairs {
        if dsu.union(a, b) {
            queue.push((a, b));
        }
    }
    while let Some((a, b)) = queue.pop() {
        for c in 0..n {
            for (x, y) in [(m.mul(c, a), m.mul(c, b)), (m.mul(a, c), m.mul(b, c))] {
                if dsu.union(x, y) {
                    queue.push((x, y));
                }
            }
        }
    }
    let (labels, k) = dsu.compress();
    Congruence::from_labels(labels, k)
}
