use crate::error::Error;
use crate::monoid::FinMonoid;
use crate::report::Check;
use crate::semilattice::{subset_top, Semilattice};

/// Total left action of a monoid on a semilattice by order-preserving maps.
///
/// Stored row-major: `act[t * |X| + x]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionTable {
    m: FinMonoid,
    x: Semilattice,
    act: Vec<usize>,
}

impl ActionTable {
    /// Validates the unit law, the composition law and order preservation.
    pub fn new(m: FinMonoid, x: Semilattice, rows: &[Vec<usize>]) -> Result<Self, Error> {
        let (nt, nx) = (m.n(), x.n());
        if rows.len() != nt {
            return Err(Error::WrongRowCount {
                want: nt,
                got: rows.len(),
            });
        }
        let mut act = Vec::with_capacity(nt * nx);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != nx {
                return Err(Error::RaggedTable {
                    row: i,
                    want: nx,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= nx {
                    return Err(Error::EntryOutOfRange {
                        row: i,
                        col: j,
                        value: v,
                        n: nx,
                    });
                }
                act.push(v);
            }
        }
        let a = ActionTable { m, x, act };
        for e in 0..nx {
            if a.act(a.m.one(), e) != e {
                return Err(Error::ActionUnit { x: e });
            }
        }
        for s in 0..nt {
            for t in 0..nt {
                for e in 0..nx {
                    if a.act(s, a.act(t, e)) != a.act(a.m.mul(s, t), e) {
                        return Err(Error::ActionComposition { s, t, x: e });
                    }
                }
            }
        }
        for t in 0..nt {
            for e in 0..nx {
                for f in 0..nx {
                    if a.x.leq(e, f) && !a.x.leq(a.act(t, e), a.act(t, f)) {
                        return Err(Error::NotOrderPreserving { t, x: e, y: f });
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn monoid(&self) -> &FinMonoid {
        &self.m
    }

    pub fn space(&self) -> &Semilattice {
        &self.x
    }

    pub fn act(&self, t: usize, e: usize) -> usize {
        self.act[t * self.x.n() + e]
    }

    pub fn as_partial(&self) -> PartialActionTable {
        let rows: Vec<Vec<Option<usize>>> = (0..self.m.n())
            .map(|t| (0..self.x.n()).map(|e| Some(self.act(t, e))).collect())
            .collect();
        PartialActionTable::new(self.m.clone(), self.x.clone(), &rows)
            .expect("a total action is a partial action")
    }

    /// Overwrites one entry without re-validating. Fault-injection support
    /// for checker tests; never use this to build real data.
    #[doc(hidden)]
    pub fn set_entry_unchecked(&mut self, t: usize, e: usize, v: usize) {
        let nx = self.x.n();
        self.act[t * nx + e] = v;
    }
}

/// Partial left action: `act[t][x]` is the image or None when undefined.
///
/// Construction enforces only the defining laws of a partial action:
/// the unit acts everywhere as the identity, and whenever t.x and s.(t.x)
/// are defined, (st).x is defined and equal. Strongness, fullness and
/// order preservation are separate checks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialActionTable {
    m: FinMonoid,
    x: Semilattice,
    act: Vec<Option<usize>>,
}

impl PartialActionTable {
    pub fn new(m: FinMonoid, x: Semilattice, rows: &[Vec<Option<usize>>]) -> Result<Self, Error> {
        let (nt, nx) = (m.n(), x.n());
        if rows.len() != nt {
            return Err(Error::WrongRowCount {
                want: nt,
                got: rows.len(),
            });
        }
        let mut act = Vec::with_capacity(nt * nx);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != nx {
                return Err(Error::RaggedTable {
                    row: i,
                    want: nx,
                    got: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if let Some(v) = v {
                    if v >= nx {
                        return Err(Error::EntryOutOfRange {
                            row: i,
                            col: j,
                            value: v,
                            n: nx,
                        });
                    }
                }
                act.push(v);
            }
        }
        let a = PartialActionTable { m, x, act };
        for e in 0..nx {
            if a.act(a.m.one(), e) != Some(e) {
                return Err(Error::PartialUnit { x: e });
            }
        }
        for s in 0..nt {
            for t in 0..nt {
                for e in 0..nx {
                    if let Some(te) = a.act(t, e) {
                        if let Some(ste) = a.act(s, te) {
                            if a.act(a.m.mul(s, t), e) != Some(ste) {
                                return Err(Error::PartialComposition { s, t, x: e });
                            }
                        }
                    }
                }
            }
        }
        Ok(a)
    }

    pub fn monoid(&self) -> &FinMonoid {
        &self.m
    }

    pub fn space(&self) -> &Semilattice {
        &self.x
    }

    pub fn act(&self, t: usize, e: usize) -> Option<usize> {
        self.act[t * self.x.n() + e]
    }

    pub fn is_total(&self) -> bool {
        self.act.iter().all(|v| v.is_some())
    }

    #[doc(hidden)]
    pub fn set_entry_unchecked(&mut self, t: usize, e: usize, v: Option<usize>) {
        let nx = self.x.n();
        self.act[t * nx + e] = v;
    }
}

/// Witness (s, t, x) with t.x and (st).x defined but s.(t.x) undefined.
pub fn strong_failure(pa: &PartialActionTable) -> Option<(usize, usize, usize)> {
    let (nt, nx) = (pa.monoid().n(), pa.space().n());
    for s in 0..nt {
        for t in 0..nt {
            for e in 0..nx {
                if let Some(te) = pa.act(t, e) {
                    if pa.act(pa.monoid().mul(s, t), e).is_some() && pa.act(s, te).is_none() {
                        return Some((s, t, e));
                    }
                }
            }
        }
    }
    None
}

/// Witness t acting nowhere, if any.
pub fn full_failure(pa: &PartialActionTable) -> Option<usize> {
    let (nt, nx) = (pa.monoid().n(), pa.space().n());
    (0..nt).find(|&t| (0..nx).all(|e| pa.act(t, e).is_none()))
}

/// Witness (t, x, y) breaking order preservation: x <= y, t.y defined, but
/// t.x undefined or not below t.y.
pub fn order_preserving_failure(pa: &PartialActionTable) -> Option<(usize, usize, usize)> {
    let (nt, nx) = (pa.monoid().n(), pa.space().n());
    for t in 0..nt {
        for x in 0..nx {
            for y in 0..nx {
                if !pa.space().leq(x, y) {
                    continue;
                }
                if let Some(ty) = pa.act(t, y) {
                    match pa.act(t, x) {
                        Some(tx) if pa.space().leq(tx, ty) => {}
                        _ => return Some((t, x, y)),
                    }
                }
            }
        }
    }
    None
}

pub fn check_strong(pa: &PartialActionTable) -> Check {
    let cases = (pa.monoid().n() * pa.monoid().n() * pa.space().n()) as u64;
    Check::from_witness(
        "strong",
        strong_failure(pa).map(|(s, t, x)| format!("s={s} t={t} x={x}")),
        cases,
    )
}

pub fn check_full(pa: &PartialActionTable) -> Check {
    Check::from_witness(
        "full",
        full_failure(pa).map(|t| format!("t={t} acts nowhere")),
        pa.monoid().n() as u64,
    )
}

pub fn check_order_preserving(pa: &PartialActionTable) -> Check {
    let cases = (pa.monoid().n() * pa.space().n() * pa.space().n()) as u64;
    Check::from_witness(
        "order-preserving",
        order_preserving_failure(pa).map(|(t, x, y)| format!("t={t} x={x} y={y}")),
        cases,
    )
}

/// Downward-closure and reachability conditions for a subsemilattice `y`
/// of the acted-on space:
///
/// (A) if e <= f in y and t.f lands in y, then t.e lands in y;
/// (B) every t maps at least one element of y into y.
///
/// `y` must be sorted, meet-closed and have a greatest element of its own.
pub fn check_conditions_ab(a: &ActionTable, y: &[usize]) -> Result<(Check, Check), Error> {
    subset_top(a.space(), y)?;
    let in_y = |v: usize| y.binary_search(&v).is_ok();
    let nt = a.monoid().n();
    let mut cond_a = None;
    'outer: for t in 0..nt {
        for &e in y {
            for &f in y {
                if a.space().leq(e, f) && in_y(a.act(t, f)) && !in_y(a.act(t, e)) {
                    cond_a = Some(format!("t={t} e={e} f={f}"));
                    break 'outer;
                }
            }
        }
    }
    let cond_b = (0..nt)
        .find(|&t| !y.iter().any(|&g| in_y(a.act(t, g))))
        .map(|t| format!("t={t}"));
    let cases_a = (nt * y.len() * y.len()) as u64;
    Ok((
        Check::from_witness("condition-a", cond_a, cases_a),
        Check::from_witness("condition-b", cond_b, (nt * y.len()) as u64),
    ))
}

/// Restricts a total action to a subsemilattice: t.y is kept exactly when
/// it lands inside the subset. The result is always a strong partial action.
pub fn restrict_action(a: &ActionTable, y: &[usize]) -> Result<PartialActionTable, Error> {
    subset_top(a.space(), y)?;
    let sub = a.space().restrict(y)?;
    let pos = |v: usize| y.binary_search(&v).ok();
    let rows: Vec<Vec<Option<usize>>> = (0..a.monoid().n())
        .map(|t| y.iter().map(|&e| pos(a.act(t, e))).collect())
        .collect();
    let pa = PartialActionTable::new(a.monoid().clone(), sub, &rows)?;
    debug_assert!(strong_failure(&pa).is_none());
    Ok(pa)
}
