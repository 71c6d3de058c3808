use std::collections::HashMap;

use crate::actions::{
    order_preserving_failure, strong_failure, ActionTable, PartialActionTable,
};
use crate::dsu::Dsu;
use crate::error::Error;
use crate::poset::Poset;
use crate::report::{Check, GlobalisationReport};
use crate::semilattice::{ideal_semilattice, Semilattice};

/// Quotient of the pairs (t, e) of a strong, order-preserving partial action
/// under the relation generated by identifying (mn, e) with (m, n.e)
/// whenever n.e is defined, together with the induced order structure.
///
/// The preorder compares (t, e) with (t, f) when e <= f; its symmetric part
/// is collapsed so that the quotient carries a genuine partial order.
#[derive(Debug, Clone)]
pub struct SigmaQuotient {
    pa: PartialActionTable,
    sigma_class: Vec<usize>,
    sigma_count: usize,
    sigma_leq: Vec<bool>,
    tau_of_sigma: Vec<usize>,
    poset: Poset,
    members: Vec<Vec<(usize, usize)>>,
    diamond: Vec<usize>,
}

impl SigmaQuotient {
    pub fn partial_action(&self) -> &PartialActionTable {
        &self.pa
    }

    pub fn sigma_count(&self) -> usize {
        self.sigma_count
    }

    pub fn sigma_class(&self, t: usize, e: usize) -> usize {
        self.sigma_class[t * self.pa.space().n() + e]
    }

    pub fn sigma_leq(&self, c: usize, d: usize) -> bool {
        self.sigma_leq[c * self.sigma_count + d]
    }

    pub fn tau_count(&self) -> usize {
        self.poset.n()
    }

    pub fn tau_of_sigma(&self, c: usize) -> usize {
        self.tau_of_sigma[c]
    }

    pub fn tau_class(&self, t: usize, e: usize) -> usize {
        self.tau_of_sigma[self.sigma_class(t, e)]
    }

    /// Order on the collapsed classes.
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Member pairs of each collapsed class, sorted.
    pub fn members(&self) -> &[Vec<(usize, usize)>] {
        &self.members
    }

    /// Translation m applied to a collapsed class: the class of (m t, e)
    /// for any member (t, e).
    pub fn diamond(&self, m: usize, c: usize) -> usize {
        self.diamond[m * self.tau_count() + c]
    }
}

/// Builds the quotient. Errors if the partial action is not strong or not
/// order-preserving; those are preconditions, not verification outcomes.
pub fn build_sigma(pa: &PartialActionTable) -> Result<SigmaQuotient, Error> {
    if let Some((s, t, x)) = strong_failure(pa) {
        return Err(Error::NotStrong { s, t, x });
    }
    if let Some((t, x, y)) = order_preserving_failure(pa) {
        return Err(Error::NotOrderPreserving { t, x, y });
    }
    let (nt, ny) = (pa.monoid().n(), pa.space().n());
    let idx = |t: usize, e: usize| t * ny + e;

    let mut dsu = Dsu::new(nt * ny);
    for m in 0..nt {
        for n in 0..nt {
            for e in 0..ny {
                if let Some(ne) = pa.act(n, e) {
                    dsu.union(idx(pa.monoid().mul(m, n), e), idx(m, ne));
                }
            }
        }
    }
    let (sigma_class, k) = dsu.compress();

    let mut leq = vec![false; k * k];
    for c in 0..k {
        leq[c * k + c] = true;
    }
    for t in 0..nt {
        for e in 0..ny {
            for f in 0..ny {
                if pa.space().leq(e, f) {
                    leq[sigma_class[idx(t, e)] * k + sigma_class[idx(t, f)]] = true;
                }
            }
        }
    }
    for mid in 0..k {
        for a in 0..k {
            if leq[a * k + mid] {
                for b in 0..k {
                    if leq[mid * k + b] {
                        leq[a * k + b] = true;
                    }
                }
            }
        }
    }

    let mut collapse = Dsu::new(k);
    for a in 0..k {
        for b in (a + 1)..k {
            if leq[a * k + b] && leq[b * k + a] {
                collapse.union(a, b);
            }
        }
    }
    let (tau_of_sigma, tk) = collapse.compress();

    let mut rows = vec![vec![false; tk]; tk];
    for a in 0..k {
        for b in 0..k {
            if leq[a * k + b] {
                rows[tau_of_sigma[a]][tau_of_sigma[b]] = true;
            }
        }
    }
    let poset = Poset::new(tk, &rows).map_err(|e| Error::Internal {
        detail: format!("collapsed preorder is not a partial order: {e}"),
    })?;

    let mut members = vec![Vec::new(); tk];
    for t in 0..nt {
        for e in 0..ny {
            members[tau_of_sigma[sigma_class[idx(t, e)]]].push((t, e));
        }
    }
    for v in &mut members {
        v.sort_unstable();
    }

    let mut diamond = vec![0usize; nt * tk];
    for m in 0..nt {
        for (c, mem) in members.iter().enumerate() {
            let (t, e) = mem[0];
            diamond[m * tk + c] = tau_of_sigma[sigma_class[idx(pa.monoid().mul(m, t), e)]];
        }
    }

    let sq = SigmaQuotient {
        pa: pa.clone(),
        sigma_class,
        sigma_count: k,
        sigma_leq: leq,
        tau_of_sigma,
        poset,
        members,
        diamond,
    };

    // Cheap re-assertions of facts the construction is supposed to force.
    let one = sq.pa.monoid().one();
    for e in 0..ny {
        for f in (e + 1)..ny {
            if sq.sigma_class(one, e) == sq.sigma_class(one, f) {
                return Err(Error::Internal {
                    detail: format!("distinct points {e}, {f} collapsed in the quotient"),
                });
            }
        }
    }
    for t in 0..nt {
        for e in 0..ny {
            if let Some(v) = sq.pa.act(t, e) {
                if sq.sigma_class(t, e) != sq.sigma_class(one, v) {
                    return Err(Error::Internal {
                        detail: format!("({t},{e}) not identified with (1,{v})"),
                    });
                }
            }
        }
    }
    Ok(sq)
}

/// A strong order-preserving partial action globalized: the ideal
/// semilattice of the collapsed quotient, the point embedding `kappa`, and
/// the total action `bullet` on ideals.
#[derive(Debug, Clone)]
pub struct GlobalizedAction {
    pub sq: SigmaQuotient,
    /// Order ideals of the quotient poset, in canonical order.
    pub ideals: Vec<Vec<usize>>,
    /// Semilattice of those ideals under intersection.
    pub big: Semilattice,
    /// Point embedding: e maps to the principal ideal of the class of (1, e).
    pub kappa: Vec<usize>,
    /// Total action of the monoid on the ideal semilattice.
    pub bullet: ActionTable,
}

impl GlobalizedAction {
    fn ideal_index(&self) -> HashMap<&[usize], usize> {
        self.ideals
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_slice(), i))
            .collect()
    }

    /// Index of the principal ideal generated by one quotient class.
    pub fn principal(&self, c: usize) -> usize {
        let ideal = self.sq.poset().order_ideal(&[c]);
        *self
            .ideal_index()
            .get(ideal.as_slice())
            .expect("principal ideals are ideals")
    }
}

/// Globalizes a strong, order-preserving partial action.
///
/// The action on an ideal is computed definitionally: translate every member
/// class and take the downward closure. The principal-ideal shortcut
/// m . (t,e)-ideal = (mt,e)-ideal is cross-checked afterwards.
pub fn globalize(pa: &PartialActionTable) -> Result<GlobalizedAction, Error> {
    let sq = build_sigma(pa)?;
    let (big, ideals) = ideal_semilattice(sq.poset());
    let index: HashMap<&[usize], usize> = ideals
        .iter()
        .enumerate()
        .map(|(i, v)| (v.as_slice(), i))
        .collect();
    let nt = pa.monoid().n();

    let mut rows = vec![vec![0usize; big.n()]; nt];
    for m in 0..nt {
        for (i, ideal) in ideals.iter().enumerate() {
            let img: Vec<usize> = ideal.iter().map(|&c| sq.diamond(m, c)).collect();
            let closed = sq.poset().order_ideal(&img);
            rows[m][i] = *index.get(closed.as_slice()).ok_or_else(|| Error::Internal {
                detail: "closure of a translated ideal is not an ideal".into(),
            })?;
        }
    }
    let bullet = ActionTable::new(pa.monoid().clone(), big.clone(), &rows)?;

    let one = pa.monoid().one();
    let kappa: Vec<usize> = (0..pa.space().n())
        .map(|e| {
            let ideal = sq.poset().order_ideal(&[sq.tau_class(one, e)]);
            index[ideal.as_slice()]
        })
        .collect();

    let ga = GlobalizedAction {
        sq,
        ideals,
        big,
        kappa,
        bullet,
    };

    for m in 0..nt {
        for t in 0..nt {
            for e in 0..pa.space().n() {
                let lhs = ga.bullet.act(m, ga.principal(ga.sq.tau_class(t, e)));
                let rhs = ga.principal(ga.sq.tau_class(pa.monoid().mul(m, t), e));
                if lhs != rhs {
                    return Err(Error::Internal {
                        detail: format!(
                            "principal shortcut disagrees with the definitional action at m={m} t={t} e={e}"
                        ),
                    });
                }
            }
        }
    }
    Ok(ga)
}

/// Re-verifies every structural fact the globalization is supposed to have,
/// from scratch, against the stored tables. Returns a named check per fact.
pub fn verify_globalisation(ga: &GlobalizedAction) -> GlobalisationReport {
    let sq = &ga.sq;
    let pa = sq.partial_action();
    let (nt, ny) = (pa.monoid().n(), pa.space().n());
    let one = pa.monoid().one();
    let y = pa.space();
    let k = sq.sigma_count();
    let mut checks = Vec::new();

    // Values are constant on each sigma class, definedness included.
    {
        let mut witness = None;
        let mut anchors: Vec<Option<(usize, usize)>> = vec![None; k];
        'outer: for t in 0..nt {
            for e in 0..ny {
                let c = sq.sigma_class(t, e);
                match anchors[c] {
                    None => anchors[c] = Some((t, e)),
                    Some((s, f)) => {
                        if pa.act(t, e) != pa.act(s, f) {
                            witness =
                                Some(format!("({t},{e}) vs ({s},{f}) in one class"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "sigma-respects-values",
            witness,
            (nt * ny) as u64,
        ));
    }

    // e -> [1, e] is injective.
    {
        let mut witness = None;
        'outer: for e in 0..ny {
            for f in (e + 1)..ny {
                if sq.sigma_class(one, e) == sq.sigma_class(one, f) {
                    witness = Some(format!("e={e} f={f}"));
                    break 'outer;
                }
            }
        }
        checks.push(Check::from_witness(
            "sigma-embeds-points",
            witness,
            (ny * ny) as u64,
        ));
    }

    // m * [t, e] = [mt, e] does not depend on the representative.
    {
        let mut witness = None;
        let mut anchor: Vec<Option<(usize, usize)>> = vec![None; k];
        'outer: for t in 0..nt {
            for e in 0..ny {
                let c = sq.sigma_class(t, e);
                match anchor[c] {
                    None => anchor[c] = Some((t, e)),
                    Some((s, f)) => {
                        for m in 0..nt {
                            if sq.sigma_class(pa.monoid().mul(m, t), e)
                                != sq.sigma_class(pa.monoid().mul(m, s), f)
                            {
                                witness = Some(format!("m={m} on ({t},{e}) vs ({s},{f})"));
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "sigma-translation-well-defined",
            witness,
            (nt * nt * ny) as u64,
        ));
    }

    // t.e is defined iff [t, e] meets the embedded points, with value t.e.
    {
        let mut witness = None;
        'outer: for t in 0..nt {
            for e in 0..ny {
                match pa.act(t, e) {
                    Some(v) => {
                        if sq.sigma_class(t, e) != sq.sigma_class(one, v) {
                            witness = Some(format!("t={t} e={e}: class differs from (1,{v})"));
                            break 'outer;
                        }
                    }
                    None => {
                        if (0..ny).any(|f| sq.sigma_class(t, e) == sq.sigma_class(one, f)) {
                            witness =
                                Some(format!("t={t} e={e}: undefined yet meets a point class"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "sigma-globalisation-law",
            witness,
            (nt * ny) as u64,
        ));
    }

    // Translation preserves the preorder on sigma classes.
    {
        let mut anchor: Vec<(usize, usize)> = vec![(0, 0); k];
        let mut seen = vec![false; k];
        for t in 0..nt {
            for e in 0..ny {
                let c = sq.sigma_class(t, e);
                if !seen[c] {
                    seen[c] = true;
                    anchor[c] = (t, e);
                }
            }
        }
        let star = |m: usize, c: usize| {
            let (t, e) = anchor[c];
            sq.sigma_class(pa.monoid().mul(m, t), e)
        };
        let mut witness = None;
        'outer: for c in 0..k {
            for d in 0..k {
                if !sq.sigma_leq(c, d) {
                    continue;
                }
                for m in 0..nt {
                    if !sq.sigma_leq(star(m, c), star(m, d)) {
                        witness = Some(format!("m={m} c={c} d={d}"));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "sigma-preorder-translation",
            witness,
            (k * k * nt) as u64,
        ));

        // [s, g] <= [1, e] exactly when s.g is defined and below e.
        let mut witness = None;
        'outer: for s in 0..nt {
            for g in 0..ny {
                for e in 0..ny {
                    let below = sq.sigma_leq(sq.sigma_class(s, g), sq.sigma_class(one, e));
                    let expect = matches!(pa.act(s, g), Some(v) if y.leq(v, e));
                    if below != expect {
                        witness = Some(format!("s={s} g={g} e={e}"));
                        break 'outer;
                    }
                    if below {
                        let v = pa.act(s, g).unwrap();
                        if sq.sigma_class(s, g) != sq.sigma_class(one, v) {
                            witness = Some(format!("s={s} g={g}: not the class of (1,{v})"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "sigma-below-point-principal",
            witness,
            (nt * ny * ny) as u64,
        ));
    }

    // [1, f] <= [1, e] exactly when f <= e.
    {
        let mut witness = None;
        'outer: for e in 0..ny {
            for f in 0..ny {
                if sq.sigma_leq(sq.sigma_class(one, f), sq.sigma_class(one, e)) != y.leq(f, e) {
                    witness = Some(format!("e={e} f={f}"));
                    break 'outer;
                }
            }
        }
        checks.push(Check::from_witness(
            "sigma-point-order-reflects",
            witness,
            (ny * ny) as u64,
        ));
    }

    // (t, e) = (1, f) in the collapsed quotient exactly when t.e = f.
    {
        let mut witness = None;
        'outer: for t in 0..nt {
            for e in 0..ny {
                for f in 0..ny {
                    let same = sq.tau_class(t, e) == sq.tau_class(one, f);
                    if same != (pa.act(t, e) == Some(f)) {
                        witness = Some(format!("t={t} e={e} f={f}"));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "tau-point-identification",
            witness,
            (nt * ny * ny) as u64,
        ));
    }

    // (s, g) <= (1, e) in the collapsed order exactly when s.g <= e.
    {
        let mut witness = None;
        'outer: for s in 0..nt {
            for g in 0..ny {
                for e in 0..ny {
                    let below = sq.poset().leq(sq.tau_class(s, g), sq.tau_class(one, e));
                    let expect = matches!(pa.act(s, g), Some(v) if y.leq(v, e));
                    if below != expect {
                        witness = Some(format!("s={s} g={g} e={e}"));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "tau-below-point-principal",
            witness,
            (nt * ny * ny) as u64,
        ));
    }

    // The embedded points form an order ideal of the collapsed quotient.
    {
        let mut image: Vec<usize> = (0..ny).map(|e| sq.tau_class(one, e)).collect();
        image.sort_unstable();
        image.dedup();
        let witness = if sq.poset().is_down_closed(&image) {
            None
        } else {
            Some("point image is not downward closed".to_string())
        };
        checks.push(Check::from_witness(
            "tau-point-image-down-closed",
            witness,
            ny as u64,
        ));
    }

    // (1, e) <= (1, f) exactly when e <= f.
    {
        let mut witness = None;
        'outer: for e in 0..ny {
            for f in 0..ny {
                if sq.poset().leq(sq.tau_class(one, e), sq.tau_class(one, f)) != y.leq(e, f) {
                    witness = Some(format!("e={e} f={f}"));
                    break 'outer;
                }
            }
        }
        checks.push(Check::from_witness(
            "tau-point-order-embedding",
            witness,
            (ny * ny) as u64,
        ));
    }

    // The stored translation table agrees with every member, not only the
    // representative it was built from.
    {
        let mut witness = None;
        'outer: for (c, mem) in sq.members().iter().enumerate() {
            for &(t, e) in mem {
                for m in 0..nt {
                    if sq.diamond(m, c) != sq.tau_class(pa.monoid().mul(m, t), e) {
                        witness = Some(format!("m={m} class={c} member=({t},{e})"));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "diamond-well-defined",
            witness,
            (nt * nt * ny) as u64,
        ));
    }

    // kappa is an injective meet-embedding into the ideal semilattice.
    {
        let mut witness = None;
        'outer: for e in 0..ny {
            for f in 0..ny {
                if ga.big.meet(ga.kappa[e], ga.kappa[f]) != ga.kappa[y.meet(e, f)] {
                    witness = Some(format!("e={e} f={f}"));
                    break 'outer;
                }
                if e != f && ga.kappa[e] == ga.kappa[f] {
                    witness = Some(format!("kappa collapses e={e} f={f}"));
                    break 'outer;
                }
            }
        }
        checks.push(Check::from_witness(
            "kappa-meet-embedding",
            witness,
            (ny * ny) as u64,
        ));
    }

    // Stored bullet table equals the definitional translate-and-close action.
    {
        let index = ga.ideal_index();
        let mut witness = None;
        'outer: for m in 0..nt {
            for (i, ideal) in ga.ideals.iter().enumerate() {
                let img: Vec<usize> = ideal.iter().map(|&c| sq.diamond(m, c)).collect();
                let closed = sq.poset().order_ideal(&img);
                let want = index[closed.as_slice()];
                if ga.bullet.act(m, i) != want {
                    witness = Some(format!("m={m} ideal={i}"));
                    break 'outer;
                }
            }
        }
        checks.push(Check::from_witness(
            "bullet-matches-definition",
            witness,
            (nt * ga.ideals.len()) as u64,
        ));
    }

    // Bullet is a total order-preserving action.
    {
        let nb = ga.big.n();
        let mut witness = None;
        for i in 0..nb {
            if ga.bullet.act(one, i) != i {
                witness = Some(format!("unit moves ideal {i}"));
                break;
            }
        }
        if witness.is_none() {
            'outer: for m in 0..nt {
                for n in 0..nt {
                    for i in 0..nb {
                        if ga.bullet.act(pa.monoid().mul(m, n), i)
                            != ga.bullet.act(m, ga.bullet.act(n, i))
                        {
                            witness = Some(format!("m={m} n={n} ideal={i}"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        if witness.is_none() {
            'outer: for m in 0..nt {
                for i in 0..nb {
                    for j in 0..nb {
                        if ga.big.leq(i, j)
                            && !ga.big.leq(ga.bullet.act(m, i), ga.bullet.act(m, j))
                        {
                            witness = Some(format!("m={m} ideals {i} <= {j}"));
                            break 'outer;
                        }
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "bullet-action-laws",
            witness,
            (nt * nt * nb + nt * nb * nb) as u64,
        ));
    }

    // m . principal(t,e) = principal(mt,e).
    {
        let mut witness = None;
        'outer: for m in 0..nt {
            for t in 0..nt {
                for e in 0..ny {
                    let lhs = ga.bullet.act(m, ga.principal(sq.tau_class(t, e)));
                    let rhs = ga.principal(sq.tau_class(pa.monoid().mul(m, t), e));
                    if lhs != rhs {
                        witness = Some(format!("m={m} t={t} e={e}"));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "bullet-principal-formula",
            witness,
            (nt * nt * ny) as u64,
        ));
    }

    // t.e is defined iff bullet sends kappa(e) into the point image, and
    // then the value matches.
    {
        let mut witness = None;
        'outer: for t in 0..nt {
            for e in 0..ny {
                let out = ga.bullet.act(t, ga.kappa[e]);
                let hit = (0..ny).find(|&f| ga.kappa[f] == out);
                match (pa.act(t, e), hit) {
                    (Some(v), Some(f)) if v == f => {}
                    (None, None) => {}
                    _ => {
                        witness = Some(format!("t={t} e={e}"));
                        break 'outer;
                    }
                }
            }
        }
        checks.push(Check::from_witness(
            "globalisation-law",
            witness,
            (nt * ny) as u64,
        ));
    }

    let pass = checks.iter().all(|c| c.pass);
    GlobalisationReport {
        sigma_classes: sq.sigma_count(),
        tau_classes: sq.tau_count(),
        ideal_count: ga.ideals.len(),
        checks,
        pass,
    }
}
