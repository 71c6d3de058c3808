mod common;

use ehresmann::congruence::{congruence_closure, Congruence};
use ehresmann::fixtures::sample;
use ehresmann::monoid::FinMonoid;
use ehresmann::poset::Poset;
use ehresmann::semilattice::{
    ideal_semilattice, semilattice_from_poset, subset_top, Semilattice,
};
use ehresmann::Error;
use proptest::prelude::*;

#[test]
fn chain_orders_by_position() {
    let c = sample::chain(4);
    assert_eq!(c.one(), 0);
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(c.meet(a, b), a.max(b));
            assert_eq!(c.leq(a, b), a >= b);
        }
    }
    assert!(c.lt(3, 0));
    assert!(!c.lt(2, 2));
}

#[test]
fn diamond_meets_incomparables_at_bottom() {
    let d = sample::diamond();
    assert_eq!(d.meet(1, 2), 3);
    assert!(!d.leq(1, 2));
    assert!(!d.leq(2, 1));
    assert!(d.leq(3, 1));
    assert!(d.leq(1, 0));
}

#[test]
fn semilattice_constructor_rejects_bad_tables() {
    // Not idempotent.
    let e = Semilattice::new(2, &[vec![1, 1], vec![1, 1]], 0);
    assert!(matches!(e, Err(Error::NotIdempotent { a: 0 })));

    // Not commutative.
    let e = Semilattice::new(2, &[vec![0, 0], vec![1, 1]], 0);
    assert!(matches!(e, Err(Error::NotCommutative { .. })));

    // Claimed identity is not one.
    let e = Semilattice::new(2, &[vec![0, 1], vec![1, 1]], 1);
    assert!(matches!(e, Err(Error::NotIdentity { .. })));

    // Ragged rows.
    let e = Semilattice::new(2, &[vec![0, 1], vec![1]], 0);
    assert!(matches!(e, Err(Error::RaggedTable { .. })));

    // Entry out of range.
    let e = Semilattice::new(2, &[vec![0, 2], vec![2, 1]], 0);
    assert!(matches!(e, Err(Error::EntryOutOfRange { .. })));
}

#[test]
fn subset_top_requires_meet_closure_and_a_top() {
    let d = sample::diamond();
    assert_eq!(subset_top(&d, &[0, 1, 2, 3]).unwrap(), 0);
    assert_eq!(subset_top(&d, &[1, 3]).unwrap(), 1);
    // 1 meet 2 = 3 escapes the subset.
    assert!(matches!(
        subset_top(&d, &[1, 2]),
        Err(Error::NotMeetClosed { .. })
    ));
    assert!(matches!(subset_top(&d, &[]), Err(Error::EmptySubset)));
    assert!(matches!(
        subset_top(&d, &[1, 1]),
        Err(Error::DuplicateInSubset { value: 1 })
    ));
    assert!(matches!(
        subset_top(&d, &[7]),
        Err(Error::IndexOutOfRange { .. })
    ));
}

#[test]
fn restrict_reindexes_and_keeps_meets() {
    let c = sample::chain(4);
    let r = c.restrict(&[1, 2, 3]).unwrap();
    assert_eq!(r.n(), 3);
    assert_eq!(r.one(), 0);
    assert_eq!(r.meet(0, 2), 2);

    // 1, 2, 3 in the diamond is meet closed but 1 and 2 are incomparable,
    // so the subset has no greatest element.
    let d = sample::diamond();
    assert!(matches!(d.restrict(&[1, 2, 3]), Err(Error::NoSubsetTop)));
}

#[test]
fn poset_constructor_validates_order_axioms() {
    let t = vec![vec![true, true], vec![false, true]];
    let p = Poset::new(2, &t).unwrap();
    assert!(p.leq(0, 1));
    assert!(!p.leq(1, 0));

    let e = Poset::new(2, &[vec![false, true], vec![false, true]]);
    assert!(matches!(e, Err(Error::NotReflexive { a: 0 })));

    let e = Poset::new(2, &[vec![true, true], vec![true, true]]);
    assert!(matches!(e, Err(Error::NotAntisymmetric { .. })));

    let e = Poset::new(
        3,
        &[
            vec![true, true, false],
            vec![false, true, true],
            vec![false, false, true],
        ],
    );
    assert!(matches!(e, Err(Error::NotTransitive { .. })));
}

#[test]
fn poset_ideals_of_small_shapes() {
    // Three-chain as a poset: 2 < 1 < 0.
    let p = sample::chain(3).to_poset();
    assert_eq!(p.top(), Some(0));
    assert_eq!(p.order_ideal(&[1]), vec![1, 2]);
    assert!(p.is_down_closed(&[1, 2]));
    assert!(!p.is_down_closed(&[0]));
    assert_eq!(p.all_order_ideals().len(), 4);

    // Two-element antichain.
    let a = Poset::new(2, &[vec![true, false], vec![false, true]]).unwrap();
    assert_eq!(a.top(), None);
    assert_eq!(a.all_order_ideals().len(), 4);

    let d = sample::diamond().to_poset();
    assert_eq!(d.all_order_ideals().len(), 6);
}

#[test]
fn linear_extension_lists_lower_elements_first() {
    let d = sample::diamond().to_poset();
    let ext = d.linear_extension();
    let pos = |v: usize| ext.iter().position(|&u| u == v).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            if d.lt(a, b) {
                assert!(pos(a) < pos(b));
            }
        }
    }
    assert_eq!(pos(3), 0, "the bottom precedes everything");
    assert_eq!(pos(0), 3, "the top comes last");
}

#[test]
fn semilattice_from_poset_round_trips_and_rejects_no_meet() {
    let d = sample::diamond();
    let rebuilt = semilattice_from_poset(&d.to_poset()).unwrap();
    for a in 0..4 {
        for b in 0..4 {
            assert_eq!(rebuilt.meet(a, b), d.meet(a, b));
        }
    }

    let antichain = Poset::new(2, &[vec![true, false], vec![false, true]]).unwrap();
    assert!(matches!(
        semilattice_from_poset(&antichain),
        Err(Error::NoTop)
    ));
}

#[test]
fn ideal_semilattice_is_intersection() {
    let antichain = Poset::new(2, &[vec![true, false], vec![false, true]]).unwrap();
    let (s, ideals) = ideal_semilattice(&antichain);
    assert_eq!(s.n(), 4);
    assert_eq!(ideals.len(), 4);
    let full = (0..4).find(|&i| ideals[i].len() == 2).unwrap();
    assert_eq!(s.one(), full);
    let empty = (0..4).find(|&i| ideals[i].is_empty()).unwrap();
    let only0 = (0..4).find(|&i| ideals[i] == vec![0]).unwrap();
    let only1 = (0..4).find(|&i| ideals[i] == vec![1]).unwrap();
    assert_eq!(s.meet(only0, only1), empty);
    assert_eq!(s.meet(only0, full), only0);
}

#[test]
fn monoid_validates_and_multiplies_words() {
    let z6 = sample::cyclic(6);
    assert_eq!(z6.word_mul(&[1, 2, 3]), 0);
    assert_eq!(z6.word_mul(&[]), 0);
    assert_eq!(z6.mul(4, 5), 3);

    let e = FinMonoid::new(2, &[vec![0, 1], vec![1, 0]], 1);
    assert!(matches!(e, Err(Error::NotIdentity { .. })));

    // xy := x is associative but has no two-sided identity at 0.
    let e = FinMonoid::new(2, &[vec![0, 0], vec![1, 1]], 0);
    assert!(matches!(e, Err(Error::NotIdentity { .. })));

    let e = FinMonoid::new(
        3,
        &[vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 1]],
        0,
    );
    assert!(matches!(e, Err(Error::NotAssociative { .. })));
}

#[test]
fn left_cancellation_detection() {
    assert!(sample::cyclic(4).left_cancellation_failure().is_none());
    assert!(sample::trivial_monoid().left_cancellation_failure().is_none());
    // t1 = t = tt, so t is not cancellable.
    let w = common::non_cancellative_monoid().left_cancellation_failure();
    let (a, b, c) = w.expect("idempotent pair is not left cancellative");
    let m = common::non_cancellative_monoid();
    assert_eq!(m.mul(a, b), m.mul(a, c));
    assert_ne!(b, c);
}

#[test]
fn congruence_closure_of_cyclic_pairs() {
    let z4 = sample::cyclic(4);
    let cong = congruence_closure(&z4, &[(0, 2)]);
    assert_eq!(cong.class_count(), 2);
    assert!(cong.related(1, 3));
    assert!(!cong.related(0, 1));
    assert!(cong.compatibility_failure(&z4).is_none());
    let q = cong.quotient(&z4).unwrap();
    assert_eq!(q.n(), 2);
    assert_eq!(q.mul(1, 1), 0);

    // Identifying a generator with the identity collapses everything.
    let z3 = sample::cyclic(3);
    let all = congruence_closure(&z3, &[(0, 1)]);
    assert_eq!(all.class_count(), 1);
}

#[test]
fn congruence_classes_partition_carrier() {
    let z6 = sample::cyclic(6);
    let cong = congruence_closure(&z6, &[(0, 3)]);
    let mut seen = vec![false; 6];
    for class in cong.classes() {
        for &x in class {
            assert!(!seen[x]);
            seen[x] = true;
            assert_eq!(cong.class_of(x), cong.class_of(class[0]));
        }
    }
    assert!(seen.iter().all(|&s| s));
    assert_eq!(cong.n(), 6);
}

fn random_dag_poset(n: usize, edges: &[bool]) -> Poset {
    // Edges i -> j only for i < j, then reflexive transitive closure.
    let mut leq = vec![vec![false; n]; n];
    for (i, row) in leq.iter_mut().enumerate() {
        row[i] = true;
    }
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            if edges[k % edges.len()] {
                leq[i][j] = true;
            }
            k += 1;
        }
    }
    for m in 0..n {
        for a in 0..n {
            for b in 0..n {
                if leq[a][m] && leq[m][b] {
                    leq[a][b] = true;
                }
            }
        }
    }
    Poset::new(n, &leq).expect("closure of a dag is a poset")
}

proptest! {
    #[test]
    fn prop_order_ideals_are_down_closed(
        n in 2usize..6,
        edges in proptest::collection::vec(any::<bool>(), 1..16),
        seeds in proptest::collection::vec(0usize..6, 0..3),
    ) {
        let p = random_dag_poset(n, &edges);
        let seeds: Vec<usize> = seeds.into_iter().filter(|&s| s < n).collect();
        let ideal = p.order_ideal(&seeds);
        prop_assert!(p.is_down_closed(&ideal));
        for s in seeds {
            prop_assert!(ideal.contains(&s));
        }
        for ideal in p.all_order_ideals() {
            prop_assert!(p.is_down_closed(&ideal));
        }
    }

    #[test]
    fn prop_linear_extension_sorts_below_before(
        n in 2usize..6,
        edges in proptest::collection::vec(any::<bool>(), 1..16),
    ) {
        let p = random_dag_poset(n, &edges);
        let ext = p.linear_extension();
        prop_assert_eq!(ext.len(), n);
        let pos: Vec<usize> = (0..n)
            .map(|v| ext.iter().position(|&u| u == v).unwrap())
            .collect();
        for a in 0..n {
            for b in 0..n {
                if p.lt(a, b) {
                    prop_assert!(pos[a] < pos[b]);
                }
            }
        }
    }

    #[test]
    fn prop_congruence_closure_contains_pairs_and_is_compatible(
        pairs in proptest::collection::vec((0usize..8, 0usize..8), 0..5),
    ) {
        let z8 = sample::cyclic(8);
        let cong: Congruence = congruence_closure(&z8, &pairs);
        for (a, b) in &pairs {
            prop_assert!(cong.related(*a, *b));
        }
        prop_assert!(cong.compatibility_failure(&z8).is_none());
        let q = cong.quotient(&z8).unwrap();
        prop_assert_eq!(q.n(), cong.class_count());
    }

    #[test]
    fn prop_ideal_semilattice_meets_by_intersection(
        n in 2usize..5,
        edges in proptest::collection::vec(any::<bool>(), 1..10),
    ) {
        let p = random_dag_poset(n, &edges);
        let (s, ideals) = ideal_semilattice(&p);
        prop_assert_eq!(s.n(), ideals.len());
        for a in 0..s.n() {
            for b in 0..s.n() {
                let cap: Vec<usize> = ideals[a]
                    .iter()
                    .copied()
                    .filter(|x| ideals[b].contains(x))
                    .collect();
                prop_assert_eq!(&ideals[s.meet(a, b)], &cap);
            }
        }
    }
}
