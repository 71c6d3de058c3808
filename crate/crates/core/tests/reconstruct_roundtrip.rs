mod common;

use ehresmann::actions::restrict_action;
use ehresmann::fixtures::{build_subset_expansion, sample};
use ehresmann::laws::{AtomSet, Mode, PlUniverse, QlUniverse};
use ehresmann::pl::PlContext;
use ehresmann::ql::QlContext;
use ehresmann::reconstruct::{
    induce_partial_action, projection_lattice, quotient_t, rebuild_and_theta, rebuild_from,
};

fn aperiodic_universe() -> QlUniverse {
    let q = QlContext::new(PlContext::new(sample::aperiodic_on_chain3()), &[0, 2]).unwrap();
    QlUniverse::new(q, 4, "aperiodic-sub")
}

#[test]
fn quotient_collapses_to_the_acting_monoid() {
    let u = PlUniverse::new(PlContext::new(common::f1()), 4, "idem-pair");
    let q = quotient_t(&u).unwrap();
    assert_eq!(q.monoid().n(), 2);
    // The non-identity class squares to itself: it is the idempotent t.
    let t = 1 - q.monoid().one();
    assert_eq!(q.monoid().mul(t, t), t);

    let b = build_subset_expansion(&sample::cyclic(2)).unwrap();
    let q = quotient_t(&b).unwrap();
    assert_eq!(q.monoid().n(), 2);
    let g = 1 - q.monoid().one();
    assert_eq!(q.monoid().mul(g, g), q.monoid().one(), "order two survives");

    let u = aperiodic_universe();
    let q = quotient_t(&u).unwrap();
    assert_eq!(q.monoid().n(), 3);
}

#[test]
fn projection_lattice_collects_the_plus_images() {
    let u = PlUniverse::new(PlContext::new(common::f1()), 4, "idem-pair");
    let pl = projection_lattice(&u).unwrap();
    assert_eq!(pl.lattice().n(), 2);
    let ctx = u.ctx();
    let top = pl.index_of(&ctx.identity()).unwrap();
    let bot = pl.index_of(&ctx.projection(1)).unwrap();
    assert_eq!(pl.lattice().one(), top);
    assert_eq!(pl.lattice().meet(top, bot), bot);

    let u = aperiodic_universe();
    let pl = projection_lattice(&u).unwrap();
    assert_eq!(pl.lattice().n(), 2, "projections are the two members of y");
}

/// The induced partial action of the quotient on the projections must
/// reproduce the restriction the submonoid was built from.
#[test]
fn induced_action_recovers_the_original_restriction() {
    let u = aperiodic_universe();
    let h = u.atom_set();
    let ipa = induce_partial_action(&u, &h).unwrap();

    let reference = restrict_action(&sample::aperiodic_on_chain3(), &[0, 2]).unwrap();
    assert_eq!(ipa.pa.monoid().n(), reference.monoid().n());
    assert_eq!(ipa.pa.space().n(), reference.space().n());

    // Identify classes and lattice points through canonical witnesses.
    let ctx = u.qctx().pl();
    let cls = |t: usize| {
        ipa.quotient
            .class_of(&u, &ctx.monoid_elem(t))
            .expect("letter class")
    };
    let pt = |e: usize| ipa.lattice.index_of(&ctx.projection(e)).unwrap();
    // x is undefined on the top, fixes the bottom; x^2 crushes both.
    assert_eq!(ipa.pa.act(cls(1), pt(0)), None);
    assert_eq!(ipa.pa.act(cls(1), pt(2)), Some(pt(2)));
    assert_eq!(ipa.pa.act(cls(2), pt(0)), Some(pt(2)));
    assert_eq!(ipa.pa.act(cls(2), pt(2)), Some(pt(2)));
    assert_eq!(ipa.pa.act(cls(0), pt(0)), Some(pt(0)));
}

#[test]
fn full_rebuild_of_the_restricted_aperiodic_monoid() {
    let u = aperiodic_universe();
    let h = u.atom_set();
    let report = rebuild_and_theta(&u, &h, 4, &Mode::Exhaustive).unwrap();
    assert!(report.pass, "{:?}", report.checks);
    assert_eq!(report.t_size, 3);
    assert_eq!(report.e_size, 2);
    assert_eq!(report.atom_count, 5);
    assert_eq!(report.element_count, 5);
    assert_eq!(report.tau_classes, 3);
    assert_eq!(report.ideal_count, 5);
    assert_eq!(report.theta_atoms.len(), 5);

    for law in [
        "theta-injective-on-atoms",
        "theta-onto-qatoms",
        "canonical-unique-up-to-bound",
        "theta-respects-canonical-form",
        "theta-matches-bounded-members",
        "theta-multiplicative",
        "globalisation-verified",
    ] {
        let c = report
            .checks
            .iter()
            .find(|c| c.law == law)
            .unwrap_or_else(|| panic!("missing check {law}"));
        assert!(c.pass, "{law}: {:?}", c.witness);
    }
}

#[test]
fn full_rebuild_of_a_whole_normal_form_monoid() {
    let u = PlUniverse::new(PlContext::new(common::f1()), 4, "idem-pair");
    let h = u.atom_set();
    let report = rebuild_and_theta(&u, &h, 4, &Mode::Exhaustive).unwrap();
    assert!(report.pass, "{:?}", report.checks);
    assert_eq!(report.t_size, 2);
    assert_eq!(report.e_size, 2);
    assert_eq!(report.atom_count, 4);
    assert_eq!(report.element_count, 4);
    assert_eq!(report.tau_classes, 2);
    assert_eq!(report.ideal_count, 3);
}

#[test]
fn rebuild_of_a_projection_only_monoid() {
    // Trivial acting monoid: the whole structure is its semilattice and
    // the quotient has a single class.
    let a = ehresmann::actions::ActionTable::new(
        sample::trivial_monoid(),
        sample::chain(3),
        &[vec![0, 1, 2]],
    )
    .unwrap();
    let u = PlUniverse::new(PlContext::new(a), 4, "chain-only");
    let h = u.atom_set();
    let report = rebuild_and_theta(&u, &h, 4, &Mode::Exhaustive).unwrap();
    assert!(report.pass, "{:?}", report.checks);
    assert_eq!(report.t_size, 1);
    assert_eq!(report.e_size, 3);
    assert_eq!(report.element_count, 3);
}

#[test]
fn rebuild_of_the_diamond_restriction() {
    let q = QlContext::new(PlContext::new(sample::idem_pair_on_diamond()), &[0, 1, 3]).unwrap();
    let u = QlUniverse::new(q, 4, "diamond-sub");
    let h = u.atom_set();
    let report = rebuild_and_theta(&u, &h, 4, &Mode::Exhaustive).unwrap();
    assert!(report.pass, "{:?}", report.checks);
    assert_eq!(report.atom_count, 6);
    assert_eq!(report.element_count, 10);
}

/// Proper but without unique canonical forms: reconstruction must report
/// the uniqueness failure instead of pretending the round trip works.
#[test]
fn rebuild_detects_missing_uniqueness() {
    let b = build_subset_expansion(&sample::cyclic(2)).unwrap();
    let h: AtomSet<usize> = AtomSet::closed((0..8).collect());
    let report = rebuild_and_theta(&b, &h, 3, &Mode::Exhaustive).unwrap();
    assert!(!report.pass);
    let c = report
        .checks
        .iter()
        .find(|c| c.law == "canonical-unique-up-to-bound")
        .expect("uniqueness check must run");
    assert!(!c.pass);
}

#[test]
fn corrupted_induced_action_is_caught() {
    let u = aperiodic_universe();
    let h = u.atom_set();
    let mut ipa = induce_partial_action(&u, &h).unwrap();
    let clean = rebuild_from(&u, &h, &ipa, 4, &Mode::Exhaustive).unwrap();
    assert!(clean.pass);

    // Plant one wrong value: the class of x gains an action on the top.
    let ctx = u.qctx().pl();
    let cx = ipa.quotient.class_of(&u, &ctx.monoid_elem(1)).unwrap();
    let top = ipa.lattice.index_of(&ctx.identity()).unwrap();
    assert_eq!(ipa.pa.act(cx, top), None);
    ipa.pa.set_entry_unchecked(cx, top, Some(top));
    match rebuild_from(&u, &h, &ipa, 4, &Mode::Exhaustive) {
        Ok(report) => assert!(!report.pass, "corruption must fail verification"),
        Err(_) => {} // rejected outright is caught too
    }
}
