use chair_escher::escher::{place_curve, propagate, PerturbationAssignment};
use chair_escher::solver::Relation;
use chair_escher::{EdgeSymbol, PerturbedCurve, RelationSystem, Rotation};
use proptest::prelude::*;

fn arb_symbol() -> impl Strategy<Value = EdgeSymbol> {
    (0usize..16).prop_map(|id| EdgeSymbol::from_id(id).unwrap())
}

fn arb_relation() -> impl Strategy<Value = Relation> {
    (arb_symbol(), arb_symbol(), any::<bool>())
        .prop_map(|(x, y, m)| if m { Relation::Match(x, y) } else { Relation::Equal(x, y) })
}

fn arb_curve() -> impl Strategy<Value = PerturbedCurve> {
    proptest::collection::vec(-0.3f64..=0.3, 0..12).prop_map(|us| {
        let n = us.len();
        PerturbedCurve::new(us.into_iter().enumerate().map(|(k, u)| ((k + 1) as f64 / (n + 1) as f64, u)).collect())
            .unwrap()
    })
}

fn build(rels: &[Relation]) -> RelationSystem {
    let mut s = RelationSystem::new(16);
    for &r in rels {
        s.add(r);
    }
    s
}

proptest! {
    #[test]
    fn closure_is_order_independent(
        (rels, shuffled) in proptest::collection::vec(arb_relation(), 0..24)
            .prop_flat_map(|v| (Just(v.clone()), Just(v).prop_shuffle()))
    ) {
        let a = build(&rels);
        let b = build(&shuffled);
        prop_assert!(a.same_closure(&b));
        prop_assert_eq!(a.presentation(), b.presentation());
        for &r in &rels {
            prop_assert!(a.implies(r));
        }
    }

    #[test]
    fn matching_is_symmetric_and_functional(x in arb_symbol(), y in arb_symbol(), z in arb_symbol()) {
        let mut s = RelationSystem::new(16);
        s.add_match(x, y);
        prop_assert!(s.implies(Relation::Match(y, x)));
        s.add_match(x, z);
        prop_assert!(s.implies(Relation::Equal(y, z)));
    }

    #[test]
    fn curve_dual_is_an_involution(c in arb_curve()) {
        let back = c.dual().dual();
        for (p, q) in c.samples().iter().zip(back.samples()) {
            prop_assert!((p.0 - q.0).abs() <= 1e-12 && (p.1 - q.1).abs() <= 1e-12);
        }
        prop_assert!(c.abuts(&c.dual(), 1e-12));
    }

    #[test]
    fn placed_dual_on_reversed_segment_coincides(c in arb_curve(), q in 0u8..4, tx in -8i64..8, ty in -8i64..8) {
        let rot = Rotation::from_quarter_turns(q);
        let shift = |p: (f64, f64)| {
            let (x, y) = rot.apply_f64(p);
            (x + tx as f64, y + ty as f64)
        };
        let (a, b) = (shift((1.0, 1.0)), shift((2.0, 1.0)));
        let fwd = place_curve(a, b, &c);
        let rev: Vec<_> = place_curve(b, a, &c.dual()).into_iter().rev().collect();
        for (p, r) in fwd.iter().zip(&rev) {
            prop_assert!((p.0 - r.0).abs() <= 1e-12 && (p.1 - r.1).abs() <= 1e-12);
        }
        // transforming the placed curve equals placing it on the transformed segment
        let unrotated: Vec<_> = place_curve((1.0, 1.0), (2.0, 1.0), &c).into_iter().map(shift).collect();
        for (p, r) in fwd.iter().zip(&unrotated) {
            prop_assert!((p.0 - r.0).abs() <= 1e-12 && (p.1 - r.1).abs() <= 1e-12);
        }
    }

    #[test]
    fn distinct_class_curves_give_distinct_edges(c1 in arb_curve(), c2 in arb_curve()) {
        let sol = chair_escher::solver::solve_two_rule(5, 10).unwrap();
        let mut p1 = PerturbationAssignment::straight(2);
        let mut p2 = PerturbationAssignment::straight(2);
        p1.curves.insert(1, c1.clone());
        p2.curves.insert(1, c2.clone());
        let e1 = propagate(&sol.system, &p1).unwrap();
        let e2 = propagate(&sol.system, &p2).unwrap();
        let b = EdgeSymbol::from_letter('b').unwrap().id();
        prop_assert_eq!(e1[b] == e2[b], c1 == c2);
    }
}

#[test]
fn empty_system_degree_is_universe_size() {
    assert_eq!(RelationSystem::new(8).escher_degree(), 8);
    assert_eq!(RelationSystem::new(16).escher_degree(), 16);
}
