//! Exit criteria. Each criterion prints one PASS/FAIL line; the binary exits
//! non-zero if any fails.

use std::collections::BTreeSet;

use chair_escher::classify::{admissible_pairs, classify_all, equivalence_classes, Pair};
use chair_escher::escher::{consistency_check, render, PerturbationAssignment};
use chair_escher::geometry::{
    compose_spread, decomposition_strings, extract_boundary_decomposition, extract_matchings, generate_spread,
    oracle_relations,
};
use chair_escher::solver::{solve_one_rule, solve_single, solve_two_rule};
use chair_escher::{split_match, EdgeSymbol, EdgeTerm, Prototile, RelationSystem, Solution, SubstitutionRule, Word};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sym(c: char) -> EdgeSymbol {
    EdgeSymbol::from_letter(c).unwrap()
}

/// Builds a system from fraction notation: each entry is `x=y=.. / u=v=..`
/// (or a single side). Equalities within a side, matching across.
fn system_from(universe: usize, fractions: &[&str]) -> RelationSystem {
    let mut s = RelationSystem::new(universe);
    for f in fractions {
        let sides: Vec<Vec<EdgeSymbol>> = f
            .split('/')
            .map(|side| side.trim().split('=').map(|c| sym(c.trim().chars().next().unwrap())).collect())
            .collect();
        for side in &sides {
            for w in side.windows(2) {
                s.add_equal(w[0], w[1]);
            }
        }
        if sides.len() == 2 {
            s.add_match(sides[0][0], sides[1][0]);
        }
    }
    s
}

fn same_partition(sol: &Solution, expected: &RelationSystem) -> Check {
    ensure(sol.system.same_closure(expected), || {
        format!("got {:?}, expected {:?}", sol.system.presentation(), expected.presentation())
    })
}

fn single_degree() -> Check {
    let sol = solve_single().map_err(|e| e.to_string())?;
    ensure(sol.degree() == 1, || format!("degree {}", sol.degree()))?;
    same_partition(&sol, &system_from(8, &["a=c=e=g / b=d=f=h"]))
}

fn one_rule_degrees() -> Check {
    for (pattern, degree) in [(2, 1), (3, 1), (4, 1), (5, 2), (8, 4)] {
        let sol = solve_one_rule(pattern).map_err(|e| e.to_string())?;
        ensure(sol.degree() == degree, || format!("no.{pattern}: degree {} != {degree}", sol.degree()))?;
    }
    same_partition(&solve_one_rule(5).unwrap(), &system_from(16, &["a=e=m / b=f=n", "c=g=i=k=o / d=h=j=l=p"]))?;
    same_partition(&solve_one_rule(8).unwrap(), &system_from(16, &["a / l=n=p", "k=m=o / b", "c=g / d=h", "e=i / f=j"]))
}

fn pair_counts() -> Check {
    let pairs = admissible_pairs();
    ensure(pairs.len() == 238, || format!("{} admissible pairs", pairs.len()))?;
    let classes = equivalence_classes(&pairs);
    ensure(classes.len() == 119, || format!("{} classes", classes.len()))
}

fn two_rule_classification() -> Check {
    let table = classify_all().map_err(|e| e.to_string())?;
    let expected: [(&[Pair], usize, &[&str]); 4] = [
        (&[(5, 10), (10, 5)], 2, &["a=c=g=m / f=j=l=p", "e=i=k=o / b=d=h=n"]),
        (&[(0, 2), (13, 15)], 5, &["a=c=e=g=i=k / b=d=f=h=j=p"]),
        (&[(0, 8), (7, 15)], 3, &["a=c=e=g=k=m=o / b=d=f=h=l=n=p"]),
        (&[(0, 10), (5, 15)], 3, &["a=c=e=g=k=o / b=d=f=h=l=p", "m / j", "i / n"]),
    ];
    let nontrivial: Vec<_> = table.nontrivial().collect();
    ensure(nontrivial.len() == 4, || format!("{} nontrivial classes", nontrivial.len()))?;
    for (members, degree, fractions) in expected {
        let row = table.row_containing(members[0]).ok_or("missing row")?;
        let got: BTreeSet<Pair> = row.members.iter().copied().collect();
        ensure(got == members.iter().copied().collect(), || format!("members {:?}", row.members))?;
        ensure(row.degree == degree, || format!("{:?}: degree {}", row.representative, row.degree))?;
        let sol = solve_two_rule(row.representative.0, row.representative.1).unwrap();
        same_partition(&sol, &system_from(16, fractions))?;
    }
    let trivial = table.rows.iter().filter(|r| r.degree == 1).count();
    ensure(trivial == 115, || format!("{trivial} classes of degree 1"))
}

fn one_j_collapse() -> Check {
    for j in (0..16).filter(|&j| j != 1) {
        let sol = solve_two_rule(1, j).map_err(|e| e.to_string())?;
        ensure(sol.iterations <= 4 && sol.collapse() && sol.degree() == 1, || {
            format!("(1,{j}): iterations {} collapse {} degree {}", sol.iterations, sol.collapse(), sol.degree())
        })?;
    }
    Ok(())
}

fn oracle_equivalence() -> Check {
    for class in equivalence_classes(&admissible_pairs()) {
        let (i, j) = class[0];
        let rule = SubstitutionRule::pair(i, j).unwrap();
        let mut oracle = RelationSystem::new(16);
        for target in [Prototile::Alpha, Prototile::Beta] {
            for (x, y) in oracle_relations(&rule, target, 4).map_err(|e| e.to_string())? {
                oracle.add_match(x, y);
            }
        }
        let sol = solve_two_rule(i, j).unwrap();
        ensure(oracle.same_closure(&sol.system), || {
            format!("({i},{j}): oracle {} vs solver {}", oracle.presentation(), sol.system.presentation())
        })?;
    }
    Ok(())
}

fn pairs_of(list: &[&str]) -> Vec<(EdgeSymbol, EdgeSymbol)> {
    let mut v: Vec<_> = list
        .iter()
        .map(|s| {
            let mut c = s.chars();
            let (x, y) = (sym(c.next().unwrap()), sym(c.next().unwrap()));
            (x.min(y), x.max(y))
        })
        .collect();
    v.sort();
    v
}

fn matchings_of(pattern: u8, target: Prototile) -> Vec<(EdgeSymbol, EdgeSymbol)> {
    let mut v: Vec<_> = extract_matchings(&compose_spread(pattern, target))
        .unwrap()
        .into_iter()
        .map(|(x, y)| (x.min(y), x.max(y)))
        .collect();
    v.sort();
    v
}

fn geometry_calibration() -> Check {
    let m0 = matchings_of(0, Prototile::Alpha);
    ensure(m0 == pairs_of(&["bc", "ad", "hc", "be", "fa", "hc", "gb", "ha"]), || {
        format!("pattern 0 matchings {m0:?}")
    })?;
    let mut sys = RelationSystem::new(8);
    for &(x, y) in &m0 {
        sys.add_match(x, y);
    }
    ensure(sys.same_closure(&system_from(8, &["a=c=e=g / b=d=f=h"])), || sys.presentation())?;

    let dec = |p, t| decomposition_strings(t, &extract_boundary_decomposition(&compose_spread(p, t)).unwrap());
    let d0 = dec(0, Prototile::Alpha);
    ensure(d0 == ["a'=ha", "b'=bc", "c'=de", "d'=fg", "e'=de", "f'=fg", "g'=de", "h'=fg"], || format!("{d0:?}"))?;

    let ma = matchings_of(5, Prototile::Alpha);
    ensure(ma == pairs_of(&["jc", "id", "pc", "be", "fa", "hk", "gj", "hi"]), || format!("(a) {ma:?}"))?;
    let mb = matchings_of(10, Prototile::Beta);
    ensure(mb == pairs_of(&["bk", "al", "hk", "jm", "ni", "pc", "ob", "pa"]), || format!("(b) {mb:?}"))?;

    let mut d = dec(5, Prototile::Alpha);
    d.extend(dec(10, Prototile::Beta));
    let expected = [
        "a'=pa", "b'=bk", "c'=lm", "d'=no", "e'=de", "f'=fg", "g'=lm", "h'=no", "i'=hi", "j'=jc", "k'=de", "l'=fg",
        "m'=lm", "n'=no", "o'=de", "p'=fg",
    ];
    ensure(d == expected, || format!("{d:?}"))
}

fn spread_equivalence() -> Check {
    let sorted = |rule: &SubstitutionRule, t, s| {
        let mut v = generate_spread(rule, t, s).unwrap().placements;
        v.sort();
        v
    };
    for i in 0..16u8 {
        let r1 = SubstitutionRule::pair(i, 15 - i).unwrap();
        let r2 = SubstitutionRule::pair(15 - i, i).unwrap();
        for s in 1..=3 {
            let (a, b) =
                if s % 2 == 1 { (Prototile::Beta, Prototile::Alpha) } else { (Prototile::Alpha, Prototile::Beta) };
            ensure(sorted(&r1, Prototile::Alpha, s) == sorted(&r2, a, s), || format!("i={i} s={s} alpha"))?;
            ensure(sorted(&r1, Prototile::Beta, s) == sorted(&r2, b, s), || format!("i={i} s={s} beta"))?;
        }
    }
    Ok(())
}

fn beta_singleton() -> Check {
    for (i, j) in [(0, 2), (0, 8)] {
        let rule = SubstitutionRule::pair(i, j).unwrap();
        for s in 1..=3 {
            let sp = generate_spread(&rule, Prototile::Beta, s).unwrap();
            let betas = sp.placements.iter().filter(|p| p.label == Prototile::Beta).count();
            ensure(betas == 1, || format!("({i},{j}) s={s}: {betas} beta tiles"))?;
        }
    }
    Ok(())
}

fn renderer() -> Check {
    let systems: Vec<(&str, Solution)> = vec![
        ("single", solve_single().unwrap()),
        ("no.5", solve_one_rule(5).unwrap()),
        ("no.8", solve_one_rule(8).unwrap()),
        ("(5,10)", solve_two_rule(5, 10).unwrap()),
        ("(0,2)", solve_two_rule(0, 2).unwrap()),
        ("(0,8)", solve_two_rule(0, 8).unwrap()),
        ("(0,10)", solve_two_rule(0, 10).unwrap()),
    ];
    for (name, sol) in &systems {
        let straight = PerturbationAssignment::straight(sol.degree());
        for target in [Prototile::Alpha, Prototile::Beta] {
            let rt = render(sol, target, 3, &straight).map_err(|e| format!("{name}: {e}"))?;
            for tile in &rt.tiles {
                for (k, edge) in tile.edges.iter().enumerate() {
                    let (a, b) = tile.placement.edge_segment(k);
                    let exact =
                        edge.len() == 2 && edge[0] == (a.x as f64, a.y as f64) && edge[1] == (b.x as f64, b.y as f64);
                    ensure(exact, || format!("{name}: straight render differs from the chair tiling"))?;
                }
            }
            ensure(consistency_check(&rt), || format!("{name}: straight render inconsistent"))?;
        }
        for seed in 0..100u64 {
            let params = PerturbationAssignment::random(&sol.system, seed, 0.3);
            let target = if seed % 2 == 0 { Prototile::Alpha } else { Prototile::Beta };
            let rt = render(sol, target, 3, &params).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            ensure(consistency_check(&rt), || format!("{name} seed {seed}: inconsistent"))?;
        }
    }
    Ok(())
}

fn arb_term() -> impl Strategy<Value = EdgeTerm> {
    (0usize..16, any::<bool>(), any::<bool>()).prop_map(|(id, mirrored, inverted)| EdgeTerm {
        symbol: EdgeSymbol::from_id(id).unwrap(),
        mirrored,
        inverted,
    })
}

fn arb_word() -> impl Strategy<Value = Word> {
    proptest::collection::vec(arb_term(), 1..=8).prop_map(|t| Word::new(t).unwrap())
}

fn algebra_laws() -> Check {
    let mut runner = TestRunner::new(Config { cases: 10_000, failure_persistence: None, ..Config::default() });
    runner
        .run(&(arb_word(), arb_word()), |(w1, w2)| {
            prop_assert_eq!(w1.mirror().mirror(), w1.clone());
            prop_assert_eq!(w1.invert().invert(), w1.clone());
            prop_assert_eq!(w1.dual().dual(), w1.clone());
            prop_assert_eq!(w1.concat(&w2).mirror(), w1.mirror().concat(&w2.mirror()));
            prop_assert_eq!(w1.concat(&w2).invert(), w2.invert().concat(&w1.invert()));
            prop_assert_eq!(w1.invert().mirror(), w1.mirror().invert());
            prop_assert_eq!(w1.concat(&w2).dual(), w2.dual().concat(&w1.dual()));

            // pairs from split_match hold termwise iff the words match
            let candidate = w2.dual();
            let pairs = split_match(&candidate, &w2).unwrap();
            prop_assert!(pairs.iter().all(|(x, y)| *x == y.dual()));
            let lefts = Word::new(pairs.iter().map(|p| p.0).collect()).unwrap();
            let rights = Word::new(pairs.iter().rev().map(|p| p.1).collect()).unwrap();
            prop_assert_eq!(lefts, candidate);
            prop_assert_eq!(rights, w2.clone());
            if w1.len() == w2.len() {
                let termwise = split_match(&w1, &w2).unwrap().iter().all(|(x, y)| *x == y.dual());
                prop_assert_eq!(termwise, w1 == w2.dual());
            } else {
                prop_assert!(split_match(&w1, &w2).is_err());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        ("AC1  single prototile has degree 1", single_degree),
        ("AC2  one-rule degrees and partitions", one_rule_degrees),
        ("AC3  238 admissible pairs in 119 classes", pair_counts),
        ("AC4  nontrivial two-rule classification", two_rule_classification),
        ("AC5  (1,j) collapse within 4 iterations", one_j_collapse),
        ("AC6  oracle equivalence for all 119 classes (s <= 4)", oracle_equivalence),
        ("AC7  geometry calibration strings", geometry_calibration),
        ("AC8  spread equivalence for (i,15-i) and (15-i,i)", spread_equivalence),
        ("AC9  single beta tile in (0,2) and (0,8) beta spreads", beta_singleton),
        ("AC10 renderer consistency, 100 draws x 7 systems at s=3", renderer),
        ("AC11 algebra laws over 10^4 random words", algebra_laws),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS  {name}"),
            Err(e) => {
                failed += 1;
                println!("FAIL  {name}: {e}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
