//! Exhaustive classification of two-rule tilings `(i, j)` and of mixed
//! one-rule patterns.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::oracle_relations_one_rule;
use crate::solver::{is_admissible_pair, solve_one_rule, solve_two_rule, RelationSystem};

pub type Pair = (u8, u8);

/// Patterns whose one-rule result is stated in the literature this crate
/// reproduces; other patterns are computed but unchecked.
pub const REFERENCE_ONE_RULE_PATTERNS: [u8; 5] = [2, 3, 4, 5, 8];

pub fn admissible_pairs() -> Vec<Pair> {
    (0..16u8).flat_map(|i| (0..16u8).map(move |j| (i, j))).filter(|&(i, j)| is_admissible_pair(i, j)).collect()
}

/// Exchanging the roles of alpha and beta.
pub fn complement_pair((i, j): Pair) -> Pair {
    (15 - j, 15 - i)
}

fn orbit(p: Pair) -> BTreeSet<Pair> {
    let mut seen = BTreeSet::from([p]);
    let mut stack = vec![p];
    while let Some(q) = stack.pop() {
        let mut images = vec![complement_pair(q)];
        if q.0 + q.1 == 15 {
            images.push((q.1, q.0));
        }
        for r in images {
            if seen.insert(r) {
                stack.push(r);
            }
        }
    }
    seen
}

/// Quotient of `pairs` by the alpha/beta exchange and, on anti-diagonal
/// pairs, by `(i, 15-i) ~ (15-i, i)`. Each class is sorted; classes are
/// ordered by their least member.
pub fn equivalence_classes(pairs: &[Pair]) -> Vec<Vec<Pair>> {
    let universe: BTreeSet<Pair> = pairs.iter().copied().collect();
    let mut done = BTreeSet::new();
    let mut classes = Vec::new();
    for &p in &universe {
        if done.contains(&p) {
            continue;
        }
        let class: Vec<Pair> = orbit(p).into_iter().filter(|q| universe.contains(q)).collect();
        done.extend(class.iter().copied());
        classes.push(class);
    }
    classes
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRow {
    pub representative: Pair,
    pub members: Vec<Pair>,
    pub degree: usize,
    pub collapse: bool,
    pub iterations: u32,
    pub presentation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTable {
    pub rows: Vec<CaseRow>,
}

impl CaseTable {
    pub fn nontrivial(&self) -> impl Iterator<Item = &CaseRow> {
        self.rows.iter().filter(|r| r.degree > 1)
    }

    pub fn row_containing(&self, p: Pair) -> Option<&CaseRow> {
        self.rows.iter().find(|r| r.members.contains(&p))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serialises")
    }

    pub fn to_table(&self) -> String {
        let fmt_pair = |p: &Pair| format!("({},{})", p.0, p.1);
        let members: Vec<String> =
            self.rows.iter().map(|r| r.members.iter().map(fmt_pair).collect::<Vec<_>>().join(" ")).collect();
        let width = members.iter().map(String::len).max().unwrap_or(0).max("members".len());
        let mut out = format!(
            "{:<8} {:<width$} {:>6} {:>8} {:>5}  presentation\n",
            "rep", "members", "degree", "collapse", "iter"
        );
        for (r, m) in self.rows.iter().zip(&members) {
            let _ = writeln!(
                out,
                "{:<8} {:<width$} {:>6} {:>8} {:>5}  {}",
                fmt_pair(&r.representative),
                m,
                r.degree,
                r.collapse,
                r.iterations,
                r.presentation
            );
        }
        out
    }
}

/// Solves one representative of every equivalence class.
pub fn classify_all() -> Result<CaseTable> {
    let rows = equivalence_classes(&admissible_pairs())
        .into_iter()
        .map(|members| {
            let representative = members[0];
            let sol = solve_two_rule(representative.0, representative.1)?;
            Ok(CaseRow {
                representative,
                members,
                degree: sol.degree(),
                collapse: sol.collapse(),
                iterations: sol.iterations,
                presentation: sol.system.presentation(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CaseTable { rows })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OneRuleRow {
    pub pattern: u8,
    pub degree: usize,
    pub presentation: String,
    /// Whether the pattern is one of [`REFERENCE_ONE_RULE_PATTERNS`].
    pub verified_by_reference: bool,
    /// Whether the geometric oracle (spreads up to level 4) agrees.
    pub oracle_agrees: bool,
}

pub fn classify_one_rule() -> Result<Vec<OneRuleRow>> {
    (1..15u8)
        .map(|pattern| {
            let sol = solve_one_rule(pattern)?;
            let mut oracle = RelationSystem::new(16);
            for (x, y) in oracle_relations_one_rule(pattern, 4)? {
                oracle.add_match(x, y);
            }
            Ok(OneRuleRow {
                pattern,
                degree: sol.degree(),
                presentation: sol.system.presentation(),
                verified_by_reference: REFERENCE_ONE_RULE_PATTERNS.contains(&pattern),
                oracle_agrees: oracle.same_closure(&sol.system),
            })
        })
        .collect()
}

pub fn one_rule_table(rows: &[OneRuleRow]) -> String {
    let mut out = format!("{:<8} {:>6} {:<10} {:<7}  presentation\n", "pattern", "degree", "reference", "oracle");
    for r in rows {
        let _ = writeln!(
            out,
            "{:<8} {:>6} {:<10} {:<7}  {}",
            format!("no.{}", r.pattern),
            r.degree,
            if r.verified_by_reference { "yes" } else { "unverified" },
            if r.oracle_agrees { "agrees" } else { "DIFFERS" },
            r.presentation
        );
    }
    out
}
