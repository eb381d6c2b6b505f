//! Parity union-find over edge symbols and the closure procedures that turn
//! substitution geometry into a solved relation system.
//!
//! Every link carries a parity bit: `false` for `x = y`, `true` for `x / y`
//! (x matches y, i.e. x is the dual of y). Parities compose by XOR along a
//! path, so one structure holds both kinds of relation. Roots are always the
//! least symbol of their class, which keeps output canonical.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::edge::{split_equal, split_match, EdgeSymbol, Prototile, Word};
use crate::error::{Error, Result};
use crate::geometry::{compose_spread, extract_boundary_decomposition, extract_matchings, SubstitutionRule};

/// Upper bound on lifting rounds in two-rule mode.
pub const MAX_ITERATIONS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal(EdgeSymbol, EdgeSymbol),
    Match(EdgeSymbol, EdgeSymbol),
}

impl Relation {
    pub fn symbols(self) -> (EdgeSymbol, EdgeSymbol) {
        match self {
            Relation::Equal(x, y) | Relation::Match(x, y) => (x, y),
        }
    }

    pub fn is_match(self) -> bool {
        matches!(self, Relation::Match(..))
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Equal(x, y) => write!(f, "{x}={y}"),
            Relation::Match(x, y) => write!(f, "{x}/{y}"),
        }
    }
}

/// One equivalence class: `same` members equal the root, `dual` members
/// match it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub same: Vec<EdgeSymbol>,
    pub dual: Vec<EdgeSymbol>,
    pub self_dual: bool,
}

impl EdgeClass {
    pub fn root(&self) -> EdgeSymbol {
        self.same[0]
    }

    pub fn members(&self) -> impl Iterator<Item = EdgeSymbol> + '_ {
        self.same.iter().chain(&self.dual).copied()
    }
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[EdgeSymbol]| v.iter().map(|s| s.letter().to_string()).collect::<Vec<_>>().join("=");
        f.write_str(&join(&self.same))?;
        if !self.dual.is_empty() {
            write!(f, " / {}", join(&self.dual))?;
        }
        if self.self_dual {
            f.write_str(" (self-dual)")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationSystem {
    parent: Vec<usize>,
    // parity of the link to `parent`
    parity: Vec<bool>,
    self_dual: Vec<bool>,
}

impl RelationSystem {
    /// A system over the first `universe` symbols (8: alpha only, 16: both).
    pub fn new(universe: usize) -> Self {
        assert!(universe == 8 || universe == 16, "universe must hold 8 or 16 symbols");
        RelationSystem {
            parent: (0..universe).collect(),
            parity: vec![false; universe],
            self_dual: vec![false; universe],
        }
    }

    pub fn universe(&self) -> usize {
        self.parent.len()
    }

    pub fn symbols(&self) -> impl Iterator<Item = EdgeSymbol> {
        EdgeSymbol::universe(self.universe())
    }

    fn find_id(&self, mut x: usize) -> (usize, bool) {
        let mut parity = false;
        while self.parent[x] != x {
            parity ^= self.parity[x];
            x = self.parent[x];
        }
        (x, parity)
    }

    /// Root of `x` and the parity of `x` relative to it.
    pub fn find(&self, x: EdgeSymbol) -> (EdgeSymbol, bool) {
        let (r, p) = self.find_id(x.id());
        (EdgeSymbol::from_id(r).expect("root in universe"), p)
    }

    fn union(&mut self, x: EdgeSymbol, y: EdgeSymbol, dual: bool) -> bool {
        assert!(x.id() < self.universe() && y.id() < self.universe(), "symbol outside universe");
        let (rx, px) = self.find_id(x.id());
        let (ry, py) = self.find_id(y.id());
        if rx == ry {
            if px ^ py != dual && !self.self_dual[rx] {
                self.self_dual[rx] = true;
                return true;
            }
            return false;
        }
        let (root, child) = if rx < ry { (rx, ry) } else { (ry, rx) };
        self.parent[child] = root;
        self.parity[child] = px ^ py ^ dual;
        self.self_dual[root] |= self.self_dual[child];
        true
    }

    /// Records `x = y`. Returns whether anything changed.
    pub fn add_equal(&mut self, x: EdgeSymbol, y: EdgeSymbol) -> bool {
        self.union(x, y, false)
    }

    /// Records `x / y`. Returns whether anything changed.
    pub fn add_match(&mut self, x: EdgeSymbol, y: EdgeSymbol) -> bool {
        self.union(x, y, true)
    }

    pub fn add(&mut self, r: Relation) -> bool {
        match r {
            Relation::Equal(x, y) => self.add_equal(x, y),
            Relation::Match(x, y) => self.add_match(x, y),
        }
    }

    /// `Some(false)` if `x = y` holds, `Some(true)` if `x / y`, `None` if unrelated.
    pub fn relation(&self, x: EdgeSymbol, y: EdgeSymbol) -> Option<bool> {
        let (rx, px) = self.find_id(x.id());
        let (ry, py) = self.find_id(y.id());
        (rx == ry).then_some(px ^ py)
    }

    pub fn implies(&self, r: Relation) -> bool {
        let (x, y) = r.symbols();
        match self.relation(x, y) {
            None => false,
            Some(p) => p == r.is_match() || self.self_dual[self.find_id(x.id()).0],
        }
    }

    /// Generators of the system: each non-root symbol related to its root,
    /// plus `r / r` for self-dual roots.
    pub fn generators(&self) -> Vec<Relation> {
        let mut out = Vec::new();
        for x in self.symbols() {
            let (r, p) = self.find(x);
            if r != x {
                out.push(if p { Relation::Match(r, x) } else { Relation::Equal(r, x) });
            } else if self.self_dual[x.id()] {
                out.push(Relation::Match(x, x));
            }
        }
        out
    }

    pub fn classes(&self) -> Vec<EdgeClass> {
        let mut classes: Vec<EdgeClass> = Vec::new();
        for x in self.symbols() {
            let (r, p) = self.find(x);
            if r == x {
                classes.push(EdgeClass { same: vec![x], dual: vec![], self_dual: self.self_dual[x.id()] });
            } else {
                let class = classes.iter_mut().find(|c| c.root() == r).expect("root precedes members");
                // in a self-dual class every member is also its own dual
                if p && !class.self_dual {
                    class.dual.push(x);
                } else {
                    class.same.push(x);
                }
            }
        }
        classes
    }

    /// Index of the class containing `x` in [`classes`](Self::classes) order.
    pub fn class_index(&self, x: EdgeSymbol) -> usize {
        let root = self.find(x).0;
        self.symbols().filter(|s| self.find(*s).0 == *s).position(|s| s == root).expect("root listed")
    }

    /// Number of free perturbation parameters: one per class.
    pub fn escher_degree(&self) -> usize {
        self.symbols().filter(|s| self.find(*s).0 == *s).count()
    }

    pub fn has_self_dual_class(&self) -> bool {
        self.symbols().any(|s| self.find(s).0 == s && self.self_dual[s.id()])
    }

    /// Canonical text: classes by least symbol, `same / dual`, `; ` separated.
    pub fn presentation(&self) -> String {
        self.classes().iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
    }

    /// Whether every alpha edge equals the corresponding beta edge, i.e. the
    /// two prototiles coincide.
    pub fn detect_prototile_collapse(&self) -> bool {
        self.universe() == 16
            && (0..8u8).all(|k| {
                let a = EdgeSymbol::of(Prototile::Alpha, k);
                self.relation(a, a.swap_prototile()) == Some(false)
            })
    }

    /// The image of this system under exchanging alpha and beta symbols.
    pub fn swap_prototiles(&self) -> RelationSystem {
        let mut out = RelationSystem::new(self.universe());
        for r in self.generators() {
            let (x, y) = r.symbols();
            let (x, y) = (x.swap_prototile(), y.swap_prototile());
            out.add(if r.is_match() { Relation::Match(x, y) } else { Relation::Equal(x, y) });
        }
        out
    }

    fn is_self_dual_root(&self, r: EdgeSymbol) -> bool {
        self.self_dual[r.id()]
    }

    /// Same partition, same self-dual flags and same relative parities
    /// (parities inside a self-dual class carry no information).
    pub fn same_closure(&self, other: &RelationSystem) -> bool {
        self.universe() == other.universe()
            && self.symbols().all(|x| {
                let r = self.find(x).0;
                other.find(x).0 == r
                    && self.is_self_dual_root(r) == other.is_self_dual_root(r)
                    && (self.is_self_dual_root(r) || self.relation(r, x) == other.relation(r, x))
            })
    }
}

impl fmt::Display for RelationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.presentation())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMode {
    /// One prototile, one substitution.
    Single,
    /// Two prototiles inside one mixed 1-spread.
    OneRule,
    /// Two prototiles, each with its own 1-spread.
    TwoRule,
}

impl SolveMode {
    pub fn universe(self) -> usize {
        match self {
            SolveMode::Single => 8,
            _ => 16,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SolveMode::Single => "single",
            SolveMode::OneRule => "one-rule",
            SolveMode::TwoRule => "two-rule",
        }
    }
}

impl fmt::Display for SolveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolveMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(SolveMode::Single),
            "one-rule" | "one_rule" => Ok(SolveMode::OneRule),
            "two-rule" | "two_rule" => Ok(SolveMode::TwoRule),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Whether `(i, j)` takes part in two-rule classification.
pub fn is_admissible_pair(i: u8, j: u8) -> bool {
    i <= 15 && j <= 15 && i != j && (i, j) != (0, 15) && (i, j) != (15, 0)
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub mode: SolveMode,
    pub rule: SubstitutionRule,
    pub system: RelationSystem,
    pub iterations: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolutionReport {
    pub mode: SolveMode,
    pub pattern_i: u8,
    pub pattern_j: Option<u8>,
    pub degree: usize,
    pub collapse: bool,
    pub iterations: u32,
    pub presentation: String,
    pub classes: Vec<EdgeClass>,
}

impl Solution {
    pub fn degree(&self) -> usize {
        self.system.escher_degree()
    }

    pub fn collapse(&self) -> bool {
        self.system.detect_prototile_collapse()
    }

    pub fn report(&self) -> SolutionReport {
        SolutionReport {
            mode: self.mode,
            pattern_i: self.rule.alpha_pattern,
            pattern_j: self.rule.beta_pattern,
            degree: self.degree(),
            collapse: self.collapse(),
            iterations: self.iterations,
            presentation: self.system.presentation(),
            classes: self.system.classes(),
        }
    }
}

fn add_split_equal(sys: &mut RelationSystem, x: &Word, y: &Word) -> Result<bool> {
    let mut changed = false;
    for (a, b) in split_equal(x, y)? {
        changed |= sys.add_equal(a, b);
    }
    Ok(changed)
}

fn add_split_match(sys: &mut RelationSystem, x: &Word, y: &Word) -> Result<bool> {
    let mut changed = false;
    for (a, b) in split_match(x, y)? {
        changed |= sys.add_match(a.symbol, b.symbol);
    }
    Ok(changed)
}

/// Pulls the chair's one-prototile relations `a'=c'=e'=g' / b'=d'=f'=h'`
/// back through a boundary decomposition of its eight spread edges.
fn impose_chair_schema(sys: &mut RelationSystem, words: &[Word]) -> Result<()> {
    for k in [2, 4, 6] {
        add_split_equal(sys, &words[0], &words[k])?;
    }
    for k in [3, 5, 7] {
        add_split_equal(sys, &words[1], &words[k])?;
    }
    add_split_match(sys, &words[0], &words[1])?;
    Ok(())
}

/// Base relations implied by requiring every relation of `sys` to hold
/// between spread edges, given the decomposition words of all spread edges
/// (indexed by symbol id).
pub fn lift_relations(sys: &RelationSystem, words: &[Word]) -> Result<Vec<Relation>> {
    let mut out = Vec::new();
    for r in sys.generators() {
        let (x, y) = r.symbols();
        let (wx, wy) = (&words[x.id()], &words[y.id()]);
        if r.is_match() {
            out.extend(split_match(wx, wy)?.into_iter().map(|(a, b)| Relation::Match(a.symbol, b.symbol)));
        } else {
            out.extend(split_equal(wx, wy)?.into_iter().map(|(a, b)| Relation::Equal(a, b)));
        }
    }
    Ok(out)
}

pub fn solve_single() -> Result<Solution> {
    let spread = compose_spread(0, Prototile::Alpha);
    let mut system = RelationSystem::new(8);
    for (x, y) in extract_matchings(&spread)? {
        system.add_match(x, y);
    }
    impose_chair_schema(&mut system, &extract_boundary_decomposition(&spread)?)?;
    Ok(Solution { mode: SolveMode::Single, rule: SubstitutionRule::single(0)?, system, iterations: 1 })
}

pub fn solve_one_rule(pattern: u8) -> Result<Solution> {
    let rule = SubstitutionRule::single(pattern)?;
    let spread = compose_spread(pattern, Prototile::Alpha);
    let mut system = RelationSystem::new(16);
    for (x, y) in extract_matchings(&spread)? {
        system.add_match(x, y);
    }
    impose_chair_schema(&mut system, &extract_boundary_decomposition(&spread)?)?;
    Ok(Solution { mode: SolveMode::OneRule, rule, system, iterations: 1 })
}

/// Least fixed point of internal matchings under substitution lifting.
///
/// `iterations` counts lifting rounds including the final one that adds
/// nothing.
pub fn solve_two_rule(i: u8, j: u8) -> Result<Solution> {
    let rule = SubstitutionRule::pair(i, j)?;
    if !is_admissible_pair(i, j) {
        return Err(Error::ExcludedPair(i, j));
    }
    let alpha = compose_spread(i, Prototile::Alpha);
    let beta = compose_spread(j, Prototile::Beta);
    let mut system = RelationSystem::new(16);
    for (x, y) in extract_matchings(&alpha)?.into_iter().chain(extract_matchings(&beta)?) {
        system.add_match(x, y);
    }
    let mut words = extract_boundary_decomposition(&alpha)?;
    words.extend(extract_boundary_decomposition(&beta)?);

    let mut iterations = 0;
    loop {
        if iterations == MAX_ITERATIONS {
            return Err(Error::NoFixedPoint(iterations));
        }
        iterations += 1;
        let mut changed = false;
        for r in lift_relations(&system, &words)? {
            changed |= system.add(r);
        }
        if !changed {
            break;
        }
    }
    Ok(Solution { mode: SolveMode::TwoRule, rule, system, iterations })
}

/// Dispatches on `mode`. `i` is the alpha pattern (ignored in single mode),
/// `j` the beta pattern (two-rule only).
pub fn solve(mode: SolveMode, i: Option<u8>, j: Option<u8>) -> Result<Solution> {
    let missing = |what: &str| Error::Parse(format!("{mode} mode needs {what}"));
    match mode {
        SolveMode::Single => solve_single(),
        SolveMode::OneRule => solve_one_rule(i.ok_or_else(|| missing("a pattern"))?),
        SolveMode::TwoRule => solve_two_rule(i.ok_or_else(|| missing("-i"))?, j.ok_or_else(|| missing("-j"))?),
    }
}
