//! Integer geometry of the chair tile and its substitution.
//!
//! The chair occupies cells `(0,0)`, `(1,0)`, `(0,1)`; its boundary is the
//! hexagon `(0,0),(2,0),(2,1),(1,1),(1,2),(0,2)` traversed counterclockwise,
//! split into eight unit edges. Edge letters start at the reflex corner:
//!
//! ```text
//!   (0,2) c (1,2)
//!     d       b
//!   (0,1)   (1,1) a (2,1)
//!     e               h
//!   (0,0) f (1,0) g (2,0)
//! ```
//!
//! Doubling the chair gives four chair copies. Bit `k` of a substitution
//! pattern marks child `k` as beta: bit 0 is the east wing, bit 1 the corner
//! tile, bit 2 the north wing and bit 3 the central tile.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::edge::{EdgeSymbol, Prototile, Word};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    fn scale(self, k: i64) -> Self {
        Point::new(self.x * k, self.y * k)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

/// Counterclockwise quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rotation {
    R0,
    R90,
    R180,
    R270,
}

impl Rotation {
    pub fn quarter_turns(self) -> u8 {
        self as u8
    }

    pub fn from_quarter_turns(q: u8) -> Self {
        match q % 4 {
            0 => Rotation::R0,
            1 => Rotation::R90,
            2 => Rotation::R180,
            _ => Rotation::R270,
        }
    }

    pub fn degrees(self) -> u32 {
        90 * self.quarter_turns() as u32
    }

    pub fn from_degrees(deg: u32) -> Result<Self> {
        match deg {
            0 | 90 | 180 | 270 => Ok(Rotation::from_quarter_turns((deg / 90) as u8)),
            _ => Err(Error::Parse(format!("rotation {deg} is not a multiple of 90 below 360"))),
        }
    }

    pub fn then(self, other: Rotation) -> Rotation {
        Rotation::from_quarter_turns(self.quarter_turns() + other.quarter_turns())
    }

    pub fn apply(self, p: Point) -> Point {
        match self {
            Rotation::R0 => p,
            Rotation::R90 => Point::new(-p.y, p.x),
            Rotation::R180 => Point::new(-p.x, -p.y),
            Rotation::R270 => Point::new(p.y, -p.x),
        }
    }

    /// Rotates a floating point vector.
    pub fn apply_f64(self, (x, y): (f64, f64)) -> (f64, f64) {
        match self {
            Rotation::R0 => (x, y),
            Rotation::R90 => (-y, x),
            Rotation::R180 => (-x, -y),
            Rotation::R270 => (y, -x),
        }
    }
}

pub const CHAIR_VERTICES: [Point; 6] =
    [Point::new(0, 0), Point::new(2, 0), Point::new(2, 1), Point::new(1, 1), Point::new(1, 2), Point::new(0, 2)];

pub const CHAIR_CELLS: [Point; 3] = [Point::new(0, 0), Point::new(1, 0), Point::new(0, 1)];

/// Unit edges of the chair indexed by edge letter (`a` = 0), each directed
/// so that the tile lies on its left.
pub const CHAIR_EDGES: [(Point, Point); 8] = [
    (Point::new(2, 1), Point::new(1, 1)),
    (Point::new(1, 1), Point::new(1, 2)),
    (Point::new(1, 2), Point::new(0, 2)),
    (Point::new(0, 2), Point::new(0, 1)),
    (Point::new(0, 1), Point::new(0, 0)),
    (Point::new(0, 0), Point::new(1, 0)),
    (Point::new(1, 0), Point::new(2, 0)),
    (Point::new(2, 0), Point::new(2, 1)),
];

/// The four children of the doubled chair in pattern-bit order.
const CHILDREN: [(Rotation, Point); 4] = [
    (Rotation::R90, Point::new(4, 0)),
    (Rotation::R0, Point::new(0, 0)),
    (Rotation::R270, Point::new(0, 4)),
    (Rotation::R0, Point::new(1, 1)),
];

/// An orientation-preserving copy of the chair: `x -> rotation(x) + translation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Placement {
    pub label: Prototile,
    pub translation: Point,
    pub rotation: Rotation,
}

impl Placement {
    pub fn new(label: Prototile, translation: Point, rotation: Rotation) -> Self {
        Placement { label, translation, rotation }
    }

    pub fn map(&self, p: Point) -> Point {
        self.rotation.apply(p) + self.translation
    }

    pub fn map_f64(&self, p: (f64, f64)) -> (f64, f64) {
        let (x, y) = self.rotation.apply_f64(p);
        (x + self.translation.x as f64, y + self.translation.y as f64)
    }

    /// Directed unit segment of edge `index` in plane coordinates.
    pub fn edge_segment(&self, index: usize) -> (Point, Point) {
        let (p, q) = CHAIR_EDGES[index];
        (self.map(p), self.map(q))
    }

    pub fn edge_symbol(&self, index: usize) -> EdgeSymbol {
        EdgeSymbol::of(self.label, index as u8)
    }

    pub fn cells(&self) -> [Point; 3] {
        CHAIR_CELLS.map(|c| {
            let centre = self.rotation.apply(Point::new(2 * c.x + 1, 2 * c.y + 1)) + self.translation.scale(2);
            Point::new((centre.x - 1).div_euclid(2), (centre.y - 1).div_euclid(2))
        })
    }

    pub fn with_label(self, label: Prototile) -> Self {
        Placement { label, ..self }
    }
}

/// Substitution patterns for alpha and, in two-rule tilings, beta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubstitutionRule {
    pub alpha_pattern: u8,
    pub beta_pattern: Option<u8>,
}

pub fn check_pattern(p: u32) -> Result<u8> {
    if p > 15 {
        return Err(Error::InvalidPattern(p));
    }
    Ok(p as u8)
}

impl SubstitutionRule {
    pub fn single(alpha_pattern: u8) -> Result<Self> {
        Ok(SubstitutionRule { alpha_pattern: check_pattern(alpha_pattern as u32)?, beta_pattern: None })
    }

    pub fn pair(alpha_pattern: u8, beta_pattern: u8) -> Result<Self> {
        Ok(SubstitutionRule {
            alpha_pattern: check_pattern(alpha_pattern as u32)?,
            beta_pattern: Some(check_pattern(beta_pattern as u32)?),
        })
    }

    pub fn pattern_for(&self, label: Prototile) -> Result<u8> {
        match label {
            Prototile::Alpha => Ok(self.alpha_pattern),
            Prototile::Beta => self.beta_pattern.ok_or(Error::MissingBetaRule),
        }
    }
}

pub fn child_label(pattern: u8, bit: usize) -> Prototile {
    if pattern >> bit & 1 == 1 {
        Prototile::Beta
    } else {
        Prototile::Alpha
    }
}

/// A chair scaled by `2^level`, tiled by base-size chairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spread {
    pub level: u32,
    pub target: Prototile,
    pub placements: Vec<Placement>,
}

impl Spread {
    pub fn scale(&self) -> i64 {
        1 << self.level
    }

    /// Cells of the doubled-`level` chair.
    fn expected_cells(&self) -> BTreeSet<Point> {
        let s = self.scale();
        let mut cells = BTreeSet::new();
        for x in 0..2 * s {
            for y in 0..2 * s {
                if x < s || y < s {
                    cells.insert(Point::new(x, y));
                }
            }
        }
        cells
    }

    fn check_covering(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for p in &self.placements {
            for c in p.cells() {
                if !seen.insert(c) {
                    return Err(Error::InvalidSpreadGeometry(format!("cell ({}, {}) covered twice", c.x, c.y)));
                }
            }
        }
        if seen != self.expected_cells() {
            return Err(Error::InvalidSpreadGeometry("placements do not cover the scaled chair".into()));
        }
        Ok(())
    }

    fn directed_segments(&self) -> BTreeMap<(Point, Point), EdgeSymbol> {
        let mut map = BTreeMap::new();
        for p in &self.placements {
            for k in 0..8 {
                map.insert(p.edge_segment(k), p.edge_symbol(k));
            }
        }
        map
    }

    /// Line-oriented dump: `label tx ty rot` per placement.
    pub fn to_text(&self) -> String {
        let mut out = format!("# chair spread level={} target={}\n", self.level, self.target);
        for p in &self.placements {
            let _ = writeln!(out, "{} {} {} {}", p.label, p.translation.x, p.translation.y, p.rotation.degrees());
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut level = None;
        let mut target = Prototile::Alpha;
        let mut placements = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(header) = line.strip_prefix('#') {
                for field in header.split_whitespace() {
                    if let Some(v) = field.strip_prefix("level=") {
                        level = Some(v.parse().map_err(|_| Error::Parse(format!("bad level {v:?}")))?);
                    } else if let Some(v) = field.strip_prefix("target=") {
                        target = v.parse()?;
                    }
                }
                continue;
            }
            placements.push(parse_placement(line)?);
        }
        let level = match level {
            Some(l) => l,
            None => infer_level(placements.len())?,
        };
        Ok(Spread { level, target, placements })
    }
}

fn parse_placement(line: &str) -> Result<Placement> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    if fields.len() < 4 {
        return Err(Error::Parse(format!("expected `label tx ty rot`, got {line:?}")));
    }
    let int = |s: &str| s.parse::<i64>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
    let rot = fields[3].parse::<u32>().map_err(|_| Error::Parse(format!("bad rotation {:?}", fields[3])))?;
    Ok(Placement::new(fields[0].parse()?, Point::new(int(fields[1])?, int(fields[2])?), Rotation::from_degrees(rot)?))
}

fn infer_level(count: usize) -> Result<u32> {
    (0..16)
        .find(|&l| 4usize.pow(l) == count)
        .ok_or_else(|| Error::Parse(format!("{count} placements is not a power of four")))
}

/// Expands a single supertile `level` times, asking `pattern` which
/// substitution to apply at each step to each label.
fn substitute<F>(target: Prototile, level: u32, mut pattern: F) -> Result<Spread>
where
    F: FnMut(u32, Prototile) -> Result<u8>,
{
    let mut current = vec![Placement::new(target, Point::new(0, 0), Rotation::R0)];
    for step in 0..level {
        let half = 1i64 << (level - step - 1);
        let mut next = Vec::with_capacity(current.len() * 4);
        for parent in &current {
            let pat = pattern(step, parent.label)?;
            for (bit, &(rot, offset)) in CHILDREN.iter().enumerate() {
                next.push(Placement::new(
                    child_label(pat, bit),
                    parent.rotation.apply(offset.scale(half)) + parent.translation,
                    parent.rotation.then(rot),
                ));
            }
        }
        current = next;
    }
    Ok(Spread { level, target, placements: current })
}

/// The doubled chair split into four chairs labelled by `pattern`.
pub fn compose_spread(pattern: u8, target: Prototile) -> Spread {
    substitute(target, 1, |_, _| Ok(pattern)).expect("constant pattern")
}

pub fn generate_spread(rule: &SubstitutionRule, target: Prototile, level: u32) -> Result<Spread> {
    substitute(target, level, |_, label| rule.pattern_for(label))
}

/// `level`-spread of a single mixed 1-spread: the top `level-1` steps use the
/// plain chair substitution, the last splits each chair by `pattern`.
pub fn generate_one_rule_spread(pattern: u8, level: u32) -> Spread {
    substitute(Prototile::Alpha, level, |step, _| Ok(if step + 1 == level { pattern } else { 0 }))
        .expect("constant pattern")
}

/// Edge matchings across every interior unit segment.
pub fn extract_matchings(sp: &Spread) -> Result<Vec<(EdgeSymbol, EdgeSymbol)>> {
    sp.check_covering()?;
    let mut by_segment: BTreeMap<(Point, Point), Vec<(EdgeSymbol, Point)>> = BTreeMap::new();
    for p in &sp.placements {
        for k in 0..8 {
            let (from, to) = p.edge_segment(k);
            by_segment.entry((from.min(to), from.max(to))).or_default().push((p.edge_symbol(k), from));
        }
    }
    let mut out = Vec::new();
    for (seg, sides) in by_segment {
        match sides.as_slice() {
            [_] => {}
            [(x, fx), (y, fy)] if fx != fy => out.push((*x, *y)),
            _ => {
                return Err(Error::InvalidSpreadGeometry(format!(
                    "segment ({},{})-({},{}) has {} incident edges",
                    seg.0.x,
                    seg.0.y,
                    seg.1.x,
                    seg.1.y,
                    sides.len()
                )))
            }
        }
    }
    Ok(out)
}

/// Each spread edge as the word of base edges along it, in traversal order.
/// Words have length `2^level`.
pub fn extract_boundary_decomposition(sp: &Spread) -> Result<Vec<Word>> {
    let segments = sp.directed_segments();
    let s = sp.scale();
    CHAIR_EDGES
        .iter()
        .map(|&(p, q)| {
            let start = p.scale(s);
            let step = q - p;
            let symbols = (0..s)
                .map(|i| {
                    let a = start + step.scale(i);
                    segments
                        .get(&(a, a + step))
                        .copied()
                        .ok_or_else(|| Error::InvalidSpreadGeometry("boundary segment not covered".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            Word::from_symbols(symbols)
        })
        .collect()
}

/// Renders a decomposition as `x'=uv` entries, one per spread edge.
pub fn decomposition_strings(target: Prototile, words: &[Word]) -> Vec<String> {
    words.iter().enumerate().map(|(k, w)| format!("{}'={}", EdgeSymbol::of(target, k as u8), w.to_letters())).collect()
}

/// Geometric matchings of every spread up to `max_level`, deduplicated and
/// normalised so the smaller symbol comes first.
pub fn oracle_relations(
    rule: &SubstitutionRule,
    target: Prototile,
    max_level: u32,
) -> Result<Vec<(EdgeSymbol, EdgeSymbol)>> {
    let mut all = BTreeSet::new();
    for level in 1..=max_level {
        for (x, y) in extract_matchings(&generate_spread(rule, target, level)?)? {
            all.insert((x.min(y), x.max(y)));
        }
    }
    Ok(all.into_iter().collect())
}

/// Same as [`oracle_relations`] for the one-rule hierarchy.
pub fn oracle_relations_one_rule(pattern: u8, max_level: u32) -> Result<Vec<(EdgeSymbol, EdgeSymbol)>> {
    let mut all = BTreeSet::new();
    for level in 1..=max_level {
        for (x, y) in extract_matchings(&generate_one_rule_spread(pattern, level))? {
            all.insert((x.min(y), x.max(y)));
        }
    }
    Ok(all.into_iter().collect())
}

impl fmt::Display for Spread {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for Spread {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Spread::parse_text(s)
    }
}
