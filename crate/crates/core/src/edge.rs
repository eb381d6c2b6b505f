//! Perturbed-edge algebra.
//!
//! An edge of a prototile is identified by an [`EdgeSymbol`]. Oriented copies
//! of an edge are [`EdgeTerm`]s carrying two commuting involutions: `mirror`
//! (left-right reflection) and `invert` (upside-down reflection). Two edges
//! abut in a tiling exactly when one is the `dual` (mirror of inverse) of the
//! other.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest displacement, in edge lengths, a perturbed edge may carry.
pub const AMPLITUDE_CAP: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prototile {
    Alpha,
    Beta,
}

impl Prototile {
    pub fn swap(self) -> Self {
        match self {
            Prototile::Alpha => Prototile::Beta,
            Prototile::Beta => Prototile::Alpha,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Prototile::Alpha => "alpha",
            Prototile::Beta => "beta",
        }
    }
}

impl fmt::Display for Prototile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Prototile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" | "a" => Ok(Prototile::Alpha),
            "beta" | "b" => Ok(Prototile::Beta),
            other => Err(Error::Parse(format!("unknown prototile {other:?}"))),
        }
    }
}

/// One of the eight boundary edges of a prototile: `a..h` on alpha, `i..p` on beta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeSymbol {
    prototile: Prototile,
    index: u8,
}

impl EdgeSymbol {
    pub fn new(prototile: Prototile, index: u8) -> Result<Self> {
        if index >= 8 {
            return Err(Error::InvalidSymbol(format!("{prototile} edge {index}")));
        }
        Ok(EdgeSymbol { prototile, index })
    }

    pub(crate) const fn of(prototile: Prototile, index: u8) -> Self {
        EdgeSymbol { prototile, index }
    }

    pub fn prototile(self) -> Prototile {
        self.prototile
    }

    pub fn index(self) -> u8 {
        self.index
    }

    /// Dense id in `0..16`; alpha edges come first.
    pub fn id(self) -> usize {
        self.index as usize + if self.prototile == Prototile::Beta { 8 } else { 0 }
    }

    pub fn from_id(id: usize) -> Result<Self> {
        match id {
            0..=7 => Ok(EdgeSymbol::of(Prototile::Alpha, id as u8)),
            8..=15 => Ok(EdgeSymbol::of(Prototile::Beta, (id - 8) as u8)),
            _ => Err(Error::InvalidSymbol(id.to_string())),
        }
    }

    pub fn letter(self) -> char {
        (b'a' + self.id() as u8) as char
    }

    pub fn from_letter(c: char) -> Result<Self> {
        match c {
            'a'..='p' => EdgeSymbol::from_id((c as u8 - b'a') as usize),
            _ => Err(Error::InvalidSymbol(c.to_string())),
        }
    }

    /// The same edge position on the other prototile.
    pub fn swap_prototile(self) -> Self {
        EdgeSymbol::of(self.prototile.swap(), self.index)
    }

    /// All symbols of a universe of 8 (alpha only) or 16 symbols.
    pub fn universe(size: usize) -> impl Iterator<Item = EdgeSymbol> {
        (0..size.min(16)).map(|id| EdgeSymbol::from_id(id).expect("id below 16"))
    }
}

impl fmt::Display for EdgeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl Serialize for EdgeSymbol {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.letter().to_string())
    }
}

impl<'de> Deserialize<'de> for EdgeSymbol {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => EdgeSymbol::from_letter(c).map_err(serde::de::Error::custom),
            _ => Err(serde::de::Error::custom(format!("bad edge symbol {s:?}"))),
        }
    }
}

/// An oriented occurrence of an edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeTerm {
    pub symbol: EdgeSymbol,
    pub mirrored: bool,
    pub inverted: bool,
}

impl EdgeTerm {
    pub fn plain(symbol: EdgeSymbol) -> Self {
        EdgeTerm { symbol, mirrored: false, inverted: false }
    }

    pub fn is_plain(self) -> bool {
        !self.mirrored && !self.inverted
    }

    pub fn mirror(self) -> Self {
        EdgeTerm { mirrored: !self.mirrored, ..self }
    }

    pub fn invert(self) -> Self {
        EdgeTerm { inverted: !self.inverted, ..self }
    }

    pub fn dual(self) -> Self {
        self.mirror().invert()
    }
}

impl fmt::Display for EdgeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol)?;
        if self.mirrored {
            f.write_str("\u{304}")?;
        }
        if self.inverted {
            f.write_str("\u{207b}\u{b9}")?;
        }
        Ok(())
    }
}

/// A product of perturbed edges laid end to end. Never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<EdgeTerm>);

impl Word {
    pub fn new(terms: Vec<EdgeTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word(terms))
    }

    pub fn from_symbols<I: IntoIterator<Item = EdgeSymbol>>(symbols: I) -> Result<Self> {
        Word::new(symbols.into_iter().map(EdgeTerm::plain).collect())
    }

    /// Parses bare letters, e.g. `"ha"`.
    pub fn parse(s: &str) -> Result<Self> {
        Word::from_symbols(s.chars().map(EdgeSymbol::from_letter).collect::<Result<Vec<_>>>()?)
    }

    pub fn terms(&self) -> &[EdgeTerm] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> impl Iterator<Item = EdgeSymbol> + '_ {
        self.0.iter().map(|t| t.symbol)
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// Flips every term left-right; order is kept.
    pub fn mirror(&self) -> Word {
        Word(self.0.iter().map(|t| t.mirror()).collect())
    }

    /// Turns the product upside down: each term flips and the order reverses.
    pub fn invert(&self) -> Word {
        Word(self.0.iter().rev().map(|t| t.invert()).collect())
    }

    /// The edge that abuts this one from the other side.
    pub fn dual(&self) -> Word {
        self.invert().mirror()
    }

    /// Only meaningful for plain words, i.e. strings of bare symbols.
    pub fn to_letters(&self) -> String {
        self.0.iter().map(|t| t.to_string()).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.0 {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Splits a matching between two products into matchings between factors.
///
/// Factor `k` of `left` abuts factor `n-1-k` of `right`.
pub fn split_match(left: &Word, right: &Word) -> Result<Vec<(EdgeTerm, EdgeTerm)>> {
    if left.len() != right.len() {
        return Err(Error::UnsplittableProduct { left: left.len(), right: right.len() });
    }
    Ok(left.terms().iter().copied().zip(right.terms().iter().rev().copied()).collect())
}

/// Splits an equality between two plain products into same-index equalities.
pub fn split_equal(left: &Word, right: &Word) -> Result<Vec<(EdgeSymbol, EdgeSymbol)>> {
    if left.len() != right.len() {
        return Err(Error::UnsplittableProduct { left: left.len(), right: right.len() });
    }
    if !left.terms().iter().chain(right.terms()).all(|t| t.is_plain()) {
        return Err(Error::FlaggedTerm);
    }
    Ok(left.symbols().zip(right.symbols()).collect())
}

/// A concrete perturbed edge: a polyline of normal displacements over the
/// unit edge from `(0,0)` to `(1,0)`. Positive `u` points into the tile.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PerturbedCurve {
    samples: Vec<(f64, f64)>,
}

impl PerturbedCurve {
    pub fn straight() -> Self {
        PerturbedCurve::default()
    }

    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        let curve = PerturbedCurve { samples };
        curve.validate()?;
        Ok(curve)
    }

    pub fn validate(&self) -> Result<()> {
        let mut prev = 0.0;
        for &(t, u) in &self.samples {
            if !(t > prev && t < 1.0) {
                return Err(Error::InvalidCurve(format!("sample position {t} out of order")));
            }
            if !u.is_finite() || u.abs() > AMPLITUDE_CAP + 1e-12 {
                return Err(Error::InvalidCurve(format!("displacement {u} exceeds cap {AMPLITUDE_CAP}")));
            }
            prev = t;
        }
        Ok(())
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn is_straight(&self) -> bool {
        self.samples.iter().all(|&(_, u)| u == 0.0)
    }

    pub fn mirror(&self) -> Self {
        PerturbedCurve { samples: self.samples.iter().rev().map(|&(t, u)| (1.0 - t, u)).collect() }
    }

    pub fn invert(&self) -> Self {
        PerturbedCurve { samples: self.samples.iter().map(|&(t, u)| (t, -u)).collect() }
    }

    pub fn dual(&self) -> Self {
        PerturbedCurve { samples: self.samples.iter().rev().map(|&(t, u)| (1.0 - t, -u)).collect() }
    }

    /// Linear interpolation of the displacement at `t`.
    pub fn displacement(&self, t: f64) -> f64 {
        let mut prev = (0.0, 0.0);
        for &(st, su) in self.samples.iter().chain(std::iter::once(&(1.0, 0.0))) {
            if t <= st {
                let span = st - prev.0;
                return if span <= 0.0 { su } else { prev.1 + (su - prev.1) * (t - prev.0) / span };
            }
            prev = (st, su);
        }
        0.0
    }

    /// Whether the curve equals its own dual within `tol`.
    pub fn is_self_dual(&self, tol: f64) -> bool {
        let dual = self.dual();
        self.samples.len() == dual.samples.len()
            && self.samples.iter().zip(&dual.samples).all(|(a, b)| (a.0 - b.0).abs() <= tol && (a.1 - b.1).abs() <= tol)
    }

    /// Whether two edges carrying these curves fit together when glued.
    pub fn abuts(&self, other: &PerturbedCurve, tol: f64) -> bool {
        let probes = self.samples.iter().map(|s| s.0).chain(other.samples.iter().map(|s| 1.0 - s.0));
        probes.into_iter().all(|t| (self.displacement(t) + other.displacement(1.0 - t)).abs() <= tol)
    }
}
