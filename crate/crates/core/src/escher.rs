//! Escherized rendering: free curves per relation class are propagated to
//! every edge symbol, laid onto each placed tile and checked for geometric
//! consistency.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::edge::{PerturbedCurve, Prototile, AMPLITUDE_CAP};
use crate::error::{Error, Result};
use crate::geometry::{generate_one_rule_spread, generate_spread, Placement, Point, Spread, SubstitutionRule};
use crate::solver::{RelationSystem, Solution, SolveMode};

/// Agreement tolerance for shared edges.
pub const EDGE_TOLERANCE: f64 = 1e-9;

/// Interior samples per generated curve.
pub const DEFAULT_SAMPLES: usize = 9;

/// One curve per class, keyed by class index in [`RelationSystem::classes`]
/// order. The curve belongs to the class root; dual members get its dual.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PerturbationAssignment {
    pub curves: BTreeMap<usize, PerturbedCurve>,
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    classes: Vec<ClassParams>,
}

#[derive(Serialize, Deserialize)]
struct ClassParams {
    id: usize,
    samples: Vec<[f64; 2]>,
}

impl PerturbationAssignment {
    /// Straight edges for all `classes` classes.
    pub fn straight(classes: usize) -> Self {
        PerturbationAssignment { curves: (0..classes).map(|c| (c, PerturbedCurve::straight())).collect() }
    }

    /// Random admissible curves from a seeded ChaCha8 stream.
    ///
    /// Displacements are drawn uniformly within `amplitude * sin(pi t)`, which
    /// keeps every curve inside a cone of half-angle below 45 degrees at both
    /// endpoints, so curves meeting at a tiling vertex cannot cross.
    pub fn random(sys: &RelationSystem, seed: u64, amplitude: f64) -> Self {
        let amplitude = amplitude.clamp(0.0, AMPLITUDE_CAP);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = DEFAULT_SAMPLES;
        let curves = sys
            .classes()
            .iter()
            .enumerate()
            .map(|(id, class)| {
                let ts: Vec<f64> = (1..=n).map(|k| k as f64 / (n + 1) as f64).collect();
                let mut us: Vec<f64> =
                    ts.iter().map(|&t| amplitude * (PI * t).sin() * rng.gen_range(-1.0..=1.0)).collect();
                if class.self_dual {
                    let raw = us.clone();
                    for k in 0..n {
                        us[k] = (raw[k] - raw[n - 1 - k]) / 2.0;
                    }
                }
                let curve = PerturbedCurve::new(ts.into_iter().zip(us).collect()).expect("within cap");
                (id, curve)
            })
            .collect();
        PerturbationAssignment { curves }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ParamsFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let mut curves = BTreeMap::new();
        for c in file.classes {
            let curve = PerturbedCurve::new(c.samples.iter().map(|s| (s[0], s[1])).collect())?;
            if curves.insert(c.id, curve).is_some() {
                return Err(Error::Parse(format!("class {} given twice", c.id)));
            }
        }
        Ok(PerturbationAssignment { curves })
    }

    pub fn to_json(&self) -> String {
        let file = ParamsFile {
            classes: self
                .curves
                .iter()
                .map(|(&id, c)| ClassParams { id, samples: c.samples().iter().map(|&(t, u)| [t, u]).collect() })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("params serialise")
    }
}

/// Curve of every symbol in the system's universe, indexed by symbol id.
pub fn propagate(sys: &RelationSystem, params: &PerturbationAssignment) -> Result<Vec<PerturbedCurve>> {
    let classes = sys.classes();
    let mut out = vec![PerturbedCurve::straight(); sys.universe()];
    for (id, class) in classes.iter().enumerate() {
        let curve = params.curves.get(&id).ok_or(Error::MissingClass(id))?;
        curve.validate()?;
        if class.self_dual && !curve.is_self_dual(EDGE_TOLERANCE) {
            return Err(Error::SelfDualViolation(id));
        }
        let dual = curve.dual();
        for s in &class.same {
            out[s.id()] = curve.clone();
        }
        for s in &class.dual {
            out[s.id()] = dual.clone();
        }
    }
    Ok(out)
}

/// Places `curve` on the directed unit segment `from -> to`; the
/// displacement is measured along the left normal.
pub fn place_curve(from: (f64, f64), to: (f64, f64), curve: &PerturbedCurve) -> Vec<(f64, f64)> {
    let d = (to.0 - from.0, to.1 - from.1);
    let n = (-d.1, d.0);
    let mut pts = Vec::with_capacity(curve.samples().len() + 2);
    pts.push(from);
    pts.extend(curve.samples().iter().map(|&(t, u)| (from.0 + t * d.0 + u * n.0, from.1 + t * d.1 + u * n.1)));
    pts.push(to);
    pts
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedTile {
    pub placement: Placement,
    /// Per edge letter: polyline from the segment start to its end.
    pub edges: Vec<Vec<(f64, f64)>>,
    /// Per edge letter: class index and whether the edge carries the dual.
    pub curve_refs: Vec<(usize, bool)>,
}

impl RenderedTile {
    /// Closed outline without the repeated start point.
    pub fn outline(&self) -> Vec<(f64, f64)> {
        self.edges.iter().flat_map(|e| e[..e.len() - 1].iter().copied()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedTiling {
    pub mode: SolveMode,
    pub level: u32,
    pub target: Prototile,
    pub tiles: Vec<RenderedTile>,
}

/// The placements a solution tiles with at `level`.
pub fn spread_for(solution: &Solution, target: Prototile, level: u32) -> Result<Spread> {
    match solution.mode {
        SolveMode::Single => generate_spread(&SubstitutionRule::single(0)?, Prototile::Alpha, level),
        SolveMode::OneRule => Ok(generate_one_rule_spread(solution.rule.alpha_pattern, level)),
        SolveMode::TwoRule => generate_spread(&solution.rule, target, level),
    }
}

/// Builds the escherized `level`-spread and verifies it.
pub fn render(
    solution: &Solution,
    target: Prototile,
    level: u32,
    params: &PerturbationAssignment,
) -> Result<RenderedTiling> {
    let curves = propagate(&solution.system, params)?;
    let spread = spread_for(solution, target, level)?;
    let tiles = spread
        .placements
        .iter()
        .map(|p| {
            let mut edges = Vec::with_capacity(8);
            let mut refs = Vec::with_capacity(8);
            for k in 0..8 {
                let sym = p.edge_symbol(k);
                let (from, to) = p.edge_segment(k);
                edges.push(place_curve(to_f64(from), to_f64(to), &curves[sym.id()]));
                refs.push((solution.system.class_index(sym), solution.system.find(sym).1));
            }
            RenderedTile { placement: *p, edges, curve_refs: refs }
        })
        .collect();
    let rt = RenderedTiling { mode: solution.mode, level, target: spread.target, tiles };
    if let Some(seg) = find_disagreement(&rt) {
        return Err(Error::Inconsistent(seg));
    }
    if let Some(c) = find_crossing(&rt) {
        return Err(Error::AmplitudeTooLarge(rt.tiles[c.0].curve_refs[c.1].0));
    }
    Ok(rt)
}

fn to_f64(p: Point) -> (f64, f64) {
    (p.x as f64, p.y as f64)
}

type SegmentKey = ((i64, i64), (i64, i64));

/// First interior segment whose two curve realizations differ.
pub fn find_disagreement(rt: &RenderedTiling) -> Option<SegmentKey> {
    let mut by_segment: BTreeMap<SegmentKey, Vec<(usize, usize)>> = BTreeMap::new();
    for (ti, tile) in rt.tiles.iter().enumerate() {
        for k in 0..8 {
            let (a, b) = tile.placement.edge_segment(k);
            let key = ((a.x, a.y).min((b.x, b.y)), (a.x, a.y).max((b.x, b.y)));
            by_segment.entry(key).or_default().push((ti, k));
        }
    }
    for (key, sides) in by_segment {
        if let [(ta, ka), (tb, kb)] = sides.as_slice() {
            let pa = &rt.tiles[*ta].edges[*ka];
            let pb = &rt.tiles[*tb].edges[*kb];
            let agree = pa.len() == pb.len()
                && pa
                    .iter()
                    .zip(pb.iter().rev())
                    .all(|(x, y)| (x.0 - y.0).abs() <= EDGE_TOLERANCE && (x.1 - y.1).abs() <= EDGE_TOLERANCE);
            if !agree {
                return Some(key);
            }
        } else if sides.len() > 2 {
            return Some(key);
        }
    }
    None
}

struct Seg {
    tile: usize,
    edge: usize,
    // position along the tile outline
    index: usize,
    a: (f64, f64),
    b: (f64, f64),
}

fn orient(p: (f64, f64), q: (f64, f64), r: (f64, f64)) -> f64 {
    (q.0 - p.0) * (r.1 - p.1) - (q.1 - p.1) * (r.0 - p.0)
}

fn properly_cross(s: &Seg, t: &Seg) -> bool {
    let eps = 1e-12;
    let d1 = orient(s.a, s.b, t.a);
    let d2 = orient(s.a, s.b, t.b);
    let d3 = orient(t.a, t.b, s.a);
    let d4 = orient(t.a, t.b, s.b);
    ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) && ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps))
}

/// First pair of outline segments that cross: within one tile (outline not
/// simple) or between two tiles (interiors overlap). Returns
/// `(tile, edge, other_tile, other_edge)`.
pub fn find_crossing(rt: &RenderedTiling) -> Option<(usize, usize, usize, usize)> {
    let mut segs = Vec::new();
    let mut outline_len = Vec::with_capacity(rt.tiles.len());
    for (ti, tile) in rt.tiles.iter().enumerate() {
        let mut index = 0;
        for (k, e) in tile.edges.iter().enumerate() {
            for w in e.windows(2) {
                segs.push(Seg { tile: ti, edge: k, index, a: w[0], b: w[1] });
                index += 1;
            }
        }
        outline_len.push(index);
    }
    let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (si, s) in segs.iter().enumerate() {
        let (x0, x1) = (s.a.0.min(s.b.0).floor() as i64, s.a.0.max(s.b.0).floor() as i64);
        let (y0, y1) = (s.a.1.min(s.b.1).floor() as i64, s.a.1.max(s.b.1).floor() as i64);
        for x in x0..=x1 {
            for y in y0..=y1 {
                grid.entry((x, y)).or_default().push(si);
            }
        }
    }
    let mut cells: Vec<_> = grid.into_iter().collect();
    cells.sort_by_key(|(k, _)| *k);
    for (_, bucket) in cells {
        for (n, &i) in bucket.iter().enumerate() {
            for &j in &bucket[n + 1..] {
                let (s, t) = (&segs[i], &segs[j]);
                if s.tile == t.tile {
                    let len = outline_len[s.tile];
                    let gap = s.index.abs_diff(t.index);
                    if gap <= 1 || gap == len - 1 {
                        continue;
                    }
                }
                if properly_cross(s, t) {
                    return Some((s.tile, s.edge, t.tile, t.edge));
                }
            }
        }
    }
    None
}

/// Shared edges agree and no outlines cross.
pub fn consistency_check(rt: &RenderedTiling) -> bool {
    find_disagreement(rt).is_none() && find_crossing(rt).is_none()
}

impl RenderedTiling {
    pub fn bounding_box(&self) -> (f64, f64, f64, f64) {
        let mut bb = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in self.tiles.iter().flat_map(|t| t.edges.iter().flatten()) {
            bb = (bb.0.min(p.0), bb.1.min(p.1), bb.2.max(p.0), bb.3.max(p.1));
        }
        bb
    }

    /// SVG 1.1 document, one path per tile, y axis pointing up.
    pub fn to_svg(&self) -> String {
        let (x0, y0, x1, y1) = self.bounding_box();
        let (w, h) = (x1 - x0, y1 - y0);
        let px = 720.0 / w.max(h);
        let mut out = String::new();
        let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{:.0}" height="{:.0}" viewBox="{:.4} {:.4} {:.4} {:.4}">"#,
            w * px,
            h * px,
            x0,
            -y1,
            w,
            h
        );
        let _ = writeln!(
            out,
            r##"<g transform="scale(1,-1)" stroke="#202020" stroke-width="{:.4}" stroke-linejoin="round">"##,
            0.04 * (1 << self.level.min(4)) as f64 / 2.0
        );
        for tile in &self.tiles {
            let fill = match tile.placement.label {
                Prototile::Alpha => "#f2c14e",
                Prototile::Beta => "#5b8e7d",
            };
            let mut d = String::new();
            for (n, p) in tile.outline().iter().enumerate() {
                let _ = write!(d, "{}{:.6} {:.6} ", if n == 0 { "M" } else { "L" }, p.0, p.1);
            }
            d.push('Z');
            let _ = writeln!(out, r#"<path class="{}" fill="{fill}" d="{d}"/>"#, tile.placement.label);
        }
        out.push_str("</g>\n</svg>\n");
        out
    }

    /// Placement dump followed by the curve reference of each edge, written
    /// `<class>+` for the class curve and `<class>-` for its dual.
    pub fn to_tiling_text(&self) -> String {
        let mut out = format!("# escherized {} spread level={} target={}\n", self.mode, self.level, self.target);
        for tile in &self.tiles {
            let p = tile.placement;
            let _ = write!(out, "{} {} {} {}", p.label, p.translation.x, p.translation.y, p.rotation.degrees());
            for &(class, dual) in &tile.curve_refs {
                let _ = write!(out, " {class}{}", if dual { '-' } else { '+' });
            }
            out.push('\n');
        }
        out
    }
}
