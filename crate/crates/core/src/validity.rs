//! Allowed-ribbon checks and width maximization.
//!
//! Faces are convex, so every pair of faces overlaps in at most one
//! connected region. The layering has one unknown per overlapping pair.
//! Fold choices, crossings and the no-piercing rule become equalities
//! between unknowns (kept in a parity union-find); acyclicity becomes two
//! three-literal clauses per triple of faces with a common interior, solved
//! by unit propagation and backtracking.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::PolyDiagram;
use crate::error::{Result, RibbonError};
use crate::geom::{centroid, clip_convex, dedup_ring, point_deep_inside, segment_depth_inside, thickness, Point2};
use crate::ribbon::{build_ribbon, Fold, FoldingInfo, RibbonGeometry};

/// Overlaps thinner than this fraction of the width count as touching.
pub const OVERLAP_TOL: f64 = 1e-9;

/// Relative slack in the immersion inequality.
pub const IMMERSION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapComponent {
    /// Face indices, lower first.
    pub faces: (usize, usize),
    /// Closure of the common interior (a convex polygon).
    pub region: Vec<Point2>,
    pub contains_crossing: bool,
    pub meets_crease: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayeredComponent {
    #[serde(flatten)]
    pub component: OverlapComponent,
    pub above: usize,
}

/// Which face lies on top in every overlap component.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Layering {
    components: Vec<LayeredComponent>,
    #[serde(skip)]
    index: BTreeMap<(usize, usize), usize>,
}

impl Layering {
    fn new(components: Vec<LayeredComponent>) -> Self {
        let index = components.iter().enumerate().map(|(i, c)| (c.component.faces, i)).collect();
        Layering { components, index }
    }

    pub fn components(&self) -> &[LayeredComponent] {
        &self.components
    }

    /// The face on top where faces `a` and `b` overlap.
    pub fn above(&self, a: usize, b: usize) -> Option<usize> {
        self.index.get(&(a.min(b), a.max(b))).map(|&i| self.components[i].above)
    }

    /// Whether `a` lies above `b`, if the two faces overlap.
    pub fn is_above(&self, a: usize, b: usize) -> Option<bool> {
        self.above(a, b).map(|top| top == a)
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Failure {
    /// The creases at the two ends of an edge cross inside the strip.
    ImmersionFailure { edge: usize, excess: f64 },
    /// A face lies between the two faces of a fold where it meets the crease.
    PiercingFailure { vertex: usize, face: usize, point: Point2 },
    /// The faces cannot be stacked in a linear order around `point`.
    CycleFailure { faces: Vec<usize>, point: Point2 },
    /// A crossing's over-edge cannot be placed on top.
    CrossingMismatch { edge_a: usize, edge_b: usize, point: Point2 },
}

impl Failure {
    pub fn kind(&self) -> &'static str {
        match self {
            Failure::ImmersionFailure { .. } => "ImmersionFailure",
            Failure::PiercingFailure { .. } => "PiercingFailure",
            Failure::CycleFailure { .. } => "CycleFailure",
            Failure::CrossingMismatch { .. } => "CrossingMismatch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub allowed: bool,
    pub width: f64,
    pub layering: Option<Layering>,
    pub failures: Vec<Failure>,
}

impl ValidityReport {
    fn failed(width: f64, failures: Vec<Failure>) -> Self {
        ValidityReport { allowed: false, width, layering: None, failures }
    }

    pub fn has_failure(&self, kind: &str) -> bool {
        self.failures.iter().any(|f| f.kind() == kind)
    }
}

/// Face polygons with corners merged at the overlap tolerance.
pub fn face_polygons(r: &RibbonGeometry) -> Vec<Vec<Point2>> {
    let tol = OVERLAP_TOL * r.width();
    r.faces().iter().map(|f| dedup_ring(&f.corners(), tol)).collect()
}

/// Edges whose creases cross inside the strip.
pub fn immersion_failures(r: &RibbonGeometry) -> Vec<Failure> {
    let k = r.diagram();
    (0..k.num_edges())
        .filter_map(|e| {
            let len = k.edge_length(e);
            let excess = (r.overhang(e) + r.overhang(k.next_vertex(e))).abs() - len;
            (excess > IMMERSION_TOL * len).then_some(Failure::ImmersionFailure { edge: e, excess })
        })
        .collect()
}

/// Decides whether the ribbon of width `w` over `k` with fold choices `f` is
/// allowed, returning a layering when it is.
pub fn check_allowed(k: &PolyDiagram, w: f64, f: &FoldingInfo) -> Result<ValidityReport> {
    let r = build_ribbon(k, w, f)?;
    let crossings = k.find_crossings()?;
    let immersion = immersion_failures(&r);
    if !immersion.is_empty() {
        return Ok(ValidityReport::failed(w, immersion));
    }
    let tol = OVERLAP_TOL * w;
    let polys = face_polygons(&r);
    let m = polys.len();

    // overlapping pairs
    let mut comps: Vec<OverlapComponent> = Vec::new();
    let mut pair_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for a in 0..m {
        for b in a + 1..m {
            if polys[a].len() < 3 || polys[b].len() < 3 {
                continue;
            }
            let region = clip_convex(&polys[a], &polys[b]);
            if thickness(&region) <= tol {
                continue;
            }
            let meets_crease = r.creases().any(|c| segment_depth_inside(c.left, c.right, &region, -tol) > tol);
            pair_index.insert((a, b), comps.len());
            comps.push(OverlapComponent { faces: (a, b), region, contains_crossing: false, meets_crease });
        }
    }
    for c in &crossings {
        if let Some(&i) = pair_index.get(&(c.edge_a, c.edge_b)) {
            comps[i].contains_crossing = true;
        }
    }

    // node 0 is the constant `true`; node i + 1 is "lower face of pair i is above"
    let mut uf = ParityUnionFind::new(comps.len() + 1);
    let lit = |a: usize, b: usize| -> Option<(usize, bool)> {
        pair_index.get(&(a.min(b), a.max(b))).map(|&i| (i + 1, a > b))
    };
    let mut failures = Vec::new();

    // fold pins
    for (v, fold) in f.iter() {
        if v >= m || !r.fold_angle(v).is_fold() {
            continue;
        }
        let (prev, cur) = (k.prev_edge(v), v);
        let (top, bottom) = match fold {
            Fold::Over => (cur, prev),
            Fold::Under => (prev, cur),
        };
        if let Some((node, neg)) = lit(top, bottom) {
            if !uf.pin(node, !neg) {
                let point = r.crease(v).map(|c| c.left.lerp(c.right, 0.5)).unwrap_or(k.vertex(v));
                failures.push(Failure::CycleFailure { faces: vec![prev.min(cur), prev.max(cur)], point });
            }
        }
    }

    // crossing pins
    let mut pin_crossing = |a: usize, b: usize, over: usize, point: Point2, failures: &mut Vec<Failure>| {
        let under = if over == a { b } else { a };
        if let Some((node, neg)) = lit(over, under) {
            if !uf.pin(node, !neg) {
                failures.push(Failure::CrossingMismatch { edge_a: a, edge_b: b, point });
            }
        }
    };
    for c in &crossings {
        pin_crossing(c.edge_a, c.edge_b, c.over_edge, c.point, &mut failures);
    }
    for d in k.degenerate_overlaps() {
        let (p, q) = k.edge(d.edge_a);
        pin_crossing(d.edge_a, d.edge_b, d.over, p.lerp(q, 0.5), &mut failures);
    }

    // no piercing: a face meeting the junction of two consecutive faces lies
    // on the same side of both
    for v in 0..m {
        let (prev, cur) = (k.prev_edge(v), v);
        if prev == cur {
            continue;
        }
        let (p, q) = match r.crease(v) {
            Some(c) => (c.left, c.right),
            None => {
                let face = r.face(cur);
                (face.start_left, face.start_right)
            }
        };
        for g in 0..m {
            if g == prev || g == cur || polys[g].len() < 3 {
                continue;
            }
            let depth = segment_depth_inside(p, q, &polys[g], tol);
            if depth <= tol {
                continue;
            }
            if let (Some((n1, neg1)), Some((n2, neg2))) = (lit(g, prev), lit(g, cur)) {
                if !uf.union(n1, n2, neg1 ^ neg2) {
                    failures.push(Failure::PiercingFailure {
                        vertex: v,
                        face: g,
                        point: deep_point(p, q, &polys[g], tol),
                    });
                }
            }
        }
    }
    if !failures.is_empty() {
        return Ok(ValidityReport::failed(w, failures));
    }

    // acyclicity over triples with a common interior
    let mut triples = Vec::new();
    for (&(a, b), &i) in &pair_index {
        for c in b + 1..m {
            if !pair_index.contains_key(&(a, c)) || !pair_index.contains_key(&(b, c)) {
                continue;
            }
            let region = clip_convex(&comps[i].region, &polys[c]);
            if thickness(&region) > tol {
                triples.push(([a, b, c], centroid(&region)));
            }
        }
    }
    let mut clauses: Vec<Vec<(usize, bool)>> = Vec::new();
    let mut clause_triple = Vec::new();
    for (t, ([a, b, c], point)) in triples.iter().enumerate() {
        let lits = [lit(*a, *b).unwrap(), lit(*b, *c).unwrap(), lit(*c, *a).unwrap()];
        // resolved literal: (root, wanted root value)
        let resolved: Vec<(usize, bool)> = lits
            .iter()
            .map(|&(node, neg)| {
                let (root, par) = uf.find(node);
                (root, !(par ^ neg))
            })
            .collect();
        let fixed: Vec<Option<bool>> = resolved.iter().map(|&(root, want)| (root == 0).then_some(want)).collect();
        if fixed.iter().all(Option::is_some) {
            let vals: Vec<bool> = fixed.iter().map(|v| v.unwrap()).collect();
            if vals[0] == vals[1] && vals[1] == vals[2] {
                failures.push(Failure::CycleFailure { faces: vec![*a, *b, *c], point: *point });
            }
            continue;
        }
        for polarity in [false, true] {
            // clause: at least one literal equals `polarity`
            let mut clause: Vec<(usize, bool)> = Vec::new();
            let mut satisfied = false;
            for &(root, want) in &resolved {
                let lit_root_value = if polarity { want } else { !want };
                if root == 0 {
                    satisfied |= lit_root_value;
                } else if clause.contains(&(root, !lit_root_value)) {
                    satisfied = true;
                } else if !clause.contains(&(root, lit_root_value)) {
                    clause.push((root, lit_root_value));
                }
            }
            if !satisfied {
                clauses.push(clause);
                clause_triple.push(t);
            }
        }
    }
    if !failures.is_empty() {
        return Ok(ValidityReport::failed(w, failures));
    }

    let assignment = match solve(comps.len() + 1, &clauses) {
        Ok(a) => a,
        Err(conflict) => {
            let ([a, b, c], point) = triples[clause_triple[conflict]];
            return Ok(ValidityReport::failed(w, vec![Failure::CycleFailure { faces: vec![a, b, c], point }]));
        }
    };

    let components = comps
        .into_iter()
        .enumerate()
        .map(|(i, component)| {
            let (root, par) = uf.find(i + 1);
            let root_value = if root == 0 { true } else { assignment[root].unwrap_or(true) };
            let lower_above = root_value ^ par;
            let (a, b) = component.faces;
            LayeredComponent { above: if lower_above { a } else { b }, component }
        })
        .collect();
    Ok(ValidityReport { allowed: true, width: w, layering: Some(Layering::new(components)), failures: Vec::new() })
}

/// Shortcut for `check_allowed(..).allowed`.
pub fn is_allowed(k: &PolyDiagram, w: f64, f: &FoldingInfo) -> Result<bool> {
    Ok(check_allowed(k, w, f)?.allowed)
}

/// Midpoint of the sampled part of [p, q] lying inside `poly`.
fn deep_point(p: Point2, q: Point2, poly: &[Point2], margin: f64) -> Point2 {
    let steps = 256;
    let inside: Vec<f64> = (0..=steps)
        .map(|i| i as f64 / steps as f64)
        .filter(|&t| point_deep_inside(p.lerp(q, t), poly, margin))
        .collect();
    match (inside.first(), inside.last()) {
        (Some(&t0), Some(&t1)) => p.lerp(q, (t0 + t1) / 2.0),
        _ => p.lerp(q, 0.5),
    }
}

struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n] }
    }

    /// Root of `x` and `value(x) xor value(root)`.
    fn find(&mut self, x: usize) -> (usize, bool) {
        if self.parent[x] == x {
            return (x, false);
        }
        let (root, p) = self.find(self.parent[x]);
        self.parity[x] ^= p;
        self.parent[x] = root;
        (root, self.parity[x])
    }

    /// Records `value(x) xor value(y) = c`; false on contradiction.
    fn union(&mut self, x: usize, y: usize, c: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == c;
        }
        // keep the constant node as a root
        let (child, root) = if ry == 0 { (rx, ry) } else { (ry, rx) };
        self.parent[child] = root;
        self.parity[child] = px ^ py ^ c;
        true
    }

    fn pin(&mut self, x: usize, value: bool) -> bool {
        self.union(x, 0, !value)
    }
}

/// Clause literals are `(variable, value)`; a clause holds when any literal
/// does. Returns an assignment or the index of a conflicting clause.
fn solve(n: usize, clauses: &[Vec<(usize, bool)>]) -> std::result::Result<Vec<Option<bool>>, usize> {
    let mut assign = vec![None; n];
    let mut last_conflict = 0;
    if search(&mut assign, clauses, &mut last_conflict) {
        Ok(assign)
    } else {
        Err(last_conflict)
    }
}

fn search(assign: &mut Vec<Option<bool>>, clauses: &[Vec<(usize, bool)>], conflict: &mut usize) -> bool {
    loop {
        let mut changed = false;
        for (ci, clause) in clauses.iter().enumerate() {
            let mut open = None;
            let mut open_count = 0;
            let mut sat = false;
            for &(var, val) in clause {
                match assign[var] {
                    Some(x) if x == val => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open_count += 1;
                        open = Some((var, val));
                    }
                }
            }
            if sat {
                continue;
            }
            match open_count {
                0 => {
                    *conflict = ci;
                    return false;
                }
                1 => {
                    let (var, val) = open.unwrap();
                    assign[var] = Some(val);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let branch = clauses.iter().flatten().find(|(var, _)| assign[*var].is_none()).map(|&(var, _)| var);
    let Some(var) = branch else {
        return true;
    };
    for value in [true, false] {
        let mut trial = assign.clone();
        trial[var] = Some(value);
        if search(&mut trial, clauses, conflict) {
            *assign = trial;
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum WidthBound {
    Bounded {
        width: f64,
    },
    /// Still allowed after the largest tested width.
    Unbounded {
        tested: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxWidth {
    pub bound: WidthBound,
    /// Allowed width below, rejected width above (equal when unbounded).
    pub bracket: (f64, f64),
    /// Failures reported at the upper end of the bracket.
    pub failures_above: Vec<Failure>,
    /// Monotonicity samples below the result: (width, allowed).
    pub samples: Vec<(f64, bool)>,
    pub monotone: bool,
    pub evaluations: usize,
}

impl MaxWidth {
    pub fn width(&self) -> Option<f64> {
        match self.bound {
            WidthBound::Bounded { width } => Some(width),
            WidthBound::Unbounded { .. } => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self.bound, WidthBound::Unbounded { .. })
    }
}

pub const MAX_DOUBLINGS: usize = 40;
pub const SAMPLE_FRACTIONS: [f64; 3] = [0.99, 0.5, 0.01];

/// Largest allowed width, to within `tol`, by bracketed bisection.
pub fn max_width(k: &PolyDiagram, f: &FoldingInfo, tol: f64) -> Result<MaxWidth> {
    if !(tol > 0.0) {
        return Err(RibbonError::BadParameters(format!("tolerance must be positive, got {tol}")));
    }
    let mut evaluations = 0;
    let mut eval = |w: f64| -> Result<ValidityReport> {
        evaluations += 1;
        check_allowed(k, w, f)
    };

    let mut lo = 1e-6 * k.shortest_edge();
    if !eval(lo)?.allowed {
        return Err(RibbonError::NoPositiveWidth);
    }
    let mut hi = k.length().max(lo * 2.0);
    let mut above = eval(hi)?;
    let mut doublings = 0;
    while above.allowed {
        lo = hi;
        if doublings == MAX_DOUBLINGS {
            let samples = sample_monotone(k, f, lo);
            let monotone = samples.iter().all(|s| s.1);
            return Ok(MaxWidth {
                bound: WidthBound::Unbounded { tested: lo },
                bracket: (lo, lo),
                failures_above: Vec::new(),
                samples,
                monotone,
                evaluations: evaluations + SAMPLE_FRACTIONS.len(),
            });
        }
        hi *= 2.0;
        doublings += 1;
        above = eval(hi)?;
    }
    while hi - lo > tol {
        let mid = lo + (hi - lo) / 2.0;
        let rep = eval(mid)?;
        if rep.allowed {
            lo = mid;
        } else {
            hi = mid;
            above = rep;
        }
    }
    let samples = sample_monotone(k, f, lo);
    let monotone = samples.iter().all(|s| s.1);
    Ok(MaxWidth {
        bound: WidthBound::Bounded { width: lo },
        bracket: (lo, hi),
        failures_above: above.failures,
        samples,
        monotone,
        evaluations: evaluations + SAMPLE_FRACTIONS.len(),
    })
}

fn sample_monotone(k: &PolyDiagram, f: &FoldingInfo, w: f64) -> Vec<(f64, bool)> {
    SAMPLE_FRACTIONS
        .par_iter()
        .map(|s| {
            let x = s * w;
            (x, check_allowed(k, x, f).map(|r| r.allowed).unwrap_or(false))
        })
        .collect()
}
