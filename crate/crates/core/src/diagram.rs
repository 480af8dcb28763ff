//! Oriented polygonal knot diagrams.
//!
//! Edges and vertices carry global indices: components are concatenated in
//! order, vertex `k` is the start of edge `k`, and edge `k` runs from
//! vertex `k` to the next vertex of the same component (with wraparound).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Result, RibbonError};
use crate::geom::{orient, segment_intersection, Orientation, Point2, SegmentIntersection, EPS};

/// Which edge of a transversal crossing lies on top.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingAssignment {
    pub edge_a: usize,
    pub edge_b: usize,
    /// Intersection index within the edge pair. Two straight edges meet at
    /// most once, so this is always 0 for regular diagrams.
    #[serde(default)]
    pub index: usize,
    pub over: usize,
}

/// A pair of fully coincident edges and the one lying on top throughout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegenerateOverlap {
    pub edge_a: usize,
    pub edge_b: usize,
    pub over: usize,
}

/// A transversal crossing of two non-adjacent edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingData {
    pub edge_a: usize,
    pub edge_b: usize,
    pub point: Point2,
    pub over_edge: usize,
    pub under_edge: usize,
    /// +1 when (over direction, under direction) is a counterclockwise frame.
    pub sign: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    Left,
    Right,
    Straight,
}

impl Turn {
    /// +1 for a left turn, -1 for a right turn, 0 when straight.
    pub fn signum(self) -> f64 {
        match self {
            Turn::Left => 1.0,
            Turn::Right => -1.0,
            Turn::Straight => 0.0,
        }
    }
}

/// Fold angle at a vertex: the angle between the rays toward the previous
/// and next vertices, and the direction the outgoing edge turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FoldAngle {
    pub theta: f64,
    pub turn: Turn,
}

impl FoldAngle {
    pub fn is_fold(&self) -> bool {
        self.turn != Turn::Straight
    }

    /// Signed exterior angle `π − θ`, positive for left turns.
    pub fn exterior(&self) -> f64 {
        self.turn.signum() * (PI - self.theta)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyDiagram {
    components: Vec<Vec<Point2>>,
    crossings: Vec<CrossingAssignment>,
    degenerate_overlaps: Vec<DegenerateOverlap>,
    offsets: Vec<usize>,
    over_lookup: BTreeMap<(usize, usize), usize>,
}

impl PolyDiagram {
    pub fn new(
        components: Vec<Vec<Point2>>,
        crossings: Vec<CrossingAssignment>,
        degenerate_overlaps: Vec<DegenerateOverlap>,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(RibbonError::InvalidDiagram("no components".into()));
        }
        let mut offsets = Vec::with_capacity(components.len() + 1);
        offsets.push(0);
        for (ci, comp) in components.iter().enumerate() {
            if comp.len() < 2 {
                return Err(RibbonError::InvalidDiagram(format!(
                    "component {ci} has {} vertices, need at least 2",
                    comp.len()
                )));
            }
            for (i, p) in comp.iter().enumerate() {
                if !p.is_finite() {
                    return Err(RibbonError::InvalidDiagram(format!("vertex {i} of component {ci} is not finite")));
                }
                if *p == comp[(i + 1) % comp.len()] {
                    return Err(RibbonError::InvalidDiagram(format!(
                        "consecutive vertices {i} and {} of component {ci} coincide",
                        (i + 1) % comp.len()
                    )));
                }
            }
            offsets.push(offsets.last().unwrap() + comp.len());
        }
        let edges = *offsets.last().unwrap();
        let check_pair = |a: usize, b: usize, over: usize, what: &str| -> Result<()> {
            if a >= edges || b >= edges || a == b {
                return Err(RibbonError::InvalidDiagram(format!("{what} refers to bad edge pair ({a}, {b})")));
            }
            if over != a && over != b {
                return Err(RibbonError::InvalidDiagram(format!("{what} over-edge {over} is not {a} or {b}")));
            }
            Ok(())
        };
        let mut over_lookup = BTreeMap::new();
        for c in &crossings {
            check_pair(c.edge_a, c.edge_b, c.over, "crossing assignment")?;
            let key = (c.edge_a.min(c.edge_b), c.edge_a.max(c.edge_b));
            if over_lookup.insert(key, c.over).is_some() {
                return Err(RibbonError::InvalidDiagram(format!("duplicate crossing assignment for edges {key:?}")));
            }
        }
        for d in &degenerate_overlaps {
            check_pair(d.edge_a, d.edge_b, d.over, "degenerate overlap")?;
        }
        Ok(PolyDiagram { components, crossings, degenerate_overlaps, offsets, over_lookup })
    }

    /// A single closed polygon with no crossing data.
    pub fn polygon(points: Vec<Point2>) -> Result<Self> {
        Self::new(vec![points], Vec::new(), Vec::new())
    }

    pub fn components(&self) -> &[Vec<Point2>] {
        &self.components
    }

    pub fn crossing_assignments(&self) -> &[CrossingAssignment] {
        &self.crossings
    }

    pub fn degenerate_overlaps(&self) -> &[DegenerateOverlap] {
        &self.degenerate_overlaps
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    /// Number of edges, which equals the number of vertices.
    pub fn num_edges(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Component index and local index of a global vertex/edge index.
    pub fn locate(&self, k: usize) -> (usize, usize) {
        let c = self.offsets.partition_point(|&o| o <= k) - 1;
        (c, k - self.offsets[c])
    }

    pub fn global_index(&self, component: usize, local: usize) -> usize {
        self.offsets[component] + local
    }

    /// Global index range of a component's vertices (and outgoing edges).
    pub fn component_range(&self, component: usize) -> std::ops::Range<usize> {
        self.offsets[component]..self.offsets[component + 1]
    }

    pub fn vertex(&self, v: usize) -> Point2 {
        let (c, i) = self.locate(v);
        self.components[c][i]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Point2> + '_ {
        self.components.iter().flatten().copied()
    }

    pub fn next_vertex(&self, v: usize) -> usize {
        let (c, i) = self.locate(v);
        self.offsets[c] + (i + 1) % self.components[c].len()
    }

    pub fn prev_vertex(&self, v: usize) -> usize {
        let (c, i) = self.locate(v);
        let n = self.components[c].len();
        self.offsets[c] + (i + n - 1) % n
    }

    /// Edge ending at vertex `v`; the edge starting there has index `v`.
    pub fn prev_edge(&self, v: usize) -> usize {
        self.prev_vertex(v)
    }

    pub fn edge(&self, e: usize) -> (Point2, Point2) {
        (self.vertex(e), self.vertex(self.next_vertex(e)))
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let (a, b) = self.edge(e);
        a.dist(b)
    }

    pub fn edge_direction(&self, e: usize) -> Point2 {
        let (a, b) = self.edge(e);
        (b - a).normalized()
    }

    /// Edges sharing a vertex.
    pub fn edges_adjacent(&self, a: usize, b: usize) -> bool {
        a == b || self.next_vertex(a) == b || self.next_vertex(b) == a
    }

    /// Total Euclidean length over all components.
    pub fn length(&self) -> f64 {
        (0..self.num_edges()).map(|e| self.edge_length(e)).sum()
    }

    pub fn shortest_edge(&self) -> f64 {
        (0..self.num_edges()).map(|e| self.edge_length(e)).fold(f64::INFINITY, f64::min)
    }

    /// Largest absolute coordinate; sets the scale for coincidence tests.
    pub fn extent(&self) -> f64 {
        self.vertices().map(|p| p.x.abs().max(p.y.abs())).fold(0.0, f64::max).max(1e-300)
    }

    pub fn fold_angle(&self, v: usize) -> FoldAngle {
        let prev = self.vertex(self.prev_vertex(v));
        let here = self.vertex(v);
        let next = self.vertex(self.next_vertex(v));
        let back = (prev - here).normalized();
        let fwd = (next - here).normalized();
        let theta = back.cross(fwd).abs().atan2(back.dot(fwd));
        let turn = match orient(prev, here, next) {
            _ if theta >= PI - EPS => Turn::Straight,
            Orientation::CounterClockwise => Turn::Left,
            Orientation::Clockwise => Turn::Right,
            // exact double-back: left by convention
            Orientation::Collinear => Turn::Left,
        };
        let theta = if turn == Turn::Straight { PI } else { theta };
        FoldAngle { theta, turn }
    }

    /// Vertices with θ < π, in index order.
    pub fn fold_vertices(&self) -> Vec<usize> {
        (0..self.num_edges()).filter(|&v| self.fold_angle(v).is_fold()).collect()
    }

    pub fn fold_count_in(&self, component: usize) -> usize {
        self.component_range(component).filter(|&v| self.fold_angle(v).is_fold()).count()
    }

    /// Over-edge recorded for a pair of edges, if any.
    pub fn assigned_over(&self, a: usize, b: usize) -> Option<usize> {
        self.over_lookup.get(&(a.min(b), a.max(b))).copied()
    }

    /// All transversal crossings between non-adjacent edges, ordered by
    /// edge pair.
    pub fn find_crossings(&self) -> Result<Vec<CrossingData>> {
        let m = self.num_edges();
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if self.edges_adjacent(a, b) {
                    continue;
                }
                let (p0, p1) = self.edge(a);
                let (q0, q1) = self.edge(b);
                match segment_intersection(p0, p1, q0, q1) {
                    SegmentIntersection::Disjoint => {}
                    SegmentIntersection::Proper { point, .. } => {
                        let over =
                            self.assigned_over(a, b).ok_or(RibbonError::MissingAssignment { edge_a: a, edge_b: b })?;
                        let under = if over == a { b } else { a };
                        let s = self.edge_direction(over).cross(self.edge_direction(under));
                        out.push(CrossingData {
                            edge_a: a,
                            edge_b: b,
                            point,
                            over_edge: over,
                            under_edge: under,
                            sign: if s > 0.0 { 1 } else { -1 },
                        });
                    }
                    SegmentIntersection::Touch { .. } => {
                        return Err(RibbonError::DegenerateIntersection {
                            edge_a: a,
                            edge_b: b,
                            reason: "edges touch at an endpoint".into(),
                        })
                    }
                    SegmentIntersection::Overlap => {
                        if !self.is_recorded_coincidence(a, b) {
                            return Err(RibbonError::DegenerateIntersection {
                                edge_a: a,
                                edge_b: b,
                                reason: "collinear overlap".into(),
                            });
                        }
                    }
                }
            }
        }
        let tol = EPS * self.extent();
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if out[i].point.dist(out[j].point) <= tol {
                    return Err(RibbonError::DegenerateIntersection {
                        edge_a: out[i].edge_a,
                        edge_b: out[j].edge_b,
                        reason: "triple point".into(),
                    });
                }
            }
        }
        Ok(out)
    }

    fn is_recorded_coincidence(&self, a: usize, b: usize) -> bool {
        let recorded = self
            .degenerate_overlaps
            .iter()
            .any(|d| (d.edge_a.min(d.edge_b), d.edge_a.max(d.edge_b)) == (a.min(b), a.max(b)));
        if !recorded {
            return false;
        }
        let (p0, p1) = self.edge(a);
        let (q0, q1) = self.edge(b);
        (p0 == q0 && p1 == q1) || (p0 == q1 && p1 == q0)
    }

    /// Vertex index after [`PolyDiagram::reversed`]: within each component
    /// local vertex `i` moves to `(n − i) mod n`.
    pub fn reversed_vertex(&self, v: usize) -> usize {
        let (c, i) = self.locate(v);
        let n = self.components[c].len();
        self.offsets[c] + (n - i) % n
    }

    /// Edge index after [`PolyDiagram::reversed`]: local edge `j` becomes
    /// `n − 1 − j`, traversed backwards.
    pub fn reversed_edge(&self, e: usize) -> usize {
        let (c, j) = self.locate(e);
        let n = self.components[c].len();
        self.offsets[c] + (n - 1 - j)
    }

    /// Same diagram with every component's orientation reversed.
    pub fn reversed(&self) -> PolyDiagram {
        let components = self
            .components
            .iter()
            .map(|comp| {
                let n = comp.len();
                (0..n).map(|k| comp[(n - k) % n]).collect()
            })
            .collect();
        let crossings = self
            .crossings
            .iter()
            .map(|c| CrossingAssignment {
                edge_a: self.reversed_edge(c.edge_a),
                edge_b: self.reversed_edge(c.edge_b),
                index: c.index,
                over: self.reversed_edge(c.over),
            })
            .collect();
        let degenerate_overlaps = self
            .degenerate_overlaps
            .iter()
            .map(|d| DegenerateOverlap {
                edge_a: self.reversed_edge(d.edge_a),
                edge_b: self.reversed_edge(d.edge_b),
                over: self.reversed_edge(d.over),
            })
            .collect();
        PolyDiagram::new(components, crossings, degenerate_overlaps).expect("reversal preserves validity")
    }

    /// Same diagram with the other strand on top at every crossing and
    /// degenerate overlap.
    pub fn switched(&self) -> PolyDiagram {
        let other = |a: usize, b: usize, over: usize| if over == a { b } else { a };
        let crossings = self
            .crossings
            .iter()
            .map(|c| CrossingAssignment { over: other(c.edge_a, c.edge_b, c.over), ..*c })
            .collect();
        let degenerate_overlaps = self
            .degenerate_overlaps
            .iter()
            .map(|d| DegenerateOverlap { over: other(d.edge_a, d.edge_b, d.over), ..*d })
            .collect();
        PolyDiagram::new(self.components.clone(), crossings, degenerate_overlaps).expect("switching preserves validity")
    }

    /// Applies `f` to every vertex, keeping the combinatorial data.
    pub fn map_points(&self, mut f: impl FnMut(Point2) -> Point2) -> Result<PolyDiagram> {
        let components = self.components.iter().map(|c| c.iter().map(|p| f(*p)).collect()).collect();
        PolyDiagram::new(components, self.crossings.clone(), self.degenerate_overlaps.clone())
    }

    pub fn scaled(&self, factor: f64) -> Result<PolyDiagram> {
        self.map_points(|p| p * factor)
    }

    pub fn with_vertex(&self, v: usize, p: Point2) -> Result<PolyDiagram> {
        let mut components = self.components.clone();
        let (c, i) = self.locate(v);
        components[c][i] = p;
        PolyDiagram::new(components, self.crossings.clone(), self.degenerate_overlaps.clone())
    }
}

/// Total length of all edges.
pub fn diagram_length(k: &PolyDiagram) -> f64 {
    k.length()
}
