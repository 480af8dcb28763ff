//! The width-w folded ribbon over a polygonal diagram: creases, per-edge
//! faces and boundary loops.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::diagram::{FoldAngle, PolyDiagram, Turn};
use crate::error::{Result, RibbonError};
use crate::geom::{dedup_ring, signed_area, Point2, EPS};

/// Layering choice at a fold vertex. `Over` puts the ribbon of the outgoing
/// edge on top of the ribbon of the incoming edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fold {
    Over,
    Under,
}

impl Fold {
    pub fn flipped(self) -> Fold {
        match self {
            Fold::Over => Fold::Under,
            Fold::Under => Fold::Over,
        }
    }

    pub fn from_char(c: char) -> Option<Fold> {
        match c {
            'O' | 'o' => Some(Fold::Over),
            'U' | 'u' => Some(Fold::Under),
            _ => None,
        }
    }
}

/// Over/under choice per fold vertex, keyed by global vertex index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FoldingInfo {
    folds: BTreeMap<usize, Fold>,
}

impl FoldingInfo {
    pub fn new(folds: BTreeMap<usize, Fold>) -> Self {
        FoldingInfo { folds }
    }

    /// The same choice at every fold vertex of `k`.
    pub fn uniform(k: &PolyDiagram, fold: Fold) -> Self {
        FoldingInfo { folds: k.fold_vertices().into_iter().map(|v| (v, fold)).collect() }
    }

    pub fn get(&self, v: usize) -> Option<Fold> {
        self.folds.get(&v).copied()
    }

    pub fn set(&mut self, v: usize, fold: Fold) {
        self.folds.insert(v, fold);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Fold)> + '_ {
        self.folds.iter().map(|(v, f)| (*v, *f))
    }

    pub fn len(&self) -> usize {
        self.folds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.folds.is_empty()
    }

    /// Checks that every fold vertex of `k` has a choice.
    pub fn check_complete(&self, k: &PolyDiagram) -> Result<()> {
        match k.fold_vertices().into_iter().find(|v| !self.folds.contains_key(v)) {
            Some(v) => Err(RibbonError::MissingFoldChoice(v)),
            None => Ok(()),
        }
    }

    /// Folding information for `k.reversed()`. With `flip` set, every choice
    /// is inverted so the physical layering is unchanged; without it the
    /// labels are kept, which mirrors the fold layering.
    pub fn for_reversed(&self, k: &PolyDiagram, flip: bool) -> FoldingInfo {
        let folds =
            self.folds.iter().map(|(&v, &f)| (k.reversed_vertex(v), if flip { f.flipped() } else { f })).collect();
        FoldingInfo { folds }
    }

    /// Compact `O`/`U` string over vertices `0..n` (`-` where unset).
    pub fn pattern_string(&self, n: usize) -> String {
        (0..n)
            .map(|v| match self.get(v) {
                Some(Fold::Over) => 'O',
                Some(Fold::Under) => 'U',
                None => '-',
            })
            .collect()
    }
}

/// Fold line at a vertex with θ < π.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crease {
    pub vertex: usize,
    /// Endpoint on the left of the outgoing edge.
    pub left: Point2,
    /// Endpoint on the right of the outgoing edge.
    pub right: Point2,
    pub theta: f64,
}

impl Crease {
    pub fn length(&self) -> f64 {
        self.left.dist(self.right)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// The ribbon piece around one edge: bounded by the creases (or straight
/// cross-segments) at both ends and the two offset lines at distance w/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Face {
    pub edge: usize,
    pub start_left: Point2,
    pub end_left: Point2,
    pub start_right: Point2,
    pub end_right: Point2,
}

impl Face {
    /// Counterclockwise corner ring with repeated corners removed.
    pub fn polygon(&self) -> Vec<Point2> {
        let ring = [self.start_right, self.end_right, self.end_left, self.start_left];
        let scale = ring.iter().map(|p| p.x.abs().max(p.y.abs())).fold(1.0, f64::max);
        dedup_ring(&ring, EPS * EPS * scale)
    }

    pub fn corners(&self) -> [Point2; 4] {
        [self.start_right, self.end_right, self.end_left, self.start_left]
    }

    pub fn side(&self, side: Side) -> (Point2, Point2) {
        match side {
            Side::Left => (self.start_left, self.end_left),
            Side::Right => (self.start_right, self.end_right),
        }
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.corners())
    }
}

/// A boundary piece: one side of one face, oriented along its edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundarySegment {
    pub face: usize,
    pub side: Side,
    pub from: Point2,
    pub to: Point2,
}

/// One closed boundary curve of the ribbon over a diagram component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryLoop {
    pub component: usize,
    pub segments: Vec<BoundarySegment>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandType {
    Annulus,
    Moebius,
}

impl BandType {
    /// Moebius iff the fold count is odd.
    pub fn from_fold_count(folds: usize) -> BandType {
        if folds % 2 == 1 {
            BandType::Moebius
        } else {
            BandType::Annulus
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RibbonGeometry {
    diagram: PolyDiagram,
    width: f64,
    folding: FoldingInfo,
    angles: Vec<FoldAngle>,
    creases: Vec<Option<Crease>>,
    faces: Vec<Face>,
}

impl RibbonGeometry {
    pub fn diagram(&self) -> &PolyDiagram {
        &self.diagram
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn folding(&self) -> &FoldingInfo {
        &self.folding
    }

    pub fn fold_angle(&self, v: usize) -> FoldAngle {
        self.angles[v]
    }

    pub fn crease(&self, v: usize) -> Option<&Crease> {
        self.creases[v].as_ref()
    }

    pub fn creases(&self) -> impl Iterator<Item = &Crease> {
        self.creases.iter().flatten()
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, e: usize) -> &Face {
        &self.faces[e]
    }

    /// Along-edge overhang `(w/2)·tan(θ/2)` of a crease endpoint past its
    /// vertex, signed by turn direction; zero at straight vertices.
    pub fn overhang(&self, v: usize) -> f64 {
        let fa = self.angles[v];
        match fa.turn {
            Turn::Straight => 0.0,
            t => t.signum() * self.width / 2.0 * (fa.theta / 2.0).tan(),
        }
    }

    /// Boundary curves, one or two per diagram component.
    pub fn boundary_components(&self) -> Vec<BoundaryLoop> {
        let k = &self.diagram;
        let mut loops = Vec::new();
        for c in 0..k.num_components() {
            let range = k.component_range(c);
            let first = range.start;
            let mut visited = std::collections::HashSet::new();
            for start_side in [Side::Left, Side::Right] {
                if visited.contains(&(first, start_side)) {
                    continue;
                }
                let mut segments = Vec::new();
                let (mut e, mut side) = (first, start_side);
                loop {
                    visited.insert((e, side));
                    let (from, to) = self.faces[e].side(side);
                    segments.push(BoundarySegment { face: e, side, from, to });
                    let next = k.next_vertex(e);
                    if self.angles[next].is_fold() {
                        side = side.other();
                    }
                    e = next;
                    if e == first && side == start_side {
                        break;
                    }
                }
                loops.push(BoundaryLoop { component: c, segments });
            }
        }
        loops
    }

    pub fn total_face_area(&self) -> f64 {
        self.faces.iter().map(Face::area).sum()
    }
}

/// Builds the folded ribbon of width `w` over `k` with fold choices `f`.
pub fn build_ribbon(k: &PolyDiagram, w: f64, f: &FoldingInfo) -> Result<RibbonGeometry> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(RibbonError::ZeroWidth(w));
    }
    f.check_complete(k)?;
    let m = k.num_edges();
    let angles: Vec<FoldAngle> = (0..m).map(|v| k.fold_angle(v)).collect();
    let creases: Vec<Option<Crease>> = (0..m).map(|v| make_crease(k, v, angles[v], w)).collect();

    // endpoints of the crease or straight cross-segment at v, split by side
    // of the edge `e` (which starts or ends at v)
    let ends_at = |v: usize, e: usize| -> (Point2, Point2) {
        let d = k.edge_direction(e);
        match &creases[v] {
            Some(cr) => {
                if d.cross(cr.left - k.vertex(v)) > d.cross(cr.right - k.vertex(v)) {
                    (cr.left, cr.right)
                } else {
                    (cr.right, cr.left)
                }
            }
            None => {
                let n = d.perp() * (w / 2.0);
                (k.vertex(v) + n, k.vertex(v) - n)
            }
        }
    };

    let faces = (0..m)
        .map(|e| {
            let (start_left, start_right) = ends_at(e, e);
            let (end_left, end_right) = ends_at(k.next_vertex(e), e);
            Face { edge: e, start_left, end_left, start_right, end_right }
        })
        .collect();

    Ok(RibbonGeometry { diagram: k.clone(), width: w, folding: f.clone(), angles, creases, faces })
}

fn make_crease(k: &PolyDiagram, v: usize, fa: FoldAngle, w: f64) -> Option<Crease> {
    if !fa.is_fold() {
        return None;
    }
    let here = k.vertex(v);
    let back = (k.vertex(k.prev_vertex(v)) - here).normalized();
    let fwd = (k.vertex(k.next_vertex(v)) - here).normalized();
    let bisector = (back + fwd).normalized();
    let along = bisector.perp();
    let half = w / (2.0 * (fa.theta / 2.0).cos());
    let (p, q) = (here + along * half, here - along * half);
    let d = k.edge_direction(v);
    let (left, right) = if d.cross(p - here) > 0.0 { (p, q) } else { (q, p) };
    Some(Crease { vertex: v, left, right, theta: fa.theta })
}

/// Band type of a single-component diagram (total fold parity).
pub fn band_type(k: &PolyDiagram) -> BandType {
    BandType::from_fold_count(k.fold_vertices().len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> PolyDiagram {
        PolyDiagram::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(0.0, 1.0),
        ])
        .unwrap()
    }

    fn triangle() -> PolyDiagram {
        PolyDiagram::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 3f64.sqrt() / 2.0)])
            .unwrap()
    }

    fn dist_to_line(p: Point2, a: Point2, b: Point2) -> f64 {
        ((b - a).cross(p - a) / (b - a).norm()).abs()
    }

    #[test]
    fn square_creases() {
        let k = square();
        let r = build_ribbon(&k, 0.2, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
        assert_eq!(r.creases().count(), 4);
        for c in r.creases() {
            assert!((c.length() - 0.2 * 2f64.sqrt()).abs() < 1e-15);
            assert!((c.length() - 0.2828427124746190).abs() < 1e-12);
        }
    }

    #[test]
    fn double_back_crease_is_perpendicular() {
        let k = PolyDiagram::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(1.0, 1.0),
        ])
        .unwrap();
        let f = FoldingInfo::uniform(&k, Fold::Over);
        let r = build_ribbon(&k, 0.3, &f).unwrap();
        let c = r.crease(1).unwrap();
        assert!((c.length() - 0.3).abs() < 1e-15);
        assert!((c.left - c.right).dot(Point2::new(1.0, 0.0)).abs() < 1e-15);
    }

    #[test]
    fn triangle_crease_at_critical_width() {
        let k = triangle();
        let w = 1.0 / 3f64.sqrt();
        let r = build_ribbon(&k, w, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
        for c in r.creases() {
            // formula: (1/√3)/cos(π/6) = 2/3
            assert!((c.length() - 2.0 / 3.0).abs() < 1e-15);
            // coordinate cross-check: the crease is parallel to the opposite edge
            let v = c.vertex;
            let (a, b) = k.edge(k.next_vertex(v));
            assert!((dist_to_line(c.left, a, b) - dist_to_line(c.right, a, b)).abs() < 1e-15);
        }
    }

    #[test]
    fn faces_lie_on_offset_lines() {
        let k = triangle();
        let w = 0.37;
        let r = build_ribbon(&k, w, &FoldingInfo::uniform(&k, Fold::Under)).unwrap();
        for f in r.faces() {
            let (a, b) = k.edge(f.edge);
            for p in f.corners() {
                assert!((dist_to_line(p, a, b) - w / 2.0).abs() < 1e-14);
            }
            // corners on the left really are on the left
            assert!((b - a).cross(f.start_left - a) > 0.0);
            assert!((b - a).cross(f.end_right - a) < 0.0);
        }
    }

    #[test]
    fn creases_are_shared_by_adjacent_faces() {
        let k = square();
        let r = build_ribbon(&k, 0.4, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
        for v in 0..4 {
            let prev = r.face(k.prev_edge(v));
            let next = r.face(v);
            let c = r.crease(v).unwrap();
            // folding swaps sides
            assert_eq!(prev.end_right, next.start_left);
            assert_eq!(prev.end_left, next.start_right);
            assert_eq!(next.start_left, c.left);
        }
    }

    #[test]
    fn straight_vertex_has_cross_segment_only() {
        let k = PolyDiagram::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 0.0),
            Point2::new(2.0, 0.0),
            Point2::new(1.0, 1.0),
        ])
        .unwrap();
        let f = FoldingInfo::uniform(&k, Fold::Over);
        assert!(f.get(1).is_none());
        let r = build_ribbon(&k, 0.1, &f).unwrap();
        assert!(r.crease(1).is_none());
        let (a, b) = (r.face(0).end_left, r.face(1).start_left);
        assert!(a.dist(b) < 1e-15);
        assert!((a.dist(r.face(0).end_right) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        let k = square();
        assert!(matches!(build_ribbon(&k, 0.0, &FoldingInfo::uniform(&k, Fold::Over)), Err(RibbonError::ZeroWidth(_))));
        let mut f = FoldingInfo::uniform(&k, Fold::Over);
        f.folds.remove(&2);
        assert_eq!(build_ribbon(&k, 0.1, &f), Err(RibbonError::MissingFoldChoice(2)));
    }

    #[test]
    fn boundary_parity() {
        let t = triangle();
        let rt = build_ribbon(&t, 0.2, &FoldingInfo::uniform(&t, Fold::Over)).unwrap();
        let loops = rt.boundary_components();
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].segments.len(), 6);
        assert_eq!(band_type(&t), BandType::Moebius);

        let s = square();
        let rs = build_ribbon(&s, 0.2, &FoldingInfo::uniform(&s, Fold::Over)).unwrap();
        let loops = rs.boundary_components();
        assert_eq!(loops.len(), 2);
        assert!(loops.iter().all(|l| l.segments.len() == 4));
        assert_eq!(band_type(&s), BandType::Annulus);
    }

    #[test]
    fn boundary_loops_are_closed_curves() {
        let s = square();
        let rs = build_ribbon(&s, 0.2, &FoldingInfo::uniform(&s, Fold::Under)).unwrap();
        for l in rs.boundary_components() {
            let n = l.segments.len();
            for i in 0..n {
                assert!(l.segments[i].to.dist(l.segments[(i + 1) % n].from) < 1e-15);
            }
        }
    }

    #[test]
    fn face_areas_sum_to_strip_area() {
        // each face is a trapezoid whose parallel sides average |e|
        let k = square();
        let w = 0.3;
        let r = build_ribbon(&k, w, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
        assert!((r.total_face_area() - w * k.length()).abs() < 1e-12);
    }

    #[test]
    fn fold_reflects_the_strip() {
        let k = PolyDiagram::polygon(vec![
            Point2::new(0.0, 0.0),
            Point2::new(3.0, 0.2),
            Point2::new(1.0, 2.0),
            Point2::new(-0.5, 1.1),
        ])
        .unwrap();
        let r = build_ribbon(&k, 0.25, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
        for v in 0..4 {
            let c = r.crease(v).unwrap();
            let axis = (c.left - c.right).normalized();
            let reflect = |p: Point2| {
                let d = p - c.right;
                c.right + axis * (2.0 * d.dot(axis)) - d
            };
            // the far end of e_v reflects onto the line of e_{v-1}
            let (a, b) = k.edge(k.prev_edge(v));
            let img = reflect(k.vertex(k.next_vertex(v)));
            assert!(dist_to_line(img, a, b) < 1e-12, "v={v}");
        }
    }
}
