//! Ribbonlength, ribbon linking number, equivalence evidence and bound audits.

use serde::{Deserialize, Serialize};

use crate::diagram::PolyDiagram;
use crate::error::{Result, RibbonError};
use crate::geom::half_open_crossing;
use crate::ribbon::{band_type, build_ribbon, BandType, FoldingInfo};
use crate::validity::{check_allowed, Layering};

/// `Len(K) / w`.
pub fn ribbonlength(k: &PolyDiagram, w: f64) -> Result<f64> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(RibbonError::ZeroWidth(w));
    }
    Ok(k.length() / w)
}

/// Linking number of the centerline with each boundary loop of the ribbon,
/// in the order of `RibbonGeometry::boundary_components`.
pub fn ribbon_linking_number(k: &PolyDiagram, w: f64, f: &FoldingInfo, layering: &Layering) -> Result<Vec<i64>> {
    let r = build_ribbon(k, w, f)?;
    let mut out = Vec::new();
    for lp in r.boundary_components() {
        let mut sum = 0i64;
        for seg in &lp.segments {
            for e in 0..k.num_edges() {
                if e == seg.face {
                    continue;
                }
                let (c0, c1) = k.edge(e);
                let Some(point) = half_open_crossing(seg.from, seg.to, c0, c1) else {
                    continue;
                };
                let boundary_over = layering.is_above(seg.face, e).ok_or(RibbonError::UnresolvedCrossing {
                    face_a: seg.face,
                    face_b: e,
                    x: point.x,
                    y: point.y,
                })?;
                let db = seg.to - seg.from;
                let dc = c1 - c0;
                let s = if boundary_over { db.cross(dc) } else { dc.cross(db) };
                sum += if s > 0.0 { 1 } else { -1 };
            }
        }
        if sum % 2 != 0 {
            return Err(RibbonError::OddCrossingSum(sum));
        }
        out.push(sum / 2);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RibbonInvariants {
    pub ribbonlength: f64,
    pub width: f64,
    pub linking_numbers: Vec<i64>,
    /// Set when the boundary loops of an annulus give different values.
    pub linking_numbers_differ: bool,
    pub band_type: BandType,
    pub boundary_components: usize,
    pub diagram_crossing_count: usize,
}

impl RibbonInvariants {
    /// The linking number used for comparisons: the common value of all
    /// boundary loops, or `None` when they differ.
    pub fn linking_number(&self) -> Option<i64> {
        if self.linking_numbers_differ {
            None
        } else {
            self.linking_numbers.first().copied()
        }
    }
}

/// All invariants of an allowed ribbon.
pub fn ribbon_invariants(k: &PolyDiagram, w: f64, f: &FoldingInfo) -> Result<RibbonInvariants> {
    let report = check_allowed(k, w, f)?;
    let layering = report.layering.ok_or(RibbonError::NotAllowed(w))?;
    let linking_numbers = ribbon_linking_number(k, w, f, &layering)?;
    let linking_numbers_differ = linking_numbers.windows(2).any(|p| p[0] != p[1]);
    Ok(RibbonInvariants {
        ribbonlength: ribbonlength(k, w)?,
        width: w,
        boundary_components: linking_numbers.len(),
        linking_numbers,
        linking_numbers_differ,
        band_type: band_type(k),
        diagram_crossing_count: k.find_crossings()?.len(),
    })
}

/// Absolute value of the determinant of a knot diagram, from its coloring
/// matrix. `None` for links.
pub fn knot_determinant(k: &PolyDiagram) -> Result<Option<u64>> {
    if k.num_components() != 1 {
        return Ok(None);
    }
    let crossings = k.find_crossings()?;
    let c = crossings.len();
    if c == 0 {
        return Ok(Some(1));
    }
    // crossing events along the traversal: (edge, parameter, crossing, is_under)
    let mut events = Vec::with_capacity(2 * c);
    for (i, x) in crossings.iter().enumerate() {
        for (e, under) in [(x.over_edge, false), (x.under_edge, true)] {
            let (p, q) = k.edge(e);
            let t = (x.point - p).dot(q - p) / (q - p).dot(q - p);
            events.push((e, t, i, under));
        }
    }
    events.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut arc = 0usize;
    let mut over_arc = vec![0usize; c];
    let mut under_arcs = vec![(0usize, 0usize); c];
    for &(_, _, i, under) in &events {
        if under {
            under_arcs[i].0 = arc;
            arc += 1;
            under_arcs[i].1 = arc % c;
        } else {
            over_arc[i] = arc;
        }
    }
    // arcs after the last undercrossing continue the first arc
    for a in over_arc.iter_mut() {
        *a %= c;
    }
    let mut matrix = vec![vec![0i128; c]; c];
    for i in 0..c {
        matrix[i][over_arc[i]] += 2;
        matrix[i][under_arcs[i].0] -= 1;
        matrix[i][under_arcs[i].1] -= 1;
    }
    let minor: Vec<Vec<i128>> = matrix[..c - 1].iter().map(|row| row[..c - 1].to_vec()).collect();
    Ok(Some(bareiss_determinant(minor).unsigned_abs() as u64))
}

/// Fraction-free Gaussian elimination.
fn bareiss_determinant(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "witness")]
pub enum Verdict {
    Distinguished(String),
    NotDistinguished,
    Unknown,
}

impl Verdict {
    pub fn is_distinguished(&self) -> bool {
        matches!(self, Verdict::Distinguished(_))
    }
}

/// Evidence at the three equivalence levels, finest first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EquivalenceEvidence {
    pub link: Verdict,
    pub topological: Verdict,
    pub diagram: Verdict,
    /// Set when an annulus has boundary loops with different linking numbers.
    pub warnings: Vec<String>,
}

/// A ribbon given by its diagram, width and folding information.
#[derive(Debug, Clone, Copy)]
pub struct RibbonSpec<'a> {
    pub diagram: &'a PolyDiagram,
    pub width: f64,
    pub folding: &'a FoldingInfo,
}

/// Compares two allowed ribbons. Knot equivalence itself is never decided:
/// the diagram level is `Unknown` unless a computed invariant differs or the
/// diagrams are identical.
pub fn compare_equivalence(r1: RibbonSpec<'_>, r2: RibbonSpec<'_>) -> Result<EquivalenceEvidence> {
    let i1 = ribbon_invariants(r1.diagram, r1.width, r1.folding)?;
    let i2 = ribbon_invariants(r2.diagram, r2.width, r2.folding)?;
    let mut warnings = Vec::new();
    for (name, inv) in [("first", &i1), ("second", &i2)] {
        if inv.linking_numbers_differ {
            warnings.push(format!("{name} ribbon has boundary linking numbers {:?}", inv.linking_numbers));
        }
    }

    let (k1, k2) = (r1.diagram, r2.diagram);
    let diagram = if k1.num_components() != k2.num_components() {
        Verdict::Distinguished(format!("{} vs {} components", k1.num_components(), k2.num_components()))
    } else {
        match (knot_determinant(k1)?, knot_determinant(k2)?) {
            (Some(d1), Some(d2)) if d1 != d2 => Verdict::Distinguished(format!("determinant {d1} vs {d2}")),
            _ if k1 == k2 => Verdict::NotDistinguished,
            _ => Verdict::Unknown,
        }
    };

    let topological = if diagram.is_distinguished() {
        diagram.clone()
    } else if i1.band_type != i2.band_type {
        Verdict::Distinguished(format!("{:?} vs {:?}", i1.band_type, i2.band_type))
    } else {
        Verdict::NotDistinguished
    };

    let link = if topological.is_distinguished() {
        topological.clone()
    } else {
        match (i1.linking_number(), i2.linking_number()) {
            (Some(a), Some(b)) if a.abs() != b.abs() => {
                Verdict::Distinguished(format!("|Lk| {} vs {}", a.abs(), b.abs()))
            }
            (Some(_), Some(_)) => Verdict::NotDistinguished,
            _ => Verdict::Unknown,
        }
    };
    Ok(EquivalenceEvidence { link, topological, diagram, warnings })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum FamilyTag {
    Torus { p: u32, q: u32 },
    Twist { n: u32 },
    Unknot,
}

/// A knot family with a tabulated crossing number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownFamily {
    pub tag: FamilyTag,
    pub crossing_number: u64,
    pub grid_index_bound: u64,
}

impl KnownFamily {
    pub fn torus(p: u32, q: u32) -> Result<Self> {
        if !(p > q && q >= 2 && gcd(p, q) == 1) {
            return Err(RibbonError::BadParameters(format!("torus knot needs p > q >= 2 coprime, got ({p}, {q})")));
        }
        let (p64, q64) = (p as u64, q as u64);
        let cr = (p64 * (q64 - 1)).min(q64 * (p64 - 1));
        Ok(KnownFamily { tag: FamilyTag::Torus { p, q }, crossing_number: cr, grid_index_bound: cr + 2 })
    }

    pub fn twist(n: u32) -> Result<Self> {
        if n < 1 {
            return Err(RibbonError::BadParameters("twist knot needs n >= 1".into()));
        }
        let cr = n as u64 + 2;
        Ok(KnownFamily { tag: FamilyTag::Twist { n }, crossing_number: cr, grid_index_bound: cr + 2 })
    }

    pub fn unknot() -> Self {
        KnownFamily { tag: FamilyTag::Unknot, crossing_number: 0, grid_index_bound: 2 }
    }
}

pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundAudit {
    pub family: KnownFamily,
    pub ribbonlength: f64,
    pub crossing_number: u64,
    pub eight_cr: f64,
    /// `2(Cr + 1)(Cr + 2)`, the grid bound at the largest grid index.
    pub grid_bound: f64,
    pub twelve_cr_squared: f64,
    pub within_eight_cr: bool,
    pub within_grid_bound: bool,
    pub within_twelve_cr_squared: bool,
    /// `Rib / Cr`, absent for the unknot.
    pub ratio: Option<f64>,
}

/// Compares the ribbonlength of `(k, w)` with the crossing-number bounds.
pub fn audit_bounds(k: &PolyDiagram, w: f64, family: KnownFamily) -> Result<BoundAudit> {
    let rib = ribbonlength(k, w)?;
    let cr = family.crossing_number;
    let crf = cr as f64;
    let eight_cr = 8.0 * crf;
    let grid_bound = 2.0 * (crf + 1.0) * (crf + 2.0);
    let twelve_cr_squared = 12.0 * crf * crf;
    let slack = 1e-9 * rib.max(1.0);
    Ok(BoundAudit {
        family,
        ribbonlength: rib,
        crossing_number: cr,
        eight_cr,
        grid_bound,
        twelve_cr_squared,
        within_eight_cr: rib <= eight_cr + slack,
        within_grid_bound: rib <= grid_bound + slack,
        within_twelve_cr_squared: rib <= twelve_cr_squared + slack,
        ratio: (cr > 0).then(|| rib / crf),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;
    use crate::grid::{grid_to_diagram, GridDiagram};
    use crate::ribbon::Fold;
    use std::f64::consts::PI;

    fn triangle() -> PolyDiagram {
        PolyDiagram::polygon(vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(0.5, 3f64.sqrt() / 2.0)])
            .unwrap()
    }

    fn ngon(n: usize) -> PolyDiagram {
        let r = 1.0 / (2.0 * (PI / n as f64).sin());
        PolyDiagram::polygon(
            (0..n)
                .map(|k| {
                    let phi = -PI / 2.0 - PI / n as f64 + 2.0 * PI * k as f64 / n as f64;
                    Point2::new(r * phi.cos(), r * phi.sin())
                })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn ribbonlength_basics() {
        let k = triangle();
        assert!((ribbonlength(&k, 1.0 / 3f64.sqrt()).unwrap() - 3.0 * 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(ribbonlength(&k, 3.0).unwrap(), 1.0);
        assert!(matches!(ribbonlength(&k, 0.0), Err(RibbonError::ZeroWidth(_))));
    }

    #[test]
    fn square_linking_number() {
        let k = ngon(4);
        let inv = ribbon_invariants(&k, 0.1, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
        assert_eq!(inv.linking_numbers, vec![-2, -2]);
        assert_eq!(inv.band_type, BandType::Annulus);
    }

    #[test]
    fn triangle_linking_numbers() {
        let k = triangle();
        let same = ribbon_invariants(&k, 0.3, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
        assert_eq!(same.linking_numbers.len(), 1);
        assert_eq!(same.linking_numbers[0].abs(), 3);
        let mut f = FoldingInfo::uniform(&k, Fold::Over);
        f.set(2, Fold::Under);
        let mixed = ribbon_invariants(&k, 0.3, &f).unwrap();
        assert_eq!(mixed.linking_numbers[0].abs(), 1);
    }

    #[test]
    fn ngon_linking_numbers() {
        for n in 3..=9 {
            let k = ngon(n);
            let inv = ribbon_invariants(&k, 0.01, &FoldingInfo::uniform(&k, Fold::Over)).unwrap();
            let expected = if n % 2 == 1 { n as i64 } else { n as i64 / 2 };
            for lk in &inv.linking_numbers {
                assert_eq!(lk.abs(), expected, "n = {n}");
            }
        }
    }

    #[test]
    fn unknot_determinant_is_one() {
        assert_eq!(knot_determinant(&triangle()).unwrap(), Some(1));
        assert_eq!(knot_determinant(&ngon(7)).unwrap(), Some(1));
    }

    #[test]
    fn trefoil_grid_determinant() {
        let g = GridDiagram::from_columns((0..5).collect(), (0..5).map(|i| (i + 2) % 5).collect()).unwrap();
        let (k, _) = grid_to_diagram(&g);
        assert_eq!(knot_determinant(&k).unwrap(), Some(3));
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        fn cofactor(m: &[Vec<i128>]) -> i128 {
            if m.len() == 1 {
                return m[0][0];
            }
            (0..m.len())
                .map(|j| {
                    let sub: Vec<Vec<i128>> = m[1..]
                        .iter()
                        .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect())
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * cofactor(&sub)
                })
                .sum()
        }
        let m = vec![vec![0, 2, -1, 3], vec![1, -1, 4, 0], vec![2, 0, 0, -2], vec![5, 1, -3, 1]];
        assert_eq!(bareiss_determinant(m.clone()), cofactor(&m));
    }

    #[test]
    fn compare_triangles() {
        let k = triangle();
        let same = FoldingInfo::uniform(&k, Fold::Over);
        let mut mixed = same.clone();
        mixed.set(0, Fold::Under);
        let a = RibbonSpec { diagram: &k, width: 0.3, folding: &same };
        let b = RibbonSpec { diagram: &k, width: 0.3, folding: &mixed };
        let ev = compare_equivalence(a, b).unwrap();
        assert!(ev.link.is_distinguished());
        assert_eq!(ev.topological, Verdict::NotDistinguished);
        assert_eq!(ev.diagram, Verdict::NotDistinguished);
        let ev = compare_equivalence(a, a).unwrap();
        assert_eq!(
            (ev.link, ev.topological, ev.diagram),
            (Verdict::NotDistinguished, Verdict::NotDistinguished, Verdict::NotDistinguished)
        );
    }

    #[test]
    fn compare_three_and_four_sticks() {
        let (k3, k4) = (triangle(), ngon(4));
        let (f3, f4) = (FoldingInfo::uniform(&k3, Fold::Over), FoldingInfo::uniform(&k4, Fold::Over));
        let ev = compare_equivalence(
            RibbonSpec { diagram: &k3, width: 0.1, folding: &f3 },
            RibbonSpec { diagram: &k4, width: 0.1, folding: &f4 },
        )
        .unwrap();
        assert!(ev.topological.is_distinguished());
        assert!(ev.link.is_distinguished());
        assert_eq!(ev.diagram, Verdict::Unknown);
    }

    #[test]
    fn audit_arithmetic() {
        for cr in 2..200u64 {
            let c = cr as f64;
            assert!(2.0 * (c + 1.0) * (c + 2.0) <= 12.0 * c * c);
        }
        let fam = KnownFamily::torus(5, 3).unwrap();
        assert_eq!(fam.crossing_number, 10);
        assert_eq!(KnownFamily::twist(3).unwrap().crossing_number, 5);
        assert!(KnownFamily::torus(4, 2).is_err());
        assert!(KnownFamily::torus(2, 3).is_err());
    }
}
