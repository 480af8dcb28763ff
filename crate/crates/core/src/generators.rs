//! Named instances: regular n-gon unknots, the 2-stick unknot, the
//! pentagram trefoil, and grid families for torus and twist knots.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{CrossingAssignment, DegenerateOverlap, PolyDiagram};
use crate::error::{Result, RibbonError};
use crate::geom::{segment_intersection, Point2, SegmentIntersection};
use crate::grid::GridDiagram;
use crate::invariants::gcd;
use crate::ribbon::{Fold, FoldingInfo};
use crate::validity::max_width;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Ngon { n: usize, fold_pattern: Vec<Fold> },
    TwoStick { length: f64 },
    PentagramTrefoil { circumradius: f64 },
    TorusGrid { p: u32, q: u32 },
    TwistGrid { n: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Diagram(PolyDiagram, FoldingInfo),
    Grid(GridDiagram),
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Generated> {
        Ok(match self {
            GeneratorSpec::Ngon { n, fold_pattern } => {
                let (k, f) = ngon_unknot(*n, fold_pattern)?;
                Generated::Diagram(k, f)
            }
            GeneratorSpec::TwoStick { length } => {
                let (k, f) = two_stick_unknot(*length)?;
                Generated::Diagram(k, f)
            }
            GeneratorSpec::PentagramTrefoil { circumradius } => {
                let (k, f) = pentagram_trefoil(*circumradius)?;
                Generated::Diagram(k, f)
            }
            GeneratorSpec::TorusGrid { p, q } => Generated::Grid(torus_grid(*p, *q)?),
            GeneratorSpec::TwistGrid { n } => Generated::Grid(twist_grid(*n)?),
        })
    }
}

/// Parses a pattern such as `OOU`.
pub fn parse_fold_pattern(s: &str) -> Result<Vec<Fold>> {
    s.chars()
        .map(|c| Fold::from_char(c).ok_or_else(|| RibbonError::Parse(format!("bad fold character {c:?}"))))
        .collect()
}

/// Vertices of the regular counterclockwise n-gon with unit sides; edge 0
/// is horizontal at the bottom.
pub fn regular_polygon(n: usize) -> Vec<Point2> {
    let r = 1.0 / (2.0 * (PI / n as f64).sin());
    (0..n)
        .map(|k| {
            let phi = -PI / 2.0 - PI / n as f64 + 2.0 * PI * k as f64 / n as f64;
            Point2::new(r * phi.cos(), r * phi.sin())
        })
        .collect()
}

/// Regular unit-side n-gon with `fold_pattern[i]` at vertex `i`.
pub fn ngon_unknot(n: usize, fold_pattern: &[Fold]) -> Result<(PolyDiagram, FoldingInfo)> {
    if n < 3 {
        return Err(RibbonError::BadParameters(format!("n-gon needs n >= 3, got {n}")));
    }
    if fold_pattern.len() != n {
        return Err(RibbonError::BadPatternLength { expected: n, got: fold_pattern.len() });
    }
    let k = PolyDiagram::polygon(regular_polygon(n))?;
    let f = FoldingInfo::new(fold_pattern.iter().copied().enumerate().collect());
    Ok((k, f))
}

/// Two coincident edges of length `length`, folded back at both ends, with
/// edge 1 lying over edge 0.
pub fn two_stick_unknot(length: f64) -> Result<(PolyDiagram, FoldingInfo)> {
    if !(length > 0.0) || !length.is_finite() {
        return Err(RibbonError::BadParameters(format!("length must be positive, got {length}")));
    }
    let k = PolyDiagram::new(
        vec![vec![Point2::new(0.0, 0.0), Point2::new(length, 0.0)]],
        Vec::new(),
        vec![DegenerateOverlap { edge_a: 0, edge_b: 1, over: 1 }],
    )?;
    let f = FoldingInfo::new([(0, Fold::Under), (1, Fold::Over)].into_iter().collect());
    Ok((k, f))
}

/// The {5/2} star polygon with alternating crossings and the fold pattern
/// admitting the largest width among all 32 choices.
pub fn pentagram_trefoil(circumradius: f64) -> Result<(PolyDiagram, FoldingInfo)> {
    let k = pentagram_diagram(circumradius)?;
    let f = best_fold_pattern(&k, 1e-9)?;
    Ok((k, f))
}

/// The pentagram diagram alone, without folding information. Alternating
/// crossings on the {5/2} star give the (5, 2) torus knot; one crossing is
/// switched to obtain the trefoil.
pub fn pentagram_diagram(circumradius: f64) -> Result<PolyDiagram> {
    if !(circumradius > 0.0) || !circumradius.is_finite() {
        return Err(RibbonError::BadParameters(format!("circumradius must be positive, got {circumradius}")));
    }
    let pts: Vec<Point2> = (0..5)
        .map(|k| {
            let a = PI / 2.0 + 2.0 * PI * (2 * k) as f64 / 5.0;
            Point2::new(circumradius * a.cos(), circumradius * a.sin())
        })
        .collect();
    let alt = alternating(vec![pts.clone()])?;
    let crossings = alt
        .crossing_assignments()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let mut c = *c;
            if i == 0 {
                c.over = if c.over == c.edge_a { c.edge_b } else { c.edge_a };
            }
            c
        })
        .collect();
    PolyDiagram::new(vec![pts], crossings, Vec::new())
}

/// Assigns alternating over/under along the traversal of a single closed
/// polygon whose self-intersections are all transversal.
pub fn alternating(components: Vec<Vec<Point2>>) -> Result<PolyDiagram> {
    let probe = PolyDiagram::new(components.clone(), Vec::new(), Vec::new())?;
    let m = probe.num_edges();
    // (edge, parameter, pair index)
    let mut events = Vec::new();
    let mut pairs = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if probe.edges_adjacent(a, b) {
                continue;
            }
            let (p0, p1) = probe.edge(a);
            let (q0, q1) = probe.edge(b);
            if let SegmentIntersection::Proper { t, u, .. } = segment_intersection(p0, p1, q0, q1) {
                events.push((a, t, pairs.len()));
                events.push((b, u, pairs.len()));
                pairs.push((a, b));
            }
        }
    }
    events.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut over: Vec<Option<usize>> = vec![None; pairs.len()];
    for (j, &(edge, _, i)) in events.iter().enumerate() {
        let on_top = j % 2 == 0;
        let (a, b) = pairs[i];
        let other = if edge == a { b } else { a };
        let want = if on_top { edge } else { other };
        match over[i] {
            None => over[i] = Some(want),
            Some(prev) if prev != want => {
                return Err(RibbonError::InvalidDiagram("crossings cannot alternate along this diagram".into()))
            }
            Some(_) => {}
        }
    }
    let crossings = pairs
        .iter()
        .zip(&over)
        .map(|(&(a, b), o)| CrossingAssignment { edge_a: a, edge_b: b, index: 0, over: o.unwrap() })
        .collect();
    PolyDiagram::new(components, crossings, Vec::new())
}

/// Fold pattern with the largest maximal width over all 2^folds choices;
/// ties within 1e-9 go to the lowest pattern index (bit i set = Under at
/// the i-th fold vertex).
pub fn best_fold_pattern(k: &PolyDiagram, tol: f64) -> Result<FoldingInfo> {
    let folds = k.fold_vertices();
    if folds.len() > 16 {
        return Err(RibbonError::BadParameters(format!("{} fold vertices is too many to enumerate", folds.len())));
    }
    let patterns: Vec<FoldingInfo> = (0u32..1 << folds.len())
        .map(|bits| {
            FoldingInfo::new(
                folds
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v, if bits >> i & 1 == 1 { Fold::Under } else { Fold::Over }))
                    .collect(),
            )
        })
        .collect();
    let widths: Vec<f64> = patterns
        .par_iter()
        .map(|f| match max_width(k, f, tol) {
            Ok(mw) => mw.width().unwrap_or(f64::INFINITY),
            Err(_) => 0.0,
        })
        .collect();
    let mut best = 0;
    for i in 1..widths.len() {
        if widths[i] > widths[best] + 1e-9 {
            best = i;
        }
    }
    if widths[best] <= 0.0 {
        return Err(RibbonError::NoPositiveWidth);
    }
    Ok(patterns[best].clone())
}

/// Grid of the (p, q) torus knot: X on the diagonal, O shifted q columns.
pub fn torus_grid(p: u32, q: u32) -> Result<GridDiagram> {
    if !(p > q && q >= 2 && gcd(p, q) == 1) {
        return Err(RibbonError::BadParameters(format!("torus grid needs p > q >= 2 coprime, got ({p}, {q})")));
    }
    let n = (p + q) as usize;
    let q = q as usize;
    GridDiagram::from_columns((0..n).collect(), (0..n).map(|i| (i + q) % n).collect())
}

/// Staircase grid of the twist knot with `n` half twists, grid number
/// `n + 4`.
pub fn twist_grid(n: u32) -> Result<GridDiagram> {
    if n < 1 {
        return Err(RibbonError::BadParameters("twist grid needs n >= 1".into()));
    }
    let n = n as usize;
    let g = n + 4;
    let mut x = vec![0; g];
    let mut o = vec![0; g];
    let mut set = |r: usize, xc: usize, oc: usize| {
        x[r] = xc;
        o[r] = oc;
    };
    set(0, 0, 3);
    for i in 1..=n {
        if i % 2 == 1 {
            set(i, i + 3, i + 1);
        } else {
            set(i, i + 1, i + 3);
        }
    }
    let even = n % 2 == 0;
    if even {
        set(n + 1, 1, n + 2);
    } else {
        set(n + 1, n + 2, 1);
    }
    set(n + 2, 2, 0);
    if even {
        set(n + 3, n + 3, 1);
    } else {
        set(n + 3, 1, n + 3);
    }
    GridDiagram::from_columns(x, o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{grid_ribbonlength, grid_to_diagram};
    use crate::invariants::knot_determinant;
    use crate::ribbon::band_type;
    use crate::ribbon::BandType;
    use crate::validity::check_allowed;

    #[test]
    fn ngon_shape() {
        let (k, f) = ngon_unknot(6, &parse_fold_pattern("OOOOOO").unwrap()).unwrap();
        for e in 0..6 {
            assert!((k.edge_length(e) - 1.0).abs() < 1e-12);
        }
        assert!(crate::geom::signed_area(k.components()[0].as_slice()) > 0.0);
        assert_eq!(f.len(), 6);
        assert!(matches!(
            ngon_unknot(4, &parse_fold_pattern("OOO").unwrap()),
            Err(RibbonError::BadPatternLength { expected: 4, got: 3 })
        ));
        assert!(matches!(ngon_unknot(2, &[Fold::Over; 2]), Err(RibbonError::BadParameters(_))));
        assert!(parse_fold_pattern("OXU").is_err());
    }

    #[test]
    fn two_stick() {
        let (k, f) = two_stick_unknot(1.0).unwrap();
        assert_eq!(band_type(&k), BandType::Annulus);
        assert!(check_allowed(&k, 1e6, &f).unwrap().allowed);
        let (k2, _) = two_stick_unknot(2.0).unwrap();
        assert_eq!(k2.length(), 2.0 * k.length());
        assert!(two_stick_unknot(0.0).is_err());
    }

    #[test]
    fn alternating_star_is_the_cinquefoil() {
        let pts = (0..5)
            .map(|k| {
                let a = PI / 2.0 + 4.0 * PI * k as f64 / 5.0;
                Point2::new(a.cos(), a.sin())
            })
            .collect();
        let k = alternating(vec![pts]).unwrap();
        assert_eq!(knot_determinant(&k).unwrap(), Some(5));
    }

    #[test]
    fn pentagram() {
        let k = pentagram_diagram(1.0).unwrap();
        assert_eq!(k.num_edges(), 5);
        assert_eq!(k.find_crossings().unwrap().len(), 5);
        assert_eq!(band_type(&k), BandType::Moebius);
        assert_eq!(knot_determinant(&k).unwrap(), Some(3));
    }

    #[test]
    fn torus_grids() {
        let g = torus_grid(5, 3).unwrap();
        assert_eq!(g.n(), 8);
        assert_eq!(grid_ribbonlength(&g), 60.0);
        assert!(torus_grid(4, 2).is_err());
        assert!(torus_grid(3, 5).is_err());
        for p in 3..=8u32 {
            for q in 2..p {
                if gcd(p, q) != 1 {
                    continue;
                }
                let g = torus_grid(p, q).unwrap();
                let (k, _) = grid_to_diagram(&g);
                assert_eq!(k.num_components(), 1);
                // shifting by p instead of q mirrors the grid
                let n = (p + q) as usize;
                let mirror =
                    GridDiagram::from_columns((0..n).collect(), (0..n).map(|i| (i + p as usize) % n).collect())
                        .unwrap();
                assert_eq!(grid_ribbonlength(&mirror), grid_ribbonlength(&g));
                assert_eq!(grid_ribbonlength(&g), (4 * p * q) as f64);
            }
        }
    }

    #[test]
    fn torus_determinants() {
        // torus knots (p, 2) have determinant p
        for p in [3u32, 5, 7] {
            let (k, _) = grid_to_diagram(&torus_grid(p, 2).unwrap());
            assert_eq!(knot_determinant(&k).unwrap(), Some(p as u64));
        }
    }

    #[test]
    fn twist_grids() {
        for n in 1..=6u32 {
            let g = twist_grid(n).unwrap();
            assert_eq!(grid_ribbonlength(&g), (8 * n + 16) as f64);
            let (k, _) = grid_to_diagram(&g);
            assert_eq!(k.num_components(), 1);
            assert_eq!(k.find_crossings().unwrap().len(), n as usize + 2);
            // twist knots with n half twists have determinant 2n + 1
            assert_eq!(knot_determinant(&k).unwrap(), Some(2 * n as u64 + 1), "n = {n}");
        }
        assert!(twist_grid(0).is_err());
    }
}
