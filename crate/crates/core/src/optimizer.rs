//! Coordinate descent on vertex positions at fixed combinatorics.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagram::{PolyDiagram, Turn};
use crate::error::{Result, RibbonError};
use crate::geom::Point2;
use crate::ribbon::FoldingInfo;
use crate::validity::max_width;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerParams {
    /// Initial step as a fraction of the shortest edge.
    pub initial_step: f64,
    /// Factor applied to the step after a sweep without improvement.
    pub decay: f64,
    /// Smallest step, as a fraction of the initial shortest edge.
    pub min_step: f64,
    /// Cap on accepted moves.
    pub max_iterations: usize,
    /// Tolerance of the width bisection.
    pub width_tol: f64,
}

impl Default for OptimizerParams {
    fn default() -> Self {
        OptimizerParams { initial_step: 0.05, decay: 0.5, min_step: 1e-6, max_iterations: 500, width_tol: 1e-9 }
    }
}

impl OptimizerParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.initial_step, self.min_step, self.width_tol].iter().all(|x| *x > 0.0 && x.is_finite());
        if !positive || !(self.decay > 0.0 && self.decay < 1.0) || self.max_iterations == 0 {
            return Err(RibbonError::BadParameters(format!("invalid optimizer parameters {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub ribbonlength: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub diagram: PolyDiagram,
    pub width: f64,
    pub ribbonlength: f64,
    /// Starting point, then one entry per accepted move.
    pub trace: Vec<TraceEntry>,
}

/// Crossing pairs with their over-edges and signs, plus the turn at every
/// vertex. Accepted moves keep this fixed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    crossings: Vec<(usize, usize, usize, i8)>,
    turns: Vec<Turn>,
}

pub fn signature(k: &PolyDiagram) -> Result<Signature> {
    let crossings = k.find_crossings()?.iter().map(|c| (c.edge_a, c.edge_b, c.over_edge, c.sign)).collect();
    let turns = (0..k.num_edges()).map(|v| k.fold_angle(v).turn).collect();
    Ok(Signature { crossings, turns })
}

const DIRECTIONS: [(f64, f64); 8] = [
    (1.0, 0.0),
    (-1.0, 0.0),
    (0.0, 1.0),
    (0.0, -1.0),
    (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    (-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
    (std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2),
    (-std::f64::consts::FRAC_1_SQRT_2, -std::f64::consts::FRAC_1_SQRT_2),
];

/// Minimal improvement for a move to count.
pub const MIN_IMPROVEMENT: f64 = 1e-12;

fn objective(k: &PolyDiagram, f: &FoldingInfo, tol: f64) -> Option<(f64, f64)> {
    let w = max_width(k, f, tol).ok()?.width()?;
    Some((k.length() / w, w))
}

/// Locally minimizes `Len(K) / max_width(K, F)` by single-vertex moves that
/// keep the crossing pattern and every turn direction.
pub fn minimize_ribbonlength(k: &PolyDiagram, f: &FoldingInfo, params: &OptimizerParams) -> Result<OptimizeResult> {
    params.validate()?;
    f.check_complete(k)?;
    let sig = signature(k)?;
    let (mut rib, mut width) = objective(k, f, params.width_tol).ok_or(RibbonError::InfeasibleStart)?;
    let scale = k.shortest_edge();
    let mut step = params.initial_step * scale;
    let min_step = params.min_step * scale;
    let mut current = k.clone();
    let mut trace = vec![TraceEntry { iteration: 0, ribbonlength: rib, width }];

    while step >= min_step && trace.len() <= params.max_iterations {
        let moves: Vec<(usize, usize)> =
            (0..current.num_edges()).flat_map(|v| (0..DIRECTIONS.len()).map(move |d| (v, d))).collect();
        let evaluated: Vec<Option<(f64, f64, PolyDiagram)>> = moves
            .par_iter()
            .map(|&(v, d)| {
                let (dx, dy) = DIRECTIONS[d];
                let p = current.vertex(v) + Point2::new(dx, dy) * step;
                let cand = current.with_vertex(v, p).ok()?;
                if signature(&cand).ok()? != sig {
                    return None;
                }
                let (r, w) = objective(&cand, f, params.width_tol)?;
                Some((r, w, cand))
            })
            .collect();
        // first strictly best move in (vertex, direction) order
        let mut best: Option<(f64, f64, PolyDiagram)> = None;
        for (r, w, cand) in evaluated.into_iter().flatten() {
            if rib - r > MIN_IMPROVEMENT && best.as_ref().map_or(true, |b| r < b.0) {
                best = Some((r, w, cand));
            }
        }
        match best {
            Some((r, w, cand)) => {
                rib = r;
                width = w;
                current = cand;
                trace.push(TraceEntry { iteration: trace.len(), ribbonlength: rib, width });
            }
            None => step *= params.decay,
        }
    }
    Ok(OptimizeResult { diagram: current, width, ribbonlength: rib, trace })
}
