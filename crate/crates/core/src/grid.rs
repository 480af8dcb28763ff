//! Grid diagrams and their standard conversion to polygonal diagrams.
//!
//! Rows and columns are 0-based internally. Row 0 is the top line of the
//! text form; cell `(r, c)` has its center at `(c + 1/2, n − r − 1/2)`.

use std::fmt;

use crate::diagram::{CrossingAssignment, PolyDiagram};
use crate::error::{Result, RibbonError};
use crate::geom::Point2;
use crate::ribbon::{Fold, FoldingInfo};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GridDiagram {
    n: usize,
    x_cols: Vec<usize>,
    o_cols: Vec<usize>,
}

impl GridDiagram {
    /// Builds a grid from the X and O column of every row.
    pub fn from_columns(x_cols: Vec<usize>, o_cols: Vec<usize>) -> Result<Self> {
        let n = x_cols.len();
        if n == 0 || o_cols.len() != n {
            return Err(RibbonError::BadDimensions(format!(
                "{} X columns and {} O columns",
                x_cols.len(),
                o_cols.len()
            )));
        }
        for r in 0..n {
            if x_cols[r] >= n || o_cols[r] >= n {
                return Err(RibbonError::BadDimensions(format!("row {} has a column outside 1..{n}", r + 1)));
            }
            if x_cols[r] == o_cols[r] {
                return Err(RibbonError::SharedCell { row: r + 1, column: x_cols[r] + 1 });
            }
        }
        check_columns(n, &x_cols, &o_cols)?;
        Ok(GridDiagram { n, x_cols, o_cols })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn x_col(&self, row: usize) -> usize {
        self.x_cols[row]
    }

    pub fn o_col(&self, row: usize) -> usize {
        self.o_cols[row]
    }

    pub fn x_cols(&self) -> &[usize] {
        &self.x_cols
    }

    pub fn o_cols(&self) -> &[usize] {
        &self.o_cols
    }

    /// Row of the X in column `c`.
    pub fn x_row(&self, c: usize) -> usize {
        self.x_cols.iter().position(|&x| x == c).expect("X columns form a permutation")
    }

    /// Row of the O in column `c`.
    pub fn o_row(&self, c: usize) -> usize {
        self.o_cols.iter().position(|&o| o == c).expect("O columns form a permutation")
    }

    /// Reflection in the main diagonal with the X and O roles exchanged.
    pub fn transpose(&self) -> GridDiagram {
        let n = self.n;
        let mut x_cols = vec![0; n];
        let mut o_cols = vec![0; n];
        for r in 0..n {
            o_cols[self.x_cols[r]] = r;
            x_cols[self.o_cols[r]] = r;
        }
        GridDiagram { n, x_cols, o_cols }
    }

    pub fn cell_center(&self, row: usize, col: usize) -> Point2 {
        Point2::new(col as f64 + 0.5, (self.n - row) as f64 - 0.5)
    }

    /// Row cycles traced O → X along a row, then X → O down its column.
    pub fn row_cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut cycles = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut r = start;
            while !seen[r] {
                seen[r] = true;
                cycle.push(r);
                r = self.o_row(self.x_cols[r]);
            }
            cycles.push(cycle);
        }
        cycles
    }
}

fn check_columns(n: usize, x_cols: &[usize], o_cols: &[usize]) -> Result<()> {
    let mut xs = vec![0usize; n];
    let mut os = vec![0usize; n];
    for r in 0..n {
        xs[x_cols[r]] += 1;
        os[o_cols[r]] += 1;
    }
    match (0..n).find(|&c| xs[c] != 1 || os[c] != 1) {
        Some(c) => Err(RibbonError::ColumnViolation { column: c + 1 }),
        None => Ok(()),
    }
}

/// Parses `n` lines of `n` characters from `{., X, O}`.
pub fn parse_grid(text: &str) -> Result<GridDiagram> {
    let mut lines: Vec<&str> = text.split('\n').map(|l| l.strip_suffix('\r').unwrap_or(l)).collect();
    if lines.last() == Some(&"") {
        lines.pop();
    }
    let n = lines.len();
    if n == 0 {
        return Err(RibbonError::BadDimensions("empty grid".into()));
    }
    let mut x_cols = Vec::with_capacity(n);
    let mut o_cols = Vec::with_capacity(n);
    for (r, line) in lines.iter().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        if chars.len() != n {
            return Err(RibbonError::BadDimensions(format!(
                "line {} has {} characters, expected {n}",
                r + 1,
                chars.len()
            )));
        }
        let (mut x, mut o) = (Vec::new(), Vec::new());
        for (c, ch) in chars.iter().enumerate() {
            match ch {
                '.' => {}
                'X' => x.push(c),
                'O' => o.push(c),
                other => {
                    return Err(RibbonError::Parse(format!(
                        "unexpected character {other:?} at row {}, column {}",
                        r + 1,
                        c + 1
                    )))
                }
            }
        }
        if x.len() != 1 || o.len() != 1 {
            return Err(RibbonError::RowViolation { row: r + 1 });
        }
        x_cols.push(x[0]);
        o_cols.push(o[0]);
    }
    check_columns(n, &x_cols, &o_cols)?;
    GridDiagram::from_columns(x_cols, o_cols)
}

impl fmt::Display for GridDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.n {
            let line: String = (0..self.n)
                .map(|c| {
                    if c == self.x_cols[r] {
                        'X'
                    } else if c == self.o_cols[r] {
                        'O'
                    } else {
                        '.'
                    }
                })
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// The polygonal diagram of a grid, with vertical edges over horizontal
/// ones at every crossing and folding information placing the vertical
/// face on top at every corner. The implied ribbon width is 1.
pub fn grid_to_diagram(g: &GridDiagram) -> (PolyDiagram, FoldingInfo) {
    let mut components = Vec::new();
    // per component vertex: true at X corners (outgoing edge vertical)
    let mut at_x = Vec::new();
    for cycle in g.row_cycles() {
        let mut comp = Vec::with_capacity(2 * cycle.len());
        for &r in &cycle {
            comp.push(g.cell_center(r, g.o_cols[r]));
            comp.push(g.cell_center(r, g.x_cols[r]));
            at_x.push(false);
            at_x.push(true);
        }
        components.push(comp);
    }

    let probe = PolyDiagram::new(components.clone(), Vec::new(), Vec::new()).expect("grid cycles are valid polygons");
    let m = probe.num_edges();
    let vertical = |e: usize| {
        let (p, q) = probe.edge(e);
        p.x == q.x
    };
    let mut crossings = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            if vertical(a) == vertical(b) {
                continue;
            }
            let (v, h) = if vertical(a) { (a, b) } else { (b, a) };
            let (v0, v1) = probe.edge(v);
            let (h0, h1) = probe.edge(h);
            let (xlo, xhi) = (h0.x.min(h1.x), h0.x.max(h1.x));
            let (ylo, yhi) = (v0.y.min(v1.y), v0.y.max(v1.y));
            if xlo < v0.x && v0.x < xhi && ylo < h0.y && h0.y < yhi {
                crossings.push(CrossingAssignment { edge_a: a, edge_b: b, index: 0, over: v });
            }
        }
    }
    let k = PolyDiagram::new(components, crossings, Vec::new()).expect("grid crossings are transversal");
    let folds = at_x.iter().enumerate().map(|(v, &x)| (v, if x { Fold::Over } else { Fold::Under })).collect();
    (k, FoldingInfo::new(folds))
}

/// Total horizontal plus vertical marker distance, in cell units.
pub fn grid_ribbonlength(g: &GridDiagram) -> f64 {
    let horizontal: usize = (0..g.n).map(|r| g.x_cols[r].abs_diff(g.o_cols[r])).sum();
    let vertical: usize = (0..g.n).map(|c| g.x_row(c).abs_diff(g.o_row(c))).sum();
    (horizontal + vertical) as f64
}
