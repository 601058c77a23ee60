//! Hex on a discrete cylinder: the grid, the map F into the line, colorings
//! pulled back from two-family covers, winner chains and the contradiction
//! certificate built from them.

mod certify;
mod rotate;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use certify::{
    certify_contradiction, plan_instance, planted_cover, pullback_coloring, CertifyError, CertifyPlan, Contradiction,
    ContradictionCertificate, Cover, PlanOverrides, VerifyReport, K_CAP,
};
pub use rotate::{lift_loop, rotated_loop_intersection, rotated_pairs, winding_number, RotatedPair};

use crate::gauge::Gauge;

/// (column, row)
pub type Cell = (i64, i64);

pub const NEIGHBOR_STEPS: [Cell; 6] = [(1, 0), (-1, 0), (1, 1), (-1, -1), (0, 1), (0, -1)];

pub fn are_neighbors(a: Cell, b: Cell) -> bool {
    NEIGHBOR_STEPS.contains(&(b.0 - a.0, b.1 - a.1))
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HexError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("cell {0:?} is outside the grid")]
    OutOfGrid(Cell),
    #[error("coloring has {got} cells, grid has {expected}")]
    ColoringSize { got: usize, expected: usize },
    #[error("cell {cell:?} maps to {image}, which lies in no cover element")]
    CoverageGap { cell: Cell, image: f64 },
    #[error("loop cells {index} and {} are not neighbors", index + 1)]
    NotNeighbors { index: usize },
    #[error("loop does not close on the cylinder: {0}")]
    NotClosed(String),
    #[error("loop has winding number 0")]
    NullHomotopic,
    #[error("no rotated pair on the loop")]
    NoRotatedPair,
}

/// R_k = {0..2k(m+1)} × {0..k} with F(i, j) = span·([i]/m + j), [i] = i mod (m+1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderGrid {
    pub m: usize,
    pub k: usize,
    /// Rotation offset; 0 when unset.
    pub l: usize,
    pub span: f64,
}

impl CylinderGrid {
    pub fn new(m: usize, k: usize) -> Result<CylinderGrid, HexError> {
        if m == 0 || k == 0 {
            return Err(HexError::Grid(format!("need m ≥ 1 and k ≥ 1, got m={m}, k={k}")));
        }
        Ok(CylinderGrid { m, k, l: 0, span: 1.0 })
    }

    pub fn with_l(self, l: usize) -> Result<CylinderGrid, HexError> {
        if l == 0 || l >= self.m {
            return Err(HexError::Grid(format!("need 1 ≤ l ≤ m−1, got l={l}, m={}", self.m)));
        }
        Ok(CylinderGrid { l, ..self })
    }

    pub fn with_span(self, span: f64) -> Result<CylinderGrid, HexError> {
        if !(span > 0.0 && span.is_finite()) {
            return Err(HexError::Grid(format!("span must be positive, got {span}")));
        }
        Ok(CylinderGrid { span, ..self })
    }

    /// Circumference T = m + 1.
    pub fn period(&self) -> i64 {
        self.m as i64 + 1
    }

    pub fn width(&self) -> usize {
        2 * self.k * (self.m + 1) + 1
    }

    pub fn height(&self) -> usize {
        self.k + 1
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.0 >= 0 && c.1 >= 0 && (c.0 as usize) < self.width() && (c.1 as usize) < self.height()
    }

    pub fn index(&self, c: Cell) -> usize {
        c.1 as usize * self.width() + c.0 as usize
    }

    pub fn cell(&self, idx: usize) -> Cell {
        ((idx % self.width()) as i64, (idx / self.width()) as i64)
    }

    pub fn neighbors(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        NEIGHBOR_STEPS.iter().map(move |d| (c.0 + d.0, c.1 + d.1)).filter(|&n| self.contains(n))
    }

    pub fn f_map(&self, c: Cell) -> Result<f64, HexError> {
        if !self.contains(c) {
            return Err(HexError::OutOfGrid(c));
        }
        Ok(self.image(c))
    }

    /// F without the range check; periodic in the column.
    pub fn image(&self, c: Cell) -> f64 {
        let r = c.0.rem_euclid(self.period());
        self.span * (r as f64 / self.m as f64 + c.1 as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Color {
    Black,
    White,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Explicit,
    PulledBack { cover: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coloring {
    pub width: usize,
    pub height: usize,
    /// Row-major.
    pub cells: Vec<Color>,
    pub provenance: Provenance,
}

impl Coloring {
    pub fn explicit(grid: &CylinderGrid, cells: Vec<Color>) -> Result<Coloring, HexError> {
        if cells.len() != grid.len() {
            return Err(HexError::ColoringSize { got: cells.len(), expected: grid.len() });
        }
        Ok(Coloring { width: grid.width(), height: grid.height(), cells, provenance: Provenance::Explicit })
    }

    pub fn from_fn(grid: &CylinderGrid, f: impl Fn(Cell) -> Color) -> Coloring {
        let cells = (0..grid.len()).map(|i| f(grid.cell(i))).collect();
        Coloring { width: grid.width(), height: grid.height(), cells, provenance: Provenance::Explicit }
    }

    pub fn get(&self, c: Cell) -> Color {
        self.cells[c.1 as usize * self.width + c.0 as usize]
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairClass {
    pub name: &'static str,
    /// |F(z) − F(z′)| for the class.
    pub displacement: f64,
    pub distance: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct LipschitzReport {
    pub pass: bool,
    pub unit: f64,
    pub classes: Vec<PairClass>,
    /// First failing class.
    pub worst: Option<&'static str>,
}

/// Evaluates d(F(z), F(z′)) on each class of neighboring pairs: vertical,
/// wraparound ([i] = m to 0), interior horizontal and diagonal. The first
/// three must stay within `unit`; the diagonal displacement is a vertical
/// plus an interior step, so it is held to 2·unit.
pub fn lipschitz_check(grid: &CylinderGrid, g: &Gauge, unit: f64) -> LipschitzReport {
    let s = grid.span;
    let m = grid.m as f64;
    let tol = unit * 1e-12;
    let classes: Vec<PairClass> = [
        ("vertical", s, unit),
        ("wraparound", s, unit),
        ("interior", s / m, unit),
        ("diagonal", s + s / m, 2.0 * unit),
    ]
    .into_iter()
    .map(|(name, displacement, bound)| {
        let distance = g.value(displacement);
        PairClass { name, displacement, distance, bound, pass: distance <= bound + tol }
    })
    .collect();
    let worst = classes.iter().find(|c| !c.pass).map(|c| c.name);
    LipschitzReport { pass: worst.is_none(), unit, classes, worst }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainCertificate {
    pub winner: Color,
    /// Consecutive cells; black runs row 0 to row k, white column 0 to the last column.
    pub chain: Vec<Cell>,
}

impl ChainCertificate {
    pub fn validate(&self, grid: &CylinderGrid, coloring: &Coloring) -> Result<(), String> {
        let (first, last) = match (self.chain.first(), self.chain.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => return Err("empty chain".into()),
        };
        for (i, &c) in self.chain.iter().enumerate() {
            if !grid.contains(c) {
                return Err(format!("cell {c:?} outside the grid"));
            }
            if coloring.get(c) != self.winner {
                return Err(format!("cell {c:?} has the wrong color"));
            }
            if i > 0 && !are_neighbors(self.chain[i - 1], c) {
                return Err(format!("cells {i} and {} are not neighbors", i - 1));
            }
        }
        let ok = match self.winner {
            Color::Black => first.1 == 0 && last.1 == grid.k as i64,
            Color::White => first.0 == 0 && last.0 == grid.width() as i64 - 1,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("endpoints {first:?}, {last:?} do not span the grid"))
        }
    }
}

/// Shortest monochromatic chain across the grid. Black (row 0 to row k) is
/// tried first, so black is returned whenever both colors span.
pub fn hex_winner(grid: &CylinderGrid, coloring: &Coloring) -> ChainCertificate {
    let k = grid.k as i64;
    let last_col = grid.width() as i64 - 1;
    if let Some(chain) = bfs(grid, coloring, Color::Black, |c| c.1 == 0, |c| c.1 == k) {
        return ChainCertificate { winner: Color::Black, chain };
    }
    let chain = bfs(grid, coloring, Color::White, |c| c.0 == 0, |c| c.0 == last_col)
        .expect("every two-coloring of a hex board has a crossing chain");
    ChainCertificate { winner: Color::White, chain }
}

// straight steps first so uniform colorings give straight chains
const BFS_ORDER: [Cell; 6] = [(0, 1), (1, 0), (0, -1), (-1, 0), (1, 1), (-1, -1)];

fn bfs(
    grid: &CylinderGrid,
    coloring: &Coloring,
    color: Color,
    source: impl Fn(Cell) -> bool,
    target: impl Fn(Cell) -> bool,
) -> Option<Vec<Cell>> {
    const NONE: usize = usize::MAX;
    let mut parent = vec![NONE; grid.len()];
    let mut queue = VecDeque::new();
    for idx in 0..grid.len() {
        let c = grid.cell(idx);
        if source(c) && coloring.get(c) == color {
            parent[idx] = idx;
            queue.push_back(idx);
        }
    }
    while let Some(idx) = queue.pop_front() {
        let c = grid.cell(idx);
        if target(c) {
            let mut chain = vec![c];
            let mut at = idx;
            while parent[at] != at {
                at = parent[at];
                chain.push(grid.cell(at));
            }
            chain.reverse();
            return Some(chain);
        }
        for n in BFS_ORDER.iter().map(|d| (c.0 + d.0, c.1 + d.1)).filter(|&n| grid.contains(n)) {
            let ni = grid.index(n);
            if parent[ni] == NONE && coloring.get(n) == color {
                parent[ni] = idx;
                queue.push_back(ni);
            }
        }
    }
    None
}
