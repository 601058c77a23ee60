use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    hex_winner, lipschitz_check, rotated_pairs, winding_number, Cell, ChainCertificate, Color, Coloring, CylinderGrid,
    HexError, LipschitzReport, Provenance, RotatedPair,
};
use crate::gauge::{Gauge, GaugeError};
use crate::geometry::{geometric_ladder, lc_ratio};

pub const K_CAP: usize = 1000;
const M_CAP: usize = 1 << 24;
const MAX_SEPARATION_ELEMENTS: usize = 2000;
const REL_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error("not applicable: lc ratio {lc_sup} does not exceed 3c = {needed}")]
    NotApplicable { lc_sup: f64, needed: f64 },
    #[error("precondition {check} failed: {detail}")]
    Precondition { check: &'static str, detail: String },
    #[error("{family} elements {i} and {j} are at distance {distance}, not above {bound}")]
    NotSeparated { family: &'static str, i: usize, j: usize, distance: f64, bound: f64 },
    #[error("chain distance {distance} does not exceed {bound}")]
    NoContradiction { distance: f64, bound: f64 },
    #[error(transparent)]
    Hex(#[from] HexError),
    #[error(transparent)]
    Gauge(#[from] GaugeError),
}

fn pre(check: &'static str, detail: String) -> CertifyError {
    CertifyError::Precondition { check, detail }
}

/// Two families of closed intervals, each interval one cover element.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cover {
    #[serde(default)]
    pub label: String,
    pub black: Vec<(f64, f64)>,
    pub white: Vec<(f64, f64)>,
}

impl Cover {
    pub fn load(path: &Path) -> Result<Cover, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut c: Cover = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        if c.label.is_empty() {
            c.label = path.display().to_string();
        }
        Ok(c)
    }

    pub fn black_element(&self, p: f64) -> Option<usize> {
        FamilyIndex::new(&self.black).find(p)
    }

    pub fn white_element(&self, p: f64) -> Option<usize> {
        FamilyIndex::new(&self.white).find(p)
    }
}

struct FamilyIndex {
    /// (start, end, original index) sorted by start.
    sorted: Vec<(f64, f64, usize)>,
    prefix_end: Vec<f64>,
}

impl FamilyIndex {
    fn new(family: &[(f64, f64)]) -> FamilyIndex {
        let mut sorted: Vec<(f64, f64, usize)> = family.iter().enumerate().map(|(i, &(a, b))| (a, b, i)).collect();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.2.cmp(&y.2)));
        let mut run = f64::NEG_INFINITY;
        let prefix_end = sorted.iter().map(|s| {
            run = run.max(s.1);
            run
        });
        let prefix_end = prefix_end.collect();
        FamilyIndex { sorted, prefix_end }
    }

    fn find(&self, p: f64) -> Option<usize> {
        let mut j = self.sorted.partition_point(|s| s.0 <= p);
        while j > 0 && self.prefix_end[j - 1] >= p {
            j -= 1;
            if self.sorted[j].1 >= p {
                return Some(self.sorted[j].2);
            }
        }
        None
    }
}

/// Colors cell z black when F(z) lies in a black element, else white when it
/// lies in a white one; a point in both is black.
pub fn pullback_coloring(grid: &CylinderGrid, cover: &Cover) -> Result<Coloring, HexError> {
    let black = FamilyIndex::new(&cover.black);
    let white = FamilyIndex::new(&cover.white);
    let mut cells = Vec::with_capacity(grid.len());
    for idx in 0..grid.len() {
        let c = grid.cell(idx);
        let p = grid.image(c);
        cells.push(if black.find(p).is_some() {
            Color::Black
        } else if white.find(p).is_some() {
            Color::White
        } else {
            return Err(HexError::CoverageGap { cell: c, image: p });
        });
    }
    Ok(Coloring {
        width: grid.width(),
        height: grid.height(),
        cells,
        provenance: Provenance::PulledBack { cover: cover.label.clone() },
    })
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct PlanOverrides {
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
}

/// Grid and normalization chosen from a non-LC witness 0 < x < y with
/// d(0, x) > 3c·d(0, y); unit = d(0, y) and F maps row j onto [jy, (j+1)y].
#[derive(Debug, Clone, Serialize)]
pub struct CertifyPlan {
    pub c: f64,
    pub unit: f64,
    pub witness_x: f64,
    pub witness_y: f64,
    pub witness_ratio: f64,
    /// l·y/m, the rotation realized on the grid.
    pub rotation: f64,
    pub rotation_distance: f64,
    /// min d over [(k−1)y, (k+1)y].
    pub k_margin: f64,
    pub grid: CylinderGrid,
}

/// Picks the witness from the lc ratio, then the smallest power-of-two m with
/// d(y/m) ≤ unit whose rounded offset l = m·x/y keeps d(ly/m) > 3c·unit, then
/// the smallest k ≥ 2 with d > 2c·unit on [(k−1)y, (k+1)y].
pub fn plan_instance(g: &Gauge, c: f64, ov: PlanOverrides) -> Result<CertifyPlan, CertifyError> {
    if !(c > 0.0) {
        return Err(pre("c", format!("c must be positive, got {c}")));
    }
    let top = g.x_max() / 3.0;
    let lo = g.grid_step().max(g.x_max() * 1e-9).min(top / 2.0);
    let mut ladder = geometric_ladder(lo, top, 64);
    ladder.extend(g.anchors().iter().copied().filter(|&a| a > 0.0 && a <= top));
    let lc = lc_ratio(g, &ladder, f64::INFINITY);
    if lc.sup_estimate <= 3.0 * c {
        return Err(CertifyError::NotApplicable { lc_sup: lc.sup_estimate, needed: 3.0 * c });
    }
    let (x, y) = (lc.witness_s, lc.witness_t);
    let unit = g.value(y);
    let need = 3.0 * c * unit;
    let usable = |m: usize| -> Option<usize> {
        if g.value(y / m as f64) > unit * (1.0 + REL_TOL) {
            return None;
        }
        let l = ov.l.unwrap_or_else(|| (m as f64 * x / y).round() as usize);
        (l >= 1 && l < m && g.value(l as f64 * y / m as f64) > need).then_some(l)
    };
    let (m, l) = match ov.m {
        Some(m) => (m, usable(m).ok_or_else(|| pre("m", format!("m = {m} fails d(y/m) ≤ unit or the offset test")))?),
        None => std::iter::successors(Some(2usize), |m| (*m < M_CAP).then_some(m * 2))
            .find_map(|m| usable(m).map(|l| (m, l)))
            .ok_or_else(|| pre("m", format!("no power of two up to {M_CAP} works")))?,
    };
    let margin = |k: usize| -> Result<f64, GaugeError> {
        Ok(g.min_on((k - 1) as f64 * y, (k + 1) as f64 * y)?.0)
    };
    let fits = |k: usize| (k + 1) as f64 * y <= g.x_max();
    let k = match ov.k {
        Some(k) => {
            if k < 2 || !fits(k) || margin(k)? <= 2.0 * c * unit {
                return Err(pre("k", format!("k = {k} does not push row k beyond 2c·unit inside the domain")));
            }
            k
        }
        None => {
            let mut k = 2;
            loop {
                if k > K_CAP || !fits(k) {
                    return Err(pre("k", format!("no k ≤ {} within x_max = {}", K_CAP, g.x_max())));
                }
                if margin(k)? > 2.0 * c * unit {
                    break k;
                }
                k += 1;
            }
        }
    };
    let grid = CylinderGrid::new(m, k)?.with_l(l)?.with_span(y)?;
    let rotation = l as f64 * y / m as f64;
    Ok(CertifyPlan {
        c,
        unit,
        witness_x: x,
        witness_y: y,
        witness_ratio: lc.sup_estimate,
        rotation,
        rotation_distance: g.value(rotation),
        k_margin: margin(k)?,
        grid,
    })
}

/// A cover for the planned grid whose coloring is won by `winner`: one black
/// interval over the whole image, or a white band three rows tall with black
/// on either side.
pub fn planted_cover(plan: &CertifyPlan, winner: Color) -> Cover {
    let y = plan.grid.span;
    let k = plan.grid.k as f64;
    match winner {
        Color::Black => Cover { label: "planted-black".into(), black: vec![(-y, (k + 2.0) * y)], white: vec![] },
        Color::White => {
            let j0 = ((plan.grid.k - 2) / 2) as f64;
            Cover {
                label: "planted-white".into(),
                black: vec![(-y, j0 * y), ((j0 + 3.0) * y, (k + 2.0) * y)],
                white: vec![(j0 * y, (j0 + 3.0) * y)],
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationRecord {
    pub family: &'static str,
    pub elements: usize,
    /// Smallest distance between distinct elements, with the pair.
    pub min_distance: Option<(f64, usize, usize)>,
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Contradiction {
    /// One black element holds points d-farther apart than 2c·unit.
    BlackDiameter {
        set_index: usize,
        set: (f64, f64),
        first: Cell,
        last: Cell,
        image_first: f64,
        image_last: f64,
        distance: f64,
        bound: f64,
    },
    /// One white element holds a closed loop and a rotated pair on it.
    WhiteFarPair {
        set_index: usize,
        set: (f64, f64),
        /// Marker columns t·(m+1) where the chain sits in the same row.
        t1: usize,
        t2: usize,
        row: i64,
        loop_cells: Vec<Cell>,
        winding: i64,
        pair: RotatedPair,
        image_p: f64,
        image_p_prime: f64,
        distance: f64,
        bound: f64,
        /// F(p′) − F(p) − rotation.
        remainder: f64,
        /// d(0, rotation) − d(0, remainder), a lower bound for `distance`.
        lemma_bound: f64,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ContradictionCertificate {
    pub plan: CertifyPlan,
    pub cover_label: String,
    pub lipschitz: LipschitzReport,
    pub separation: Vec<SeparationRecord>,
    pub chain: ChainCertificate,
    pub contradiction: Contradiction,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyCheck {
    pub name: String,
    pub recorded: f64,
    pub recomputed: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<VerifyCheck>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    fn same(&mut self, name: &str, recorded: f64, recomputed: f64) {
        let pass = (recorded - recomputed).abs() <= REL_TOL * recorded.abs().max(recomputed.abs());
        self.checks.push(VerifyCheck { name: name.into(), recorded, recomputed, pass });
    }

    fn above(&mut self, name: &str, value: f64, bound: f64) {
        self.checks.push(VerifyCheck { name: name.into(), recorded: bound, recomputed: value, pass: value > bound });
    }

    fn holds(&mut self, name: &str, ok: bool) {
        let v = f64::from(u8::from(ok));
        self.checks.push(VerifyCheck { name: name.into(), recorded: 1.0, recomputed: v, pass: ok });
    }
}

fn check_separation(
    g: &Gauge,
    family: &'static str,
    elements: &[(f64, f64)],
    window: (f64, f64),
    bound: f64,
) -> Result<SeparationRecord, CertifyError> {
    let clipped: Vec<(usize, f64, f64)> = elements
        .iter()
        .enumerate()
        .filter(|(_, e)| e.1 >= window.0 && e.0 <= window.1)
        .map(|(i, e)| (i, e.0.max(window.0), e.1.min(window.1)))
        .collect();
    if clipped.len() > MAX_SEPARATION_ELEMENTS {
        return Err(pre("separation", format!("{} {family} elements meet the image", clipped.len())));
    }
    let mut min_distance: Option<(f64, usize, usize)> = None;
    for (a, &(i, a0, a1)) in clipped.iter().enumerate() {
        for &(j, b0, b1) in &clipped[a + 1..] {
            let lo = (b0 - a1).max(a0 - b1).max(0.0);
            let hi = (b1 - a0).max(a1 - b0);
            let d = g.min_on(lo, hi.max(lo))?.0;
            if min_distance.is_none_or(|m| d < m.0) {
                min_distance = Some((d, i, j));
            }
            if d <= bound {
                return Err(CertifyError::NotSeparated { family, i, j, distance: d, bound });
            }
        }
    }
    Ok(SeparationRecord { family, elements: clipped.len(), min_distance, bound })
}

/// Runs the dichotomy on `cover`, which claims to be 2·unit-separated within
/// each family and 2c·unit-bounded. A black winner gives an element of large
/// diameter directly. A white winner is cut at two marker columns in the same
/// row into a loop of nonzero winding; the loop meets its rotation by l, which
/// puts two points at distance about d(0, x) inside one white element.
pub fn certify_contradiction(
    g: &Gauge,
    plan: &CertifyPlan,
    cover: &Cover,
) -> Result<ContradictionCertificate, CertifyError> {
    let grid = plan.grid;
    let unit = plan.unit;
    let bound = 2.0 * plan.c * unit;
    let lipschitz = lipschitz_check(&grid, g, unit);
    if !lipschitz.pass {
        return Err(pre("lipschitz", format!("class {:?} exceeds its bound", lipschitz.worst)));
    }
    let window = (0.0, grid.span * (grid.k + 1) as f64);
    let separation = vec![
        check_separation(g, "black", &cover.black, window, 2.0 * unit)?,
        check_separation(g, "white", &cover.white, window, 2.0 * unit)?,
    ];
    let coloring = pullback_coloring(&grid, cover)?;
    let chain = hex_winner(&grid, &coloring);
    let contradiction = match chain.winner {
        Color::Black => black_branch(g, &grid, cover, &chain, bound)?,
        Color::White => white_branch(g, plan, cover, &chain, bound)?,
    };
    Ok(ContradictionCertificate {
        plan: plan.clone(),
        cover_label: cover.label.clone(),
        lipschitz,
        separation,
        chain,
        contradiction,
    })
}

fn single_element(grid: &CylinderGrid, family: &[(f64, f64)], cells: &[Cell]) -> Result<usize, CertifyError> {
    let index = FamilyIndex::new(family);
    let first = index.find(grid.image(cells[0])).ok_or_else(|| pre("chain", "first cell in no element".into()))?;
    let (a, b) = family[first];
    if let Some(c) = cells.iter().find(|&&c| !(a..=b).contains(&grid.image(c))) {
        return Err(pre("chain", format!("cell {c:?} leaves element {first}; the cover is not separated")));
    }
    Ok(first)
}

fn black_branch(
    g: &Gauge,
    grid: &CylinderGrid,
    cover: &Cover,
    chain: &ChainCertificate,
    bound: f64,
) -> Result<Contradiction, CertifyError> {
    let set_index = single_element(grid, &cover.black, &chain.chain)?;
    let (first, last) = (chain.chain[0], *chain.chain.last().unwrap());
    let (image_first, image_last) = (grid.image(first), grid.image(last));
    let distance = g.value((image_last - image_first).abs());
    if distance <= bound {
        return Err(CertifyError::NoContradiction { distance, bound });
    }
    Ok(Contradiction::BlackDiameter {
        set_index,
        set: cover.black[set_index],
        first,
        last,
        image_first,
        image_last,
        distance,
        bound,
    })
}

fn white_branch(
    g: &Gauge,
    plan: &CertifyPlan,
    cover: &Cover,
    chain: &ChainCertificate,
    bound: f64,
) -> Result<Contradiction, CertifyError> {
    let grid = &plan.grid;
    let period = grid.period();
    let set_index = single_element(grid, &cover.white, &chain.chain)?;
    // first visit of each marker column, then two markers in one row
    let mut seen: HashMap<i64, (usize, usize)> = HashMap::new();
    let mut hit = None;
    for t in 0..=2 * grid.k {
        let col = t as i64 * period;
        let idx = chain.chain.iter().position(|c| c.0 == col).expect("a crossing chain visits every column");
        let row = chain.chain[idx].1;
        if let Some(&(t1, i1)) = seen.get(&row) {
            hit = Some((t1, i1, t, idx, row));
            break;
        }
        seen.insert(row, (t, idx));
    }
    let (t1, i1, t2, i2, row) = hit.expect("2k+1 marker columns share k+1 rows");
    let loop_cells = chain.chain[i1.min(i2)..=i1.max(i2)].to_vec();
    let winding = winding_number(&loop_cells, period)?;
    let best = rotated_pairs(&loop_cells, period, grid.l as i64)?
        .into_iter()
        .map(|p| {
            let (a, b) = (grid.image(p.p), grid.image(p.p_prime));
            (g.value((b - a).abs()), p, a, b)
        })
        .max_by(|x, y| x.0.total_cmp(&y.0))
        .expect("rotated_pairs is non-empty");
    let (distance, pair, image_p, image_p_prime) = best;
    if distance <= bound {
        return Err(CertifyError::NoContradiction { distance, bound });
    }
    let remainder = image_p_prime - image_p - plan.rotation;
    Ok(Contradiction::WhiteFarPair {
        set_index,
        set: cover.white[set_index],
        t1,
        t2,
        row,
        loop_cells,
        winding,
        pair,
        image_p,
        image_p_prime,
        distance,
        bound,
        remainder,
        lemma_bound: plan.rotation_distance - g.value(remainder.abs()),
    })
}

impl ContradictionCertificate {
    /// Re-evaluates every recorded number and combinatorial claim from `g`
    /// and `cover` alone.
    pub fn verify(&self, g: &Gauge, cover: &Cover) -> VerifyReport {
        let mut r = VerifyReport { checks: Vec::new() };
        let p = &self.plan;
        let grid = &p.grid;
        r.same("unit = d(0, y)", p.unit, g.value(p.witness_y));
        r.above("d(0, x) > 3c·unit", g.value(p.witness_x), 3.0 * p.c * p.unit);
        r.same("rotation distance", p.rotation_distance, g.value(p.rotation));
        r.above("d(0, ly/m) > 3c·unit", g.value(p.rotation), 3.0 * p.c * p.unit);
        r.same("rotation = ly/m", p.rotation, grid.l as f64 * grid.span / grid.m as f64);
        r.holds("span = y", grid.span == p.witness_y);
        r.holds("lipschitz", lipschitz_check(grid, g, p.unit).pass);
        r.above("row k margin", g.min_on((grid.k - 1) as f64 * grid.span, (grid.k + 1) as f64 * grid.span).map_or(0.0, |v| v.0), 2.0 * p.c * p.unit);
        for s in &self.separation {
            let fam = if s.family == "black" { &cover.black } else { &cover.white };
            let window = (0.0, grid.span * (grid.k + 1) as f64);
            r.holds(&format!("{} separation", s.family), check_separation(g, s.family, fam, window, 2.0 * p.unit).is_ok());
        }
        let coloring = pullback_coloring(grid, cover);
        r.holds("chain", coloring.as_ref().is_ok_and(|col| self.chain.validate(grid, col).is_ok()));
        match &self.contradiction {
            Contradiction::BlackDiameter { set_index, set, first, last, image_first, image_last, distance, bound, .. } => {
                r.holds("set matches cover", cover.black.get(*set_index) == Some(set));
                r.holds("chain inside set", self.chain.chain.iter().all(|&c| (set.0..=set.1).contains(&grid.image(c))));
                r.holds("endpoints", self.chain.chain.first() == Some(first) && self.chain.chain.last() == Some(last));
                r.same("image first", *image_first, grid.image(*first));
                r.same("image last", *image_last, grid.image(*last));
                r.same("distance", *distance, g.value((image_last - image_first).abs()));
                r.above("distance > 2c·unit", g.value((image_last - image_first).abs()), *bound);
                r.same("bound", *bound, 2.0 * p.c * p.unit);
            }
            Contradiction::WhiteFarPair {
                set_index,
                set,
                t1,
                t2,
                row,
                loop_cells,
                winding,
                pair,
                image_p,
                image_p_prime,
                distance,
                bound,
                remainder,
                lemma_bound,
            } => {
                let t = grid.period();
                r.holds("set matches cover", cover.white.get(*set_index) == Some(set));
                r.holds("loop inside set", loop_cells.iter().all(|&c| (set.0..=set.1).contains(&grid.image(c))));
                r.holds(
                    "loop is a sub-chain",
                    self.chain.chain.windows(loop_cells.len()).any(|w| w == loop_cells.as_slice()),
                );
                let ends = (loop_cells.first().copied(), loop_cells.last().copied());
                let markers = [(*t1 as i64 * t, *row), (*t2 as i64 * t, *row)];
                r.holds(
                    "loop ends at marker columns",
                    ends == (Some(markers[0]), Some(markers[1])) || ends == (Some(markers[1]), Some(markers[0])),
                );
                r.holds("winding", winding_number(loop_cells, t) == Ok(*winding) && *winding != 0);
                r.holds(
                    "rotated pair",
                    loop_cells.get(pair.i) == Some(&pair.p)
                        && loop_cells.get(pair.j) == Some(&pair.p_prime)
                        && (pair.p_prime.0 - pair.p.0).rem_euclid(t) == grid.l as i64
                        && (pair.p_prime.1 - pair.p.1).abs() <= 1,
                );
                r.same("image p", *image_p, grid.image(pair.p));
                r.same("image p′", *image_p_prime, grid.image(pair.p_prime));
                let d = g.value((image_p_prime - image_p).abs());
                r.same("distance", *distance, d);
                r.above("distance > 2c·unit", d, *bound);
                r.same("bound", *bound, 2.0 * p.c * p.unit);
                r.same("remainder", *remainder, image_p_prime - image_p - p.rotation);
                r.same("lemma bound", *lemma_bound, g.value(p.rotation) - g.value(remainder.abs()));
                r.holds("lemma bound ≤ distance", *lemma_bound <= d * (1.0 + REL_TOL));
            }
        }
        r
    }
}
