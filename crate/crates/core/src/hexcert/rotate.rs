use std::collections::HashMap;

use serde::Serialize;

use super::{are_neighbors, Cell, HexError};

/// p′ − p ≡ (l, ·) mod T with rows at most one apart; indices into the loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotatedPair {
    pub p: Cell,
    pub p_prime: Cell,
    pub i: usize,
    pub j: usize,
}

/// Lifts a loop given in cylinder columns 0..T to the plane, taking each step
/// as the representative in {−1, 0, 1} columns.
pub fn lift_loop(cells: &[Cell], period: i64) -> Vec<Cell> {
    let mut out: Vec<Cell> = Vec::with_capacity(cells.len());
    for &(i, j) in cells {
        let c = match out.last() {
            None => (i, j),
            Some(&(pi, _)) => {
                let mut d = (i - pi).rem_euclid(period);
                if d > period / 2 {
                    d -= period;
                }
                (pi + d, j)
            }
        };
        out.push(c);
    }
    out
}

/// Winding of a lifted loop whose last cell is its first shifted by w·T columns.
pub fn winding_number(lifted: &[Cell], period: i64) -> Result<i64, HexError> {
    if lifted.len() < 2 {
        return Err(HexError::NotClosed("fewer than two cells".into()));
    }
    if let Some(index) = (1..lifted.len()).find(|&i| !are_neighbors(lifted[i - 1], lifted[i])) {
        return Err(HexError::NotNeighbors { index: index - 1 });
    }
    let (a, b) = (lifted[0], lifted[lifted.len() - 1]);
    let dx = b.0 - a.0;
    if b.1 != a.1 || dx.rem_euclid(period) != 0 {
        return Err(HexError::NotClosed(format!("{a:?} and {b:?} differ by more than a period shift")));
    }
    Ok(dx / period)
}

fn pairs(lifted: &[Cell], period: i64, l: i64, first_only: bool) -> Result<Vec<RotatedPair>, HexError> {
    if winding_number(lifted, period)? == 0 {
        return Err(HexError::NullHomotopic);
    }
    let cells = &lifted[..lifted.len() - 1];
    let mut at: HashMap<Cell, Vec<usize>> = HashMap::new();
    for (i, &(c, r)) in cells.iter().enumerate() {
        at.entry((c.rem_euclid(period), r)).or_default().push(i);
    }
    let mut out = Vec::new();
    // same row first; a lattice crossing of the loop and its shift lands there
    for dr in [0, 1, -1] {
        for (i, &(c, r)) in cells.iter().enumerate() {
            if let Some(js) = at.get(&((c + l).rem_euclid(period), r + dr)) {
                for &j in js {
                    out.push(RotatedPair { p: cells[i], p_prime: cells[j], i, j });
                    if first_only {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// A pair (p, p′) on the loop with p′ in the column l steps round from p.
pub fn rotated_loop_intersection(lifted: &[Cell], period: i64, l: i64) -> Result<RotatedPair, HexError> {
    pairs(lifted, period, l, true)?.pop().ok_or(HexError::NoRotatedPair)
}

/// Every rotated pair on the loop, same-row pairs first.
pub fn rotated_pairs(lifted: &[Cell], period: i64, l: i64) -> Result<Vec<RotatedPair>, HexError> {
    let all = pairs(lifted, period, l, false)?;
    if all.is_empty() {
        return Err(HexError::NoRotatedPair);
    }
    Ok(all)
}
