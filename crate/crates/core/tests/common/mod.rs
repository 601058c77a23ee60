#![allow(dead_code)]

use homline::hexcert::{lift_loop, Cell, Color, Coloring, CylinderGrid};
use rand::Rng;

/// Independent crossing test: iterative DFS over the six hex neighbours.
pub fn crosses(grid: &CylinderGrid, coloring: &Coloring, color: Color) -> bool {
    let (w, h) = (grid.width() as i64, grid.height() as i64);
    let start = |c: Cell| match color {
        Color::Black => c.1 == 0,
        Color::White => c.0 == 0,
    };
    let goal = |c: Cell| match color {
        Color::Black => c.1 == h - 1,
        Color::White => c.0 == w - 1,
    };
    let mut seen = vec![false; (w * h) as usize];
    let mut stack: Vec<Cell> = Vec::new();
    for j in 0..h {
        for i in 0..w {
            if start((i, j)) && coloring.get((i, j)) == color {
                seen[(j * w + i) as usize] = true;
                stack.push((i, j));
            }
        }
    }
    while let Some(c) = stack.pop() {
        if goal(c) {
            return true;
        }
        for d in [(1, 0), (-1, 0), (1, 1), (-1, -1), (0, 1), (0, -1)] {
            let n = (c.0 + d.0, c.1 + d.1);
            if n.0 < 0 || n.1 < 0 || n.0 >= w || n.1 >= h {
                continue;
            }
            let idx = (n.1 * w + n.0) as usize;
            if !seen[idx] && coloring.get(n) == color {
                seen[idx] = true;
                stack.push(n);
            }
        }
    }
    false
}

/// Shortest chain length by plain Bellman-style relaxation, for checking BFS output.
pub fn shortest_chain(grid: &CylinderGrid, coloring: &Coloring, color: Color) -> Option<usize> {
    let (w, h) = (grid.width() as i64, grid.height() as i64);
    let mut dist = vec![usize::MAX; (w * h) as usize];
    for j in 0..h {
        for i in 0..w {
            let src = match color {
                Color::Black => j == 0,
                Color::White => i == 0,
            };
            if src && coloring.get((i, j)) == color {
                dist[(j * w + i) as usize] = 1;
            }
        }
    }
    let mut changed = true;
    while changed {
        changed = false;
        for j in 0..h {
            for i in 0..w {
                let here = dist[(j * w + i) as usize];
                if here == usize::MAX {
                    continue;
                }
                for d in [(1, 0), (-1, 0), (1, 1), (-1, -1), (0, 1), (0, -1)] {
                    let n = (i + d.0, j + d.1);
                    if n.0 < 0 || n.1 < 0 || n.0 >= w || n.1 >= h || coloring.get(n) != color {
                        continue;
                    }
                    let idx = (n.1 * w + n.0) as usize;
                    if here + 1 < dist[idx] {
                        dist[idx] = here + 1;
                        changed = true;
                    }
                }
            }
        }
    }
    let mut best = usize::MAX;
    for j in 0..h {
        for i in 0..w {
            let end = match color {
                Color::Black => j == h - 1,
                Color::White => i == w - 1,
            };
            if end {
                best = best.min(dist[(j * w + i) as usize]);
            }
        }
    }
    (best != usize::MAX).then_some(best)
}

pub fn random_coloring(grid: &CylinderGrid, rng: &mut impl Rng, p_black: f64) -> Coloring {
    let cells = (0..grid.len()).map(|_| if rng.gen_bool(p_black) { Color::Black } else { Color::White }).collect();
    Coloring::explicit(grid, cells).unwrap()
}

/// A winding-one loop on the cylinder of period T over rows 0..=k: T rightward
/// steps, each (1, 0) or (1, 1), with random vertical detours, closed up in
/// the start row. Returned lifted, last = first + (T, 0).
pub fn staircase_loop(period: i64, k: i64, rng: &mut impl Rng) -> Vec<Cell> {
    let c0 = rng.gen_range(0..period);
    let r0 = rng.gen_range(0..=k);
    let mut cyl = vec![(c0, r0)];
    let (mut c, mut r) = (c0, r0);
    let push = |c: i64, r: i64, cyl: &mut Vec<Cell>| cyl.push((c.rem_euclid(period), r));
    for _ in 0..period {
        for _ in 0..rng.gen_range(0..3) {
            let dr = if rng.gen_bool(0.5) { 1 } else { -1 };
            if (0..=k).contains(&(r + dr)) {
                r += dr;
                push(c, r, &mut cyl);
            }
        }
        c += 1;
        if r < k && rng.gen_bool(0.3) {
            r += 1;
        }
        push(c, r, &mut cyl);
    }
    while r != r0 {
        r += if r < r0 { 1 } else { -1 };
        push(c, r, &mut cyl);
    }
    lift_loop(&cyl, period)
}
