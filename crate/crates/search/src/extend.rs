//! Extension of a pruned 8-arc along the grid of two tangent pencils.

use std::collections::BTreeMap;

use crate::candidates::Prepared8;
use crate::kernel::{Code, Mask, SearchSpace};

/// An arc found by extending a `Prepared8`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Extension {
    /// All `k` points, sorted.
    pub points: Vec<Code>,
    /// The points added to the 8-arc, in grid order.
    pub added: Vec<Code>,
    pub focus: Mask,
}

/// Directions through which exactly `m` tangents of the 8-arc pass.
pub fn pencil_directions(space: &SearchSpace, p: &Prepared8, m: u32) -> Vec<u8> {
    let paired = p.paired(space);
    (0..=space.q() as u8)
        .filter(|&d| p.focus >> d & 1 == 1 && 8 - paired[d as usize].count_ones() == m)
        .collect()
}

struct Grid {
    m: usize,
    cells: Vec<Option<(Code, Mask)>>,
}

fn grid(space: &SearchSpace, p: &Prepared8, paired: &[u8], d1: u8, d2: u8) -> Grid {
    let rows: Vec<usize> = (0..8).filter(|i| paired[d1 as usize] >> i & 1 == 0).collect();
    let cols: Vec<usize> = (0..8).filter(|i| paired[d2 as usize] >> i & 1 == 0).collect();
    let m = rows.len();
    let mut cells = Vec::with_capacity(m * m);
    for &i in &rows {
        for &j in &cols {
            let cell = if i == j {
                None
            } else {
                let g = space.intersect(p.points[i], d1, p.points[j], d2);
                space.join(&p.points, g).map(|bits| (g, bits))
            };
            cells.push(cell);
        }
    }
    Grid { m, cells }
}

/// All hyperfocused `k`-arcs containing `p` whose `k - 8` new points form a
/// transversal of the grid cut out by two pencils of `k - 8` tangents each.
pub fn extend(space: &SearchSpace, p: &Prepared8, k: usize) -> Vec<Extension> {
    assert!(k > 8 && k.is_multiple_of(2), "target size must be even and above 8");
    let m = k - 8;
    let target = (k - 1) as u32;
    let dirs = pencil_directions(space, p, m as u32);
    if dirs.len() < 2 {
        return Vec::new();
    }
    let paired = p.paired(space);
    let mut found = BTreeMap::new();
    let mut pts = p.points.to_vec();
    for (i, &d1) in dirs.iter().enumerate() {
        for &d2 in &dirs[i + 1..] {
            let g = grid(space, p, &paired, d1, d2);
            transversals(space, &g, 0, 0, p.focus, target, &mut pts, &mut found);
        }
    }
    found
        .into_iter()
        .map(|(points, (added, focus))| Extension { points, added, focus })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn transversals(
    space: &SearchSpace,
    g: &Grid,
    row: usize,
    used: u32,
    focus: Mask,
    target: u32,
    pts: &mut Vec<Code>,
    found: &mut BTreeMap<Vec<Code>, (Vec<Code>, Mask)>,
) {
    if row == g.m {
        if focus.count_ones() == target {
            let added = pts[8..].to_vec();
            let mut all = pts.clone();
            all.sort_unstable();
            found.entry(all).or_insert((added, focus));
        }
        return;
    }
    for col in 0..g.m {
        if used >> col & 1 == 1 {
            continue;
        }
        let Some((code, _)) = g.cells[row * g.m + col] else {
            continue;
        };
        let Some(bits) = space.join(pts, code) else {
            continue;
        };
        let f = focus | bits;
        if f.count_ones() > target {
            continue;
        }
        pts.push(code);
        transversals(space, g, row + 1, used | 1 << col, f, target, pts, found);
        pts.pop();
    }
}

pub fn extend_to_12(space: &SearchSpace, p: &Prepared8) -> Vec<Extension> {
    extend(space, p, 12)
}

pub fn extend_to_14(space: &SearchSpace, p: &Prepared8) -> Vec<Extension> {
    extend(space, p, 14)
}
