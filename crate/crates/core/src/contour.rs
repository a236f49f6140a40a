//! Marching squares on a rectangular scalar field.
//!
//! Crossing points are keyed by the grid edge they sit on, so segments from
//! neighbouring cells share endpoints exactly and can be stitched into
//! polylines without any distance tolerance.

use std::collections::HashMap;

/// A sampled field: `values[j * nx + i]` is the value at node (x_i, y_j).
#[derive(Debug, Clone)]
pub struct ScalarField<'a> {
    pub nx: usize,
    pub ny: usize,
    pub x0: f64,
    pub dx: f64,
    pub y0: f64,
    pub dy: f64,
    pub values: &'a [f64],
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    /// First point repeated at the end.
    pub closed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum EdgeKey {
    /// Between (i, j) and (i + 1, j).
    H(usize, usize),
    /// Between (i, j) and (i, j + 1).
    V(usize, usize),
}

impl ScalarField<'_> {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.nx + i]
    }

    fn crossing(&self, key: EdgeKey, level: f64) -> (f64, f64) {
        let (i, j, i2, j2) = match key {
            EdgeKey::H(i, j) => (i, j, i + 1, j),
            EdgeKey::V(i, j) => (i, j, i, j + 1),
        };
        let (a, b) = (self.at(i, j), self.at(i2, j2));
        let t = if b != a { ((level - a) / (b - a)).clamp(0.0, 1.0) } else { 0.5 };
        let x = self.x0 + (i as f64 + t * (i2 - i) as f64) * self.dx;
        let y = self.y0 + (j as f64 + t * (j2 - j) as f64) * self.dy;
        (x, y)
    }
}

/// Contour lines of `field` at `level`. Cells with a NaN corner are skipped.
/// Polylines touching the field boundary come back open.
pub fn march(field: &ScalarField<'_>, level: f64) -> Vec<Polyline> {
    assert_eq!(field.values.len(), field.nx * field.ny, "field shape mismatch");
    let mut segments: Vec<(EdgeKey, EdgeKey)> = vec![];
    if field.nx < 2 || field.ny < 2 {
        return vec![];
    }
    for j in 0..field.ny - 1 {
        for i in 0..field.nx - 1 {
            let corners = [field.at(i, j), field.at(i + 1, j), field.at(i + 1, j + 1), field.at(i, j + 1)];
            if corners.iter().any(|v| v.is_nan()) {
                continue;
            }
            let case = corners
                .iter()
                .enumerate()
                .fold(0u8, |acc, (k, &v)| acc | (((v > level) as u8) << k));
            let (bottom, right, top, left) = (EdgeKey::H(i, j), EdgeKey::V(i + 1, j), EdgeKey::H(i, j + 1), EdgeKey::V(i, j));
            let centre_above = corners.iter().sum::<f64>() / 4.0 > level;
            match case {
                0 | 15 => {}
                1 | 14 => segments.push((left, bottom)),
                2 | 13 => segments.push((bottom, right)),
                3 | 12 => segments.push((left, right)),
                4 | 11 => segments.push((right, top)),
                6 | 9 => segments.push((bottom, top)),
                7 | 8 => segments.push((left, top)),
                5 => {
                    if centre_above {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    } else {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    }
                }
                10 => {
                    if centre_above {
                        segments.push((left, bottom));
                        segments.push((right, top));
                    } else {
                        segments.push((left, top));
                        segments.push((bottom, right));
                    }
                }
                _ => unreachable!(),
            }
        }
    }
    stitch(&segments)
        .into_iter()
        .map(|(keys, closed)| Polyline {
            points: keys.iter().map(|&k| field.crossing(k, level)).collect(),
            closed,
        })
        .collect()
}

fn stitch(segments: &[(EdgeKey, EdgeKey)]) -> Vec<(Vec<EdgeKey>, bool)> {
    let mut adjacency: HashMap<EdgeKey, Vec<usize>> = HashMap::new();
    for (s, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(s);
        adjacency.entry(b).or_default().push(s);
    }
    let mut used = vec![false; segments.len()];
    let other = |s: usize, k: EdgeKey| if segments[s].0 == k { segments[s].1 } else { segments[s].0 };

    let walk = |start_seg: usize, start_key: EdgeKey, used: &mut Vec<bool>| {
        let mut keys = vec![start_key];
        let mut seg = start_seg;
        let mut key = start_key;
        loop {
            used[seg] = true;
            key = other(seg, key);
            keys.push(key);
            match adjacency[&key].iter().find(|&&s| !used[s]) {
                Some(&next) => seg = next,
                None => break,
            }
        }
        keys
    };

    let mut out = vec![];
    // Open chains start at an endpoint used by a single segment.
    let mut endpoints: Vec<EdgeKey> = adjacency.iter().filter(|(_, s)| s.len() == 1).map(|(k, _)| *k).collect();
    endpoints.sort();
    for key in endpoints {
        let seg = adjacency[&key][0];
        if !used[seg] {
            out.push((walk(seg, key, &mut used), false));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            let mut keys = walk(s, segments[s].0, &mut used);
            let closed = keys.first() == keys.last();
            if !closed {
                keys.dedup();
            }
            out.push((keys, closed));
        }
    }
    out
}
