use std::collections::HashMap;

use super::grid::GridField;
use super::point::Point2;
use crate::error::{Error, Result};

/// Closed polyline approximating a level set, with radius statistics about `center`.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub points: Vec<Point2<f64>>,
    pub center: Point2<f64>,
    pub mean_radius: f64,
    pub min_radius: f64,
    pub max_radius: f64,
    pub perimeter: f64,
    /// Number of closed components found; `points` holds the longest.
    pub components: usize,
}

pub const MIN_CONTOUR_POINTS: usize = 8;

fn edge_key(horizontal: bool, ix: usize, iy: usize, nx: usize) -> usize {
    2 * (iy * nx + ix) + usize::from(!horizontal)
}

/// Marching squares on cell centres; `inside` means value ≥ level.
pub fn extract_front(field: &GridField<f64>, level: f64, center: Point2<f64>) -> Result<Contour> {
    let (nx, ny) = field.dims();
    let inside = |ix: usize, iy: usize| field.get(ix, iy) >= level;
    let mut points: HashMap<usize, Point2<f64>> = HashMap::new();
    let mut adjacency: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut crossing = |horizontal: bool, ix: usize, iy: usize| -> usize {
        let key = edge_key(horizontal, ix, iy, nx);
        points.entry(key).or_insert_with(|| {
            let (jx, jy) = if horizontal { (ix + 1, iy) } else { (ix, iy + 1) };
            let (a, b) = (field.get(ix, iy), field.get(jx, jy));
            let t = ((level - a) / (b - a)).clamp(0.0, 1.0);
            let pa = field.position(ix, iy);
            let pb = field.position(jx, jy);
            pa + (pb - pa) * t
        });
        key
    };
    let mut open = false;
    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let c = [inside(ix, iy), inside(ix + 1, iy), inside(ix + 1, iy + 1), inside(ix, iy + 1)];
            let case = c.iter().enumerate().fold(0u8, |m, (k, &b)| m | (u8::from(b) << k));
            if case == 0 || case == 15 {
                continue;
            }
            let edges = [(true, ix, iy), (false, ix + 1, iy), (true, ix, iy + 1), (false, ix, iy)];
            let cut = |k: usize| c[k] != c[(k + 1) % 4];
            let mut pairs: Vec<(usize, usize)> = Vec::with_capacity(2);
            if case == 5 || case == 10 {
                let avg = 0.25
                    * (field.get(ix, iy) + field.get(ix + 1, iy) + field.get(ix + 1, iy + 1) + field.get(ix, iy + 1));
                let centre_in = avg >= level;
                if (case == 5) == centre_in {
                    pairs.push((0, 1));
                    pairs.push((2, 3));
                } else {
                    pairs.push((3, 0));
                    pairs.push((1, 2));
                }
            } else {
                let ks: Vec<usize> = (0..4).filter(|&k| cut(k)).collect();
                pairs.push((ks[0], ks[1]));
            }
            if ix == 0 || iy == 0 || ix + 2 == nx || iy + 2 == ny {
                open = true;
            }
            for (a, b) in pairs {
                let ka = crossing(edges[a].0, edges[a].1, edges[a].2);
                let kb = crossing(edges[b].0, edges[b].1, edges[b].2);
                adjacency.entry(ka).or_default().push(kb);
                adjacency.entry(kb).or_default().push(ka);
            }
        }
    }
    if adjacency.is_empty() {
        return Err(Error::FrontNotFound { level });
    }
    if open || adjacency.values().any(|v| v.len() != 2) {
        return Err(Error::FrontOpen { level });
    }

    let mut keys: Vec<usize> = adjacency.keys().copied().collect();
    keys.sort_unstable();
    let mut visited: HashMap<usize, bool> = HashMap::new();
    let mut best: Vec<Point2<f64>> = Vec::new();
    let mut best_len = -1.0;
    let mut components = 0;
    for &start in &keys {
        if visited.contains_key(&start) {
            continue;
        }
        components += 1;
        let mut loop_pts = Vec::new();
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            visited.insert(cur, true);
            loop_pts.push(points[&cur]);
            let nb = &adjacency[&cur];
            let next = if nb[0] != prev { nb[0] } else { nb[1] };
            prev = cur;
            cur = next;
            if cur == start {
                break;
            }
        }
        let len = perimeter(&loop_pts);
        if len > best_len {
            best_len = len;
            best = loop_pts;
        }
    }
    if best.len() < MIN_CONTOUR_POINTS {
        return Err(Error::FrontNotFound { level });
    }
    Ok(summarize(best, center, components))
}

fn perimeter(pts: &[Point2<f64>]) -> f64 {
    (0..pts.len()).map(|i| (pts[(i + 1) % pts.len()] - pts[i]).norm()).sum()
}

fn summarize(points: Vec<Point2<f64>>, center: Point2<f64>, components: usize) -> Contour {
    let n = points.len();
    let mut weighted = 0.0;
    let mut total = 0.0;
    let mut min_radius = f64::INFINITY;
    let mut max_radius: f64 = 0.0;
    for i in 0..n {
        let (a, b) = (points[i], points[(i + 1) % n]);
        let (ra, rb) = ((a - center).norm(), (b - center).norm());
        let len = (b - a).norm();
        weighted += 0.5 * (ra + rb) * len;
        total += len;
        min_radius = min_radius.min(ra);
        max_radius = max_radius.max(ra);
    }
    Contour {
        mean_radius: weighted / total,
        min_radius,
        max_radius,
        perimeter: total,
        points,
        center,
        components,
    }
}
