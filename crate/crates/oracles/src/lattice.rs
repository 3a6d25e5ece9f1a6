//! Shortest paths on a four-heading state lattice.
//!
//! States sit on grid points spaced `resolution` apart with headings at multiples of π/2.
//! Motions are straight steps of one cell and quarter circles of radius `rho`, in both
//! gears, so every lattice path is a drivable curve and its cost bounds the true
//! cost-to-go from above. Halving the resolution yields a superset lattice, so costs at
//! shared states never increase under refinement.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::Pose;

#[derive(Debug, Clone, PartialEq)]
pub enum LatticeError {
    GoalNotOnLattice,
    GoalColliding,
    RadiusNotMultiple,
}

pub struct LatticeCosts {
    pub resolution: f64,
    pub n: usize,
    costs: Vec<f64>,
}

impl LatticeCosts {
    fn idx(&self, ix: usize, iy: usize, h: usize) -> usize {
        (ix * self.n + iy) * 4 + h
    }

    /// Cost-to-go of a lattice pose, `None` for off-lattice poses, `inf` when unreachable.
    pub fn cost(&self, p: Pose) -> Option<f64> {
        let (ix, iy, h) = snap(p, self.resolution)?;
        if ix >= self.n || iy >= self.n {
            return None;
        }
        Some(self.costs[self.idx(ix, iy, h)])
    }
}

fn snap(p: Pose, res: f64) -> Option<(usize, usize, usize)> {
    let fx = p.0 / res;
    let fy = p.1 / res;
    let fh = crate::wrap_pi(p.2).rem_euclid(std::f64::consts::TAU) / FRAC_PI_2;
    let (rx, ry, rh) = (fx.round(), fy.round(), fh.round());
    if (fx - rx).abs() > 1e-9 || (fy - ry).abs() > 1e-9 || (fh - rh).abs() > 1e-9 || rx < 0.0 || ry < 0.0 {
        return None;
    }
    Some((rx as usize, ry as usize, (rh as usize) % 4))
}

#[derive(PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

const DIRS: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Cost-to-go to `goal` for every lattice state. `is_free(x, y, θ)` is queried along each
/// motion at spacing at most `resolution / 4`.
pub fn lattice_c2g(
    goal: Pose,
    extent: f64,
    rho: f64,
    resolution: f64,
    is_free: &dyn Fn(f64, f64, f64) -> bool,
) -> Result<LatticeCosts, LatticeError> {
    let (gx, gy, gh) = snap(goal, resolution).ok_or(LatticeError::GoalNotOnLattice)?;
    if !is_free(goal.0, goal.1, goal.2) {
        return Err(LatticeError::GoalColliding);
    }
    let rc = rho / resolution;
    if (rc - rc.round()).abs() > 1e-9 || rc < 1.0 {
        return Err(LatticeError::RadiusNotMultiple);
    }
    let rc = rc.round() as i64;
    let n = (extent / resolution).floor() as usize + 1;
    let mut out = LatticeCosts {
        resolution,
        n,
        costs: vec![f64::INFINITY; n * n * 4],
    };
    let start = out.idx(gx, gy, gh);
    out.costs[start] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Item(0.0, start));
    let arc_len = FRAC_PI_2 * rho;
    let samples = |len: f64| ((len / (resolution / 4.0)).ceil() as usize).max(2);
    while let Some(Item(c, id)) = heap.pop() {
        if c > out.costs[id] {
            continue;
        }
        let h = id % 4;
        let iy = (id / 4) % n;
        let ix = id / 4 / n;
        let th = h as f64 * FRAC_PI_2;
        let (fx, fy) = DIRS[h];
        let (lx, ly) = DIRS[(h + 1) % 4];
        // (forward cells, left cells, heading change, length, curvature sign, gear sign)
        let mut motions: Vec<(i64, i64, i64, f64, f64, f64)> = Vec::with_capacity(6);
        for &g in &[1i64, -1] {
            motions.push((g, 0, 0, resolution, 0.0, g as f64));
            // a left arc ends rc along the gear direction and rc to the left whatever the gear
            motions.push((g * rc, rc, g, arc_len, 1.0, g as f64));
            motions.push((g * rc, -rc, -g, arc_len, -1.0, g as f64));
        }
        for (df, dl, dh, len, k, g) in motions {
            let nx = ix as i64 + df * fx + dl * lx;
            let ny = iy as i64 + df * fy + dl * ly;
            if nx < 0 || ny < 0 || nx >= n as i64 || ny >= n as i64 {
                continue;
            }
            let nh = (h as i64 + dh).rem_euclid(4) as usize;
            let m = samples(len);
            let (x0, y0) = (ix as f64 * resolution, iy as f64 * resolution);
            let free = (1..=m).all(|i| {
                let s = g * len * i as f64 / m as f64;
                let (x, y, t) = if k == 0.0 {
                    (x0 + s * th.cos(), y0 + s * th.sin(), th)
                } else {
                    let t = th + k * s / rho;
                    (
                        x0 + rho * k * (t.sin() - th.sin()),
                        y0 - rho * k * (t.cos() - th.cos()),
                        t,
                    )
                };
                is_free(x, y, t)
            });
            if !free {
                continue;
            }
            let nid = out.idx(nx as usize, ny as usize, nh);
            let nc = c + len;
            if nc < out.costs[nid] {
                out.costs[nid] = nc;
                heap.push(Item(nc, nid));
            }
        }
    }
    Ok(out)
}
