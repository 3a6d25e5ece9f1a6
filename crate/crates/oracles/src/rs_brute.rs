//! Shortest Reeds-Shepp length by numerical search over word parameters.
//!
//! Every candidate word is a sequence of unit-radius arcs and straights with three free
//! signed lengths (some words pin an arc to ±π/2 or tie two arcs together). The search set
//! is a superset of the classical families, so its minimum is the optimum whenever each
//! word's solutions are all found. Solutions are found by damped Gauss-Newton started from
//! a grid of seeds over the parameter box.

use crate::{wrap_pi, Pose};
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Clone, Copy, Debug, PartialEq)]
enum Curv {
    Left,
    Right,
    Line,
}

impl Curv {
    fn k(self) -> f64 {
        match self {
            Curv::Left => 1.0,
            Curv::Right => -1.0,
            Curv::Line => 0.0,
        }
    }
}

/// Where a segment's signed length comes from.
#[derive(Clone, Copy, Debug)]
enum Len {
    Free(usize),
    /// `sign · free[i]`
    Tied(usize, f64),
    Fixed(f64),
}

#[derive(Clone, Debug)]
struct Word {
    segs: Vec<(Curv, Len)>,
}

fn words() -> Vec<Word> {
    use Curv::*;
    let all = [Left, Right, Line];
    let turns = [Left, Right];
    let mut out = Vec::new();
    // three free segments, no two straights in a row
    for &a in &all {
        for &b in &all {
            for &c in &all {
                if (a == Line && b == Line) || (b == Line && c == Line) {
                    continue;
                }
                out.push(Word {
                    segs: vec![(a, Len::Free(0)), (b, Len::Free(1)), (c, Len::Free(2))],
                });
            }
        }
    }
    // alternating four arcs with equal middle magnitudes
    for &(a, b) in &[(Left, Right), (Right, Left)] {
        for &sg in &[1.0, -1.0] {
            out.push(Word {
                segs: vec![
                    (a, Len::Free(0)),
                    (b, Len::Free(1)),
                    (a, Len::Tied(1, sg)),
                    (b, Len::Free(2)),
                ],
            });
        }
    }
    // one quarter turn next to the straight
    for &a in &turns {
        for &b in &turns {
            for &c in &turns {
                for &q in &[FRAC_PI_2, -FRAC_PI_2] {
                    out.push(Word {
                        segs: vec![
                            (a, Len::Free(0)),
                            (b, Len::Fixed(q)),
                            (Line, Len::Free(1)),
                            (c, Len::Free(2)),
                        ],
                    });
                    out.push(Word {
                        segs: vec![
                            (a, Len::Free(0)),
                            (Line, Len::Free(1)),
                            (b, Len::Fixed(q)),
                            (c, Len::Free(2)),
                        ],
                    });
                }
            }
        }
    }
    // quarter turns on both sides of the straight
    for &a in &turns {
        for &b in &turns {
            for &c in &turns {
                for &d in &turns {
                    for &q1 in &[FRAC_PI_2, -FRAC_PI_2] {
                        for &q2 in &[FRAC_PI_2, -FRAC_PI_2] {
                            out.push(Word {
                                segs: vec![
                                    (a, Len::Free(0)),
                                    (b, Len::Fixed(q1)),
                                    (Line, Len::Free(1)),
                                    (c, Len::Fixed(q2)),
                                    (d, Len::Free(2)),
                                ],
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

impl Word {
    fn lengths(&self, p: &[f64; 3]) -> Vec<f64> {
        self.segs
            .iter()
            .map(|&(_, l)| match l {
                Len::Free(i) => p[i],
                Len::Tied(i, s) => s * p[i],
                Len::Fixed(v) => v,
            })
            .collect()
    }

    fn total(&self, p: &[f64; 3]) -> f64 {
        self.lengths(p).iter().map(|l| l.abs()).sum()
    }

    /// End pose from the origin and the Jacobian of the end pose w.r.t. the free parameters.
    fn eval(&self, p: &[f64; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
        let lens = self.lengths(p);
        let mut poses = Vec::with_capacity(lens.len());
        let (mut x, mut y, mut th) = (0.0f64, 0.0f64, 0.0f64);
        for (&(c, _), &l) in self.segs.iter().zip(&lens) {
            let k = c.k();
            if k == 0.0 {
                x += l * th.cos();
                y += l * th.sin();
            } else {
                let th2 = th + k * l;
                x += (th2.sin() - th.sin()) / k;
                y -= (th2.cos() - th.cos()) / k;
                th = th2;
            }
            poses.push((x, y, th));
        }
        // moving the end of segment i by dl advances along its exit tangent and swings
        // everything after it about that point by k·dl
        let mut jac = [[0.0; 3]; 3];
        for (i, &(c, l)) in self.segs.iter().enumerate() {
            let (xi, yi, ti) = poses[i];
            let k = c.k();
            let col = [
                ti.cos() - k * (y - yi),
                ti.sin() + k * (x - xi),
                k,
            ];
            let (idx, scale) = match l {
                Len::Free(j) => (j, 1.0),
                Len::Tied(j, s) => (j, s),
                Len::Fixed(_) => continue,
            };
            for r in 0..3 {
                jac[r][idx] += scale * col[r];
            }
        }
        ([x, y, th], jac)
    }
}

fn solve3(a: [[f64; 3]; 3], b: [f64; 3]) -> Option<[f64; 3]> {
    let det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    if det.abs() < 1e-300 {
        return None;
    }
    let mut out = [0.0; 3];
    for c in 0..3 {
        let mut m = a;
        for r in 0..3 {
            m[r][c] = b[r];
        }
        let d = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        out[c] = d / det;
    }
    Some(out)
}

fn residual(end: &[f64; 3], goal: &[f64; 3]) -> [f64; 3] {
    [end[0] - goal[0], end[1] - goal[1], wrap_pi(end[2] - goal[2])]
}

fn norm2(r: &[f64; 3]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Levenberg-Marquardt polish from one seed; returns a root if it converges.
fn polish(w: &Word, goal: &[f64; 3], seed: [f64; 3], tol: f64) -> Option<[f64; 3]> {
    let mut p = seed;
    let (mut end, mut jac) = w.eval(&p);
    let mut r = residual(&end, goal);
    let mut f = norm2(&r);
    let mut lambda = 1e-3;
    for _ in 0..200 {
        if f < 1e-26 {
            break;
        }
        let mut jtj = [[0.0; 3]; 3];
        let mut jtr = [0.0; 3];
        for a in 0..3 {
            for b in 0..3 {
                jtj[a][b] = (0..3).map(|k| jac[k][a] * jac[k][b]).sum();
            }
            jtr[a] = -(0..3).map(|k| jac[k][a] * r[k]).sum::<f64>();
        }
        let mut improved = false;
        for _ in 0..30 {
            let mut m = jtj;
            for d in 0..3 {
                m[d][d] += lambda * (1.0 + jtj[d][d]);
            }
            let Some(delta) = solve3(m, jtr) else {
                lambda *= 10.0;
                continue;
            };
            let cand = [p[0] + delta[0], p[1] + delta[1], p[2] + delta[2]];
            let (e2, j2) = w.eval(&cand);
            let r2 = residual(&e2, goal);
            let f2 = norm2(&r2);
            if f2 < f {
                p = cand;
                end = e2;
                jac = j2;
                r = r2;
                f = f2;
                lambda = (lambda * 0.3).max(1e-12);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    let _ = end;
    if f.sqrt() <= tol {
        Some(p)
    } else {
        None
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Shortest Reeds-Shepp length between two poses.
///
/// `resolution` (at most `1e-3`) bounds the end-pose error, in unit-radius coordinates, of
/// the parameter vectors accepted as solutions.
pub fn rs_brute(s: Pose, t: Pose, rho: f64, resolution: f64) -> f64 {
    assert!(resolution <= 1e-3 && resolution > 0.0);
    assert!(rho > 0.0);
    let (dx, dy) = (t.0 - s.0, t.1 - s.1);
    let (sn, cs) = s.2.sin_cos();
    let gx = (cs * dx + sn * dy) / rho;
    let gy = (-sn * dx + cs * dy) / rho;
    let gth = wrap_pi(t.2 - s.2);
    if gx.abs() < 1e-15 && gy.abs() < 1e-15 && gth.abs() < 1e-15 {
        return 0.0;
    }
    let goal = [gx, gy, gth];
    let d = gx.hypot(gy);
    // straights never need to exceed the gap plus a few turning radii
    let smax = d + 6.0;
    let arc_seeds = linspace(-PI, PI, 7);
    let line_seeds = linspace(-smax, smax, 9);
    let mut best = f64::INFINITY;
    // the root accuracy requested from the solver, far below the acceptance resolution
    let root_tol = resolution * 1e-6;
    for w in words() {
        let kinds: Vec<bool> = (0..3)
            .map(|i| {
                w.segs
                    .iter()
                    .find(|(_, l)| matches!(l, Len::Free(j) if *j == i))
                    .map(|(c, _)| *c == Curv::Line)
                    .unwrap_or(false)
            })
            .collect();
        let grid = |i: usize| if kinds[i] { &line_seeds } else { &arc_seeds };
        for &a in grid(0) {
            for &b in grid(1) {
                for &c in grid(2) {
                    if let Some(p) = polish(&w, &goal, [a, b, c], root_tol) {
                        best = best.min(w.total(&p));
                    }
                }
            }
        }
    }
    best * rho
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cases() {
        assert_eq!(rs_brute((1.0, 2.0, 0.3), (1.0, 2.0, 0.3), 1.0, 1e-3), 0.0);
        let l = rs_brute((0.0, 0.0, 0.0), (5.0, 0.0, 0.0), 1.0, 1e-3);
        assert!((l - 5.0).abs() < 1e-9, "{l}");
        let l = rs_brute((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), 2.0, 1e-3);
        assert_eq!(l, 0.0);
    }

    #[test]
    fn quarter_circle() {
        let l = rs_brute((0.0, 0.0, 0.0), (1.0, 1.0, FRAC_PI_2), 1.0, 1e-3);
        assert!((l - FRAC_PI_2).abs() < 1e-9, "{l}");
    }

    #[test]
    fn jacobian_matches_differences() {
        let ws = words();
        let p = [0.4, -1.3, 0.8];
        for w in ws.iter().step_by(7) {
            let (_, j) = w.eval(&p);
            for i in 0..3 {
                let mut a = p;
                let mut b = p;
                a[i] += 1e-6;
                b[i] -= 1e-6;
                let (ea, _) = w.eval(&a);
                let (eb, _) = w.eval(&b);
                for r in 0..3 {
                    let fd = (ea[r] - eb[r]) / 2e-6;
                    assert!((fd - j[r][i]).abs() < 1e-6);
                }
            }
        }
    }
}
