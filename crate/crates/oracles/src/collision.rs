//! Footprint collision by dense point sampling.

use crate::Pose;

#[derive(Clone, Copy, Debug)]
pub enum Shape {
    Disc { cx: f64, cy: f64, r: f64 },
    Rect { x0: f64, y0: f64, x1: f64, y1: f64 },
}

impl Shape {
    fn holds(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::Disc { cx, cy, r } => (x - cx).powi(2) + (y - cy).powi(2) <= r * r,
            Shape::Rect { x0, y0, x1, y1 } => x >= x0 && x <= x1 && y >= y0 && y <= y1,
        }
    }
}

/// Samples an `n × n` grid (boundary included) over the car rectangle
/// `[-rear, length - rear] × [-width/2, width/2]` and reports whether any sample lies in a
/// shape or outside `[0, extent]²`.
pub fn footprint_hits_sampled(
    pose: Pose,
    length: f64,
    width: f64,
    rear: f64,
    shapes: &[Shape],
    extent: f64,
    n: usize,
) -> bool {
    let n = n.max(2);
    let (s, c) = pose.2.sin_cos();
    for i in 0..n {
        let u = -rear + length * i as f64 / (n - 1) as f64;
        for j in 0..n {
            let v = -0.5 * width + width * j as f64 / (n - 1) as f64;
            let x = pose.0 + u * c - v * s;
            let y = pose.1 + u * s + v * c;
            if x < 0.0 || y < 0.0 || x > extent || y > extent {
                return true;
            }
            if shapes.iter().any(|sh| sh.holds(x, y)) {
                return true;
            }
        }
    }
    false
}
