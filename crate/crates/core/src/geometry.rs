//! Configuration-space primitives, workspaces, obstacles and footprint collision checks.
//!
//! The world is the square `[0, L]²` with a heading circle on top. Obstacles are discs
//! and axis-aligned boxes; the car is an oriented rectangle posed at its reference point.
//! Leaving the square counts as a collision.

use std::io::Write;
use std::path::Path;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::scalar::Scalar;

/// Workspace side length used throughout unless configured otherwise.
pub const DEFAULT_EXTENT: f64 = 500.0;
/// Minimum turning radius used throughout unless configured otherwise.
pub const DEFAULT_RHO: f64 = 25.0;

/// Wraps an angle into `[-π, π)` without validation.
#[inline]
pub fn wrap<T: Scalar>(theta: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let mut r = theta - two_pi * ((theta + pi) / two_pi).floor();
    if r >= pi {
        r = r - two_pi;
    }
    if r < -pi {
        r = r + two_pi;
    }
    r
}

/// Wraps an angle into `[-π, π)`.
pub fn wrap_angle<T: Scalar>(theta: T) -> Result<T> {
    if !theta.is_finite() {
        return Err(Error::NonFinite("wrap_angle"));
    }
    Ok(wrap(theta))
}

/// Travel direction of the car.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gear {
    Forward,
    Backward,
}

impl Gear {
    #[inline]
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Gear::Forward => T::one(),
            Gear::Backward => -T::one(),
        }
    }

    pub fn flipped(self) -> Gear {
        match self {
            Gear::Forward => Gear::Backward,
            Gear::Backward => Gear::Forward,
        }
    }
}

/// A pose `(x, y, θ)` of the car's reference point; `θ` is kept in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Configuration<T> {
    pub x: T,
    pub y: T,
    pub theta: T,
}

impl<T: Scalar> Configuration<T> {
    /// Builds a configuration, wrapping the heading.
    pub fn new(x: T, y: T, theta: T) -> Self {
        Self {
            x,
            y,
            theta: wrap(theta),
        }
    }

    pub fn try_new(x: T, y: T, theta: T) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::NonFinite("configuration position"));
        }
        Ok(Self {
            x,
            y,
            theta: wrap_angle(theta)?,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }

    /// Euclidean distance between the positions, heading ignored.
    #[inline]
    pub fn position_distance(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Absolute wrapped heading difference in `[0, π]`.
    #[inline]
    pub fn heading_distance(&self, other: &Self) -> T {
        wrap(other.theta - self.theta).abs()
    }

    /// Reflection `(x, y, θ) → (x, -y, -θ)`.
    pub fn mirrored(&self) -> Self {
        Self::new(self.x, -self.y, -self.theta)
    }

    pub fn cast<U: Scalar>(&self) -> Configuration<U> {
        Configuration {
            x: self.x.cast(),
            y: self.y.cast(),
            theta: self.theta.cast(),
        }
    }
}

/// Network-facing encoding of a configuration: position scaled by the extent and the
/// heading unrolled onto the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedConfig<T> {
    pub xn: T,
    pub yn: T,
    pub cos_t: T,
    pub sin_t: T,
}

impl<T: Scalar> NormalizedConfig<T> {
    pub fn as_array(&self) -> [T; 4] {
        [self.xn, self.yn, self.cos_t, self.sin_t]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }
}

pub fn normalize<T: Scalar>(c: &Configuration<T>, extent: T) -> Result<NormalizedConfig<T>> {
    if !c.is_finite() {
        return Err(Error::NonFinite("normalize"));
    }
    if c.x < T::zero() || c.y < T::zero() || c.x > extent || c.y > extent {
        return Err(Error::OutOfExtent {
            x: c.x.as_f64(),
            y: c.y.as_f64(),
            extent: extent.as_f64(),
        });
    }
    Ok(NormalizedConfig {
        xn: c.x / extent,
        yn: c.y / extent,
        cos_t: c.theta.cos(),
        sin_t: c.theta.sin(),
    })
}

pub fn denormalize<T: Scalar>(n: &NormalizedConfig<T>, extent: T) -> Configuration<T> {
    Configuration::new(n.xn * extent, n.yn * extent, n.sin_t.atan2(n.cos_t))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Obstacle<T> {
    Disc {
        cx: T,
        cy: T,
        r: T,
    },
    #[serde(rename = "box")]
    AxisAlignedBox { xmin: T, ymin: T, xmax: T, ymax: T },
}

impl<T: Scalar> Obstacle<T> {
    pub fn validate(&self, extent: T) -> Result<()> {
        let ok = match *self {
            Obstacle::Disc { cx, cy, r } => {
                let finite = cx.is_finite() && cy.is_finite() && r.is_finite();
                // closest point of the square to the centre
                let qx = cx.max(T::zero()).min(extent);
                let qy = cy.max(T::zero()).min(extent);
                finite && r > T::zero() && (cx - qx).hypot(cy - qy) <= r
            }
            Obstacle::AxisAlignedBox {
                xmin,
                ymin,
                xmax,
                ymax,
            } => {
                let finite = [xmin, ymin, xmax, ymax].iter().all(|v| v.is_finite());
                finite
                    && xmin < xmax
                    && ymin < ymax
                    && xmax >= T::zero()
                    && ymax >= T::zero()
                    && xmin <= extent
                    && ymin <= extent
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "obstacle {self:?} is degenerate or misses the workspace"
            )))
        }
    }

    pub fn cast<U: Scalar>(&self) -> Obstacle<U> {
        match *self {
            Obstacle::Disc { cx, cy, r } => Obstacle::Disc { cx: cx.cast(), cy: cy.cast(), r: r.cast() },
            Obstacle::AxisAlignedBox { xmin, ymin, xmax, ymax } => Obstacle::AxisAlignedBox {
                xmin: xmin.cast(),
                ymin: ymin.cast(),
                xmax: xmax.cast(),
                ymax: ymax.cast(),
            },
        }
    }

    /// Point membership (closed set).
    pub fn contains_point(&self, px: T, py: T) -> bool {
        match *self {
            Obstacle::Disc { cx, cy, r } => (px - cx).hypot(py - cy) <= r,
            Obstacle::AxisAlignedBox {
                xmin,
                ymin,
                xmax,
                ymax,
            } => px >= xmin && px <= xmax && py >= ymin && py <= ymax,
        }
    }
}

/// Rectangle of the car body relative to its reference point. The reference point sits on
/// the longitudinal axis `rear_offset` in front of the rear edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Footprint<T> {
    pub length: T,
    pub width: T,
    pub rear_offset: T,
}

impl<T: Scalar> Default for Footprint<T> {
    fn default() -> Self {
        Self {
            length: T::of(20.0),
            width: T::of(10.0),
            rear_offset: T::of(5.0),
        }
    }
}

impl<T: Scalar> Footprint<T> {
    pub fn new(length: T, width: T, rear_offset: T) -> Result<Self> {
        if !(length > T::zero() && width > T::zero())
            || rear_offset < T::zero()
            || rear_offset > length
        {
            return Err(Error::InvalidArgument(format!(
                "footprint {length}x{width} with rear offset {rear_offset}"
            )));
        }
        Ok(Self {
            length,
            width,
            rear_offset,
        })
    }

    /// Degenerate footprint: collision reduces to a point test.
    pub fn point() -> Self {
        Self {
            length: T::zero(),
            width: T::zero(),
            rear_offset: T::zero(),
        }
    }

    /// Longitudinal extent `[back, front]` and half width in the body frame.
    #[inline]
    fn body_box(&self) -> (T, T, T) {
        (
            -self.rear_offset,
            self.length - self.rear_offset,
            self.width * T::of(0.5),
        )
    }

    /// World-frame corners, counter-clockwise from rear right.
    pub fn corners(&self, c: &Configuration<T>) -> [(T, T); 4] {
        let (back, front, hw) = self.body_box();
        let (s, co) = c.theta.sin_cos();
        let place = |u: T, v: T| (c.x + u * co - v * s, c.y + u * s + v * co);
        [
            place(back, -hw),
            place(front, -hw),
            place(front, hw),
            place(back, hw),
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Workspace<T> {
    pub id: String,
    pub extent: T,
    pub obstacles: Vec<Obstacle<T>>,
}

impl<T: Scalar> Workspace<T> {
    pub fn new(id: impl Into<String>, extent: T, obstacles: Vec<Obstacle<T>>) -> Result<Self> {
        let ws = Self {
            id: id.into(),
            extent,
            obstacles,
        };
        ws.validate()?;
        Ok(ws)
    }

    pub fn cast<U: Scalar>(&self) -> Workspace<U> {
        Workspace {
            id: self.id.clone(),
            extent: self.extent.cast(),
            obstacles: self.obstacles.iter().map(Obstacle::cast).collect(),
        }
    }

    pub fn empty(id: impl Into<String>, extent: T) -> Self {
        Self {
            id: id.into(),
            extent,
            obstacles: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.extent > T::zero()) || !self.extent.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "workspace extent {} must be positive",
                self.extent
            )));
        }
        self.obstacles
            .iter()
            .try_for_each(|o| o.validate(self.extent))
    }

    pub fn contains(&self, c: &Configuration<T>) -> bool {
        c.x >= T::zero() && c.y >= T::zero() && c.x <= self.extent && c.y <= self.extent
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let ws: Self = serde_json::from_str(s)?;
        ws.validate()?;
        Ok(ws)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = self.to_json()?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Points sampled along every obstacle boundary at roughly `spacing`.
    pub fn point_cloud(&self, spacing: T) -> Vec<(T, T)> {
        let mut pts = Vec::new();
        for o in &self.obstacles {
            match *o {
                Obstacle::Disc { cx, cy, r } => {
                    let circumference = T::TAU() * r;
                    let n = (circumference / spacing).ceil().to_usize().unwrap_or(3).max(3);
                    for i in 0..n {
                        let a = T::TAU() * T::of(i as f64) / T::of(n as f64);
                        pts.push((cx + r * a.cos(), cy + r * a.sin()));
                    }
                }
                Obstacle::AxisAlignedBox {
                    xmin,
                    ymin,
                    xmax,
                    ymax,
                } => {
                    let corners = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)];
                    for k in 0..4 {
                        let (ax, ay) = corners[k];
                        let (bx, by) = corners[(k + 1) % 4];
                        let len = (bx - ax).hypot(by - ay);
                        let n = (len / spacing).ceil().to_usize().unwrap_or(1).max(1);
                        for i in 0..n {
                            let f = T::of(i as f64) / T::of(n as f64);
                            pts.push((ax + (bx - ax) * f, ay + (by - ay) * f));
                        }
                    }
                }
            }
        }
        pts
    }

    /// CSV with columns `x,y` of [`Workspace::point_cloud`].
    pub fn write_point_cloud_csv<W: Write>(&self, spacing: T, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y"])?;
        for (x, y) in self.point_cloud(spacing) {
            w.write_record([x.to_string(), y.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn interval_overlap<T: Scalar>(a: (T, T), b: (T, T)) -> bool {
    a.0 <= b.1 && b.0 <= a.1
}

fn project<T: Scalar>(pts: &[(T, T)], ax: T, ay: T) -> (T, T) {
    pts.iter().fold((T::infinity(), T::neg_infinity()), |(lo, hi), &(px, py)| {
        let d = px * ax + py * ay;
        (lo.min(d), hi.max(d))
    })
}

fn obstacle_hits_footprint<T: Scalar>(
    o: &Obstacle<T>,
    c: &Configuration<T>,
    fp: &Footprint<T>,
    corners: &[(T, T); 4],
) -> bool {
    let (back, front, hw) = fp.body_box();
    let (s, co) = c.theta.sin_cos();
    match *o {
        Obstacle::Disc { cx, cy, r } => {
            // disc centre in the body frame, then distance to the body box
            let dx = cx - c.x;
            let dy = cy - c.y;
            let u = dx * co + dy * s;
            let v = -dx * s + dy * co;
            let qu = u.max(back).min(front);
            let qv = v.max(-hw).min(hw);
            (u - qu).hypot(v - qv) <= r
        }
        Obstacle::AxisAlignedBox {
            xmin,
            ymin,
            xmax,
            ymax,
        } => {
            // separating axes: world x, world y, body u, body v
            let (rx0, rx1) = project(corners, T::one(), T::zero());
            if !interval_overlap((rx0, rx1), (xmin, xmax)) {
                return false;
            }
            let (ry0, ry1) = project(corners, T::zero(), T::one());
            if !interval_overlap((ry0, ry1), (ymin, ymax)) {
                return false;
            }
            let box_pts = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)];
            let ref_u = c.x * co + c.y * s;
            let bu = project(&box_pts, co, s);
            if !interval_overlap(bu, (ref_u + back, ref_u + front)) {
                return false;
            }
            let ref_v = -c.x * s + c.y * co;
            let bv = project(&box_pts, -s, co);
            interval_overlap(bv, (ref_v - hw, ref_v + hw))
        }
    }
}

/// True when the footprint posed at `c` touches an obstacle or leaves the extent.
pub fn collides<T: Scalar>(c: &Configuration<T>, fp: &Footprint<T>, w: &Workspace<T>) -> bool {
    let corners = fp.corners(c);
    let l = w.extent;
    if corners
        .iter()
        .any(|&(x, y)| x < T::zero() || y < T::zero() || x > l || y > l)
    {
        return true;
    }
    w.obstacles
        .iter()
        .any(|o| obstacle_hits_footprint(o, c, fp, &corners))
}

/// True when any of the sampled poses collides.
pub fn path_collides<T: Scalar>(
    points: &[Configuration<T>],
    fp: &Footprint<T>,
    w: &Workspace<T>,
) -> Result<bool> {
    if points.is_empty() {
        return Err(Error::Empty("path_collides needs at least one pose"));
    }
    Ok(points.iter().any(|p| collides(p, fp, w)))
}

/// Parameters of [`random_workspace`] beyond the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkspaceSpec<T> {
    pub n_obstacles: usize,
    pub extent: T,
    /// Obstacle size (disc diameter or box side) range.
    pub size_range: (T, T),
    /// Squares of this side at the four extent corners stay obstacle-free.
    pub corner_margin: T,
}

impl<T: Scalar> WorkspaceSpec<T> {
    pub fn new(n_obstacles: usize, extent: T, size_range: (T, T), rho: T) -> Self {
        Self {
            n_obstacles,
            extent,
            size_range,
            corner_margin: rho + rho,
        }
    }
}

impl<T: Scalar> Default for WorkspaceSpec<T> {
    fn default() -> Self {
        Self::new(
            5,
            T::of(DEFAULT_EXTENT),
            (T::of(40.0), T::of(100.0)),
            T::of(DEFAULT_RHO),
        )
    }
}

fn overlaps_square<T: Scalar>(o: &Obstacle<T>, x0: T, y0: T, x1: T, y1: T) -> bool {
    match *o {
        Obstacle::Disc { cx, cy, r } => {
            let qx = cx.max(x0).min(x1);
            let qy = cy.max(y0).min(y1);
            (cx - qx).hypot(cy - qy) <= r
        }
        Obstacle::AxisAlignedBox {
            xmin,
            ymin,
            xmax,
            ymax,
        } => interval_overlap((xmin, xmax), (x0, x1)) && interval_overlap((ymin, ymax), (y0, y1)),
    }
}

/// Random discs and boxes with free corner squares. Deterministic in `seed`.
pub fn random_workspace<T: Scalar>(seed: u64, spec: &WorkspaceSpec<T>) -> Workspace<T> {
    let mut rng = rng::stream(seed, "workspace", "obstacles");
    let l = spec.extent.as_f64();
    let (lo, hi) = (spec.size_range.0.as_f64(), spec.size_range.1.as_f64());
    let m = spec.corner_margin;
    let ext = spec.extent;
    let corner_squares = [
        (T::zero(), T::zero(), m, m),
        (ext - m, T::zero(), ext, m),
        (ext - m, ext - m, ext, ext),
        (T::zero(), ext - m, m, ext),
    ];
    let mut obstacles = Vec::with_capacity(spec.n_obstacles);
    while obstacles.len() < spec.n_obstacles {
        let cx = rng.gen_range(0.0..l);
        let cy = rng.gen_range(0.0..l);
        let size = |rng: &mut rng::Rng| if hi > lo { rng.gen_range(lo..hi) } else { lo };
        let o = if rng.gen_bool(0.5) {
            Obstacle::Disc {
                cx: T::of(cx),
                cy: T::of(cy),
                r: T::of(0.5 * size(&mut rng)),
            }
        } else {
            let (w, h) = (size(&mut rng), size(&mut rng));
            Obstacle::AxisAlignedBox {
                xmin: T::of(cx - 0.5 * w),
                ymin: T::of(cy - 0.5 * h),
                xmax: T::of(cx + 0.5 * w),
                ymax: T::of(cy + 0.5 * h),
            }
        };
        if corner_squares
            .iter()
            .any(|&(x0, y0, x1, y1)| overlaps_square(&o, x0, y0, x1, y1))
        {
            continue;
        }
        obstacles.push(o);
    }
    Workspace {
        id: format!("ws-{seed}"),
        extent: spec.extent,
        obstacles,
    }
}

/// Uniformly random collision-free configuration, or `None` after `max_tries` rejections.
pub fn random_free_configuration<T: Scalar>(
    rng: &mut rng::Rng,
    fp: &Footprint<T>,
    w: &Workspace<T>,
    max_tries: usize,
) -> Option<Configuration<T>> {
    let l = w.extent.as_f64();
    for _ in 0..max_tries {
        let c = Configuration::new(
            T::of(rng.gen_range(0.0..l)),
            T::of(rng.gen_range(0.0..l)),
            T::of(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)),
        );
        if !collides(&c, fp, w) {
            return Some(c);
        }
    }
    None
}
