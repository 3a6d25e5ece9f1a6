//! Optimal Reeds-Shepp curves.
//!
//! The query is moved into the start frame and scaled to unit turning radius, then every
//! word family (CSC, CCC, CCCC, CCSC, CCSCC together with their time-flipped, reflected and
//! reversed variants, 48 words in total) is solved in closed form. The shortest solution
//! wins; on exact ties the first word in enumeration order is kept. Enumeration order is:
//! CSC, CCC, CCCC, CCSC, CCSCC, and inside each family the order of the calls below.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Configuration, Gear};
use crate::kinematics::advance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Steer {
    Left,
    Straight,
    Right,
}

impl Steer {
    /// Signed unit curvature.
    #[inline]
    pub fn unit_curvature<T: Scalar>(self) -> T {
        match self {
            Steer::Left => T::one(),
            Steer::Straight => T::zero(),
            Steer::Right => -T::one(),
        }
    }
}

/// One primitive of a Reeds-Shepp curve. `param` is the turned angle for arcs and
/// `length / ρ` for straights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsSegment<T> {
    pub steer: Steer,
    pub gear: Gear,
    pub param: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RsPath<T> {
    pub segments: Vec<RsSegment<T>>,
    pub rho: T,
    pub total_length: T,
}

use Steer::{Left as L, Right as R, Straight as S};

const WORDS: [&[Steer]; 18] = [
    &[L, R, L],
    &[R, L, R],
    &[L, R, L, R],
    &[R, L, R, L],
    &[L, R, S, L],
    &[R, L, S, R],
    &[L, S, R, L],
    &[R, S, L, R],
    &[L, R, S, R],
    &[R, L, S, L],
    &[R, S, R, L],
    &[L, S, L, R],
    &[L, S, R],
    &[R, S, L],
    &[L, S, L],
    &[R, S, R],
    &[L, R, S, L, R],
    &[R, L, S, R, L],
];

/// Best word found so far, in unit-radius coordinates with signed parameters.
#[derive(Debug, Clone, Copy)]
struct Word<T> {
    kind: usize,
    params: [T; 5],
    len: T,
}

impl<T: Scalar> Word<T> {
    fn none() -> Self {
        Self {
            kind: 0,
            params: [T::zero(); 5],
            len: T::infinity(),
        }
    }

    #[inline]
    fn offer(&mut self, kind: usize, p: &[T]) {
        let len = p.iter().fold(T::zero(), |acc, v| acc + v.abs());
        if len < self.len {
            let mut params = [T::zero(); 5];
            params[..p.len()].copy_from_slice(p);
            *self = Self { kind, params, len };
        }
    }
}

#[inline]
fn mod2pi<T: Scalar>(x: T) -> T {
    let pi = T::PI();
    let two_pi = pi + pi;
    let v = x % two_pi;
    if v < -pi {
        v + two_pi
    } else if v > pi {
        v - two_pi
    } else {
        v
    }
}

#[inline]
fn polar<T: Scalar>(x: T, y: T) -> (T, T) {
    (x.hypot(y), y.atan2(x))
}

#[inline]
fn zero_tol<T: Scalar>() -> T {
    T::epsilon() * T::of(10.0)
}

fn tau_omega<T: Scalar>(u: T, v: T, xi: T, eta: T, phi: T) -> (T, T) {
    let delta = mod2pi(u - v);
    let a = u.sin() - delta.sin();
    let b = u.cos() - delta.cos() - T::one();
    let t1 = (eta * a - xi * b).atan2(xi * a + eta * b);
    let t2 = T::of(2.0) * (delta.cos() - v.cos() - u.cos()) + T::of(3.0);
    let tau = if t2 < T::zero() {
        mod2pi(t1 + T::PI())
    } else {
        mod2pi(t1)
    };
    let omega = mod2pi(tau - u + v - phi);
    (tau, omega)
}

fn lp_sp_lp<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let (u, t) = polar(x - phi.sin(), y - T::one() + phi.cos());
    if t >= -zero_tol::<T>() {
        let v = mod2pi(phi - t);
        if v >= -zero_tol::<T>() {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_sp_rp<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let (u1, t1) = polar(x + phi.sin(), y - T::one() - phi.cos());
    let u1 = u1 * u1;
    let four = T::of(4.0);
    if u1 >= four {
        let u = (u1 - four).sqrt();
        let theta = T::of(2.0).atan2(u);
        let t = mod2pi(t1 + theta);
        let v = mod2pi(t - phi);
        if t >= -zero_tol::<T>() && v >= -zero_tol::<T>() {
            return Some((t, u, v));
        }
    }
    None
}

fn csc<T: Scalar>(x: T, y: T, phi: T, best: &mut Word<T>) {
    if let Some((t, u, v)) = lp_sp_lp(x, y, phi) {
        best.offer(14, &[t, u, v]);
    }
    if let Some((t, u, v)) = lp_sp_lp(-x, y, -phi) {
        best.offer(14, &[-t, -u, -v]);
    }
    if let Some((t, u, v)) = lp_sp_lp(x, -y, -phi) {
        best.offer(15, &[t, u, v]);
    }
    if let Some((t, u, v)) = lp_sp_lp(-x, -y, phi) {
        best.offer(15, &[-t, -u, -v]);
    }
    if let Some((t, u, v)) = lp_sp_rp(x, y, phi) {
        best.offer(12, &[t, u, v]);
    }
    if let Some((t, u, v)) = lp_sp_rp(-x, y, -phi) {
        best.offer(12, &[-t, -u, -v]);
    }
    if let Some((t, u, v)) = lp_sp_rp(x, -y, -phi) {
        best.offer(13, &[t, u, v]);
    }
    if let Some((t, u, v)) = lp_sp_rp(-x, -y, phi) {
        best.offer(13, &[-t, -u, -v]);
    }
}

fn lp_rm_l<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let (u1, theta) = polar(x - phi.sin(), y - T::one() + phi.cos());
    if u1 <= T::of(4.0) {
        let u = -T::of(2.0) * (T::of(0.25) * u1).asin();
        let t = mod2pi(theta + T::of(0.5) * u + T::PI());
        let v = mod2pi(phi - t + u);
        if t >= -zero_tol::<T>() && u <= zero_tol::<T>() {
            return Some((t, u, v));
        }
    }
    None
}

fn ccc<T: Scalar>(x: T, y: T, phi: T, best: &mut Word<T>) {
    if let Some((t, u, v)) = lp_rm_l(x, y, phi) {
        best.offer(0, &[t, u, v]);
    }
    if let Some((t, u, v)) = lp_rm_l(-x, y, -phi) {
        best.offer(0, &[-t, -u, -v]);
    }
    if let Some((t, u, v)) = lp_rm_l(x, -y, -phi) {
        best.offer(1, &[t, u, v]);
    }
    if let Some((t, u, v)) = lp_rm_l(-x, -y, phi) {
        best.offer(1, &[-t, -u, -v]);
    }
    // reversed traversal
    let xb = x * phi.cos() + y * phi.sin();
    let yb = x * phi.sin() - y * phi.cos();
    if let Some((t, u, v)) = lp_rm_l(xb, yb, phi) {
        best.offer(0, &[v, u, t]);
    }
    if let Some((t, u, v)) = lp_rm_l(-xb, yb, -phi) {
        best.offer(0, &[-v, -u, -t]);
    }
    if let Some((t, u, v)) = lp_rm_l(xb, -yb, -phi) {
        best.offer(1, &[v, u, t]);
    }
    if let Some((t, u, v)) = lp_rm_l(-xb, -yb, phi) {
        best.offer(1, &[-v, -u, -t]);
    }
}

fn lp_rup_lum_rm<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let xi = x + phi.sin();
    let eta = y - T::one() - phi.cos();
    let rho = T::of(0.25) * (T::of(2.0) + (xi * xi + eta * eta).sqrt());
    if rho <= T::one() {
        let u = rho.acos();
        let (t, v) = tau_omega(u, -u, xi, eta, phi);
        if t >= -zero_tol::<T>() && v <= zero_tol::<T>() {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_rum_lum_rp<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let xi = x + phi.sin();
    let eta = y - T::one() - phi.cos();
    let rho = (T::of(20.0) - xi * xi - eta * eta) / T::of(16.0);
    if rho >= T::zero() && rho <= T::one() {
        let u = -rho.acos();
        if u >= -T::of(0.5) * T::PI() {
            let (t, v) = tau_omega(u, u, xi, eta, phi);
            if t >= -zero_tol::<T>() && v >= -zero_tol::<T>() {
                return Some((t, u, v));
            }
        }
    }
    None
}

fn cccc<T: Scalar>(x: T, y: T, phi: T, best: &mut Word<T>) {
    if let Some((t, u, v)) = lp_rup_lum_rm(x, y, phi) {
        best.offer(2, &[t, u, -u, v]);
    }
    if let Some((t, u, v)) = lp_rup_lum_rm(-x, y, -phi) {
        best.offer(2, &[-t, -u, u, -v]);
    }
    if let Some((t, u, v)) = lp_rup_lum_rm(x, -y, -phi) {
        best.offer(3, &[t, u, -u, v]);
    }
    if let Some((t, u, v)) = lp_rup_lum_rm(-x, -y, phi) {
        best.offer(3, &[-t, -u, u, -v]);
    }
    if let Some((t, u, v)) = lp_rum_lum_rp(x, y, phi) {
        best.offer(2, &[t, u, u, v]);
    }
    if let Some((t, u, v)) = lp_rum_lum_rp(-x, y, -phi) {
        best.offer(2, &[-t, -u, -u, -v]);
    }
    if let Some((t, u, v)) = lp_rum_lum_rp(x, -y, -phi) {
        best.offer(3, &[t, u, u, v]);
    }
    if let Some((t, u, v)) = lp_rum_lum_rp(-x, -y, phi) {
        best.offer(3, &[-t, -u, -u, -v]);
    }
}

fn lp_rm_sm_lm<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let (rho, theta) = polar(x - phi.sin(), y - T::one() + phi.cos());
    let two = T::of(2.0);
    if rho >= two {
        let r = (rho * rho - T::of(4.0)).sqrt();
        let u = two - r;
        let t = mod2pi(theta + r.atan2(-two));
        let v = mod2pi(phi - T::of(0.5) * T::PI() - t);
        if t >= -zero_tol::<T>() && u <= zero_tol::<T>() && v <= zero_tol::<T>() {
            return Some((t, u, v));
        }
    }
    None
}

fn lp_rm_sm_rm<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let xi = x + phi.sin();
    let eta = y - T::one() - phi.cos();
    let (rho, theta) = polar(-eta, xi);
    let two = T::of(2.0);
    if rho >= two {
        let t = theta;
        let u = two - rho;
        let v = mod2pi(t + T::of(0.5) * T::PI() - phi);
        if t >= -zero_tol::<T>() && u <= zero_tol::<T>() && v <= zero_tol::<T>() {
            return Some((t, u, v));
        }
    }
    None
}

fn ccsc<T: Scalar>(x: T, y: T, phi: T, best: &mut Word<T>) {
    let h = T::of(0.5) * T::PI();
    if let Some((t, u, v)) = lp_rm_sm_lm(x, y, phi) {
        best.offer(4, &[t, -h, u, v]);
    }
    if let Some((t, u, v)) = lp_rm_sm_lm(-x, y, -phi) {
        best.offer(4, &[-t, h, -u, -v]);
    }
    if let Some((t, u, v)) = lp_rm_sm_lm(x, -y, -phi) {
        best.offer(5, &[t, -h, u, v]);
    }
    if let Some((t, u, v)) = lp_rm_sm_lm(-x, -y, phi) {
        best.offer(5, &[-t, h, -u, -v]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(x, y, phi) {
        best.offer(8, &[t, -h, u, v]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(-x, y, -phi) {
        best.offer(8, &[-t, h, -u, -v]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(x, -y, -phi) {
        best.offer(9, &[t, -h, u, v]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(-x, -y, phi) {
        best.offer(9, &[-t, h, -u, -v]);
    }
    // reversed traversal
    let xb = x * phi.cos() + y * phi.sin();
    let yb = x * phi.sin() - y * phi.cos();
    if let Some((t, u, v)) = lp_rm_sm_lm(xb, yb, phi) {
        best.offer(6, &[v, u, -h, t]);
    }
    if let Some((t, u, v)) = lp_rm_sm_lm(-xb, yb, -phi) {
        best.offer(6, &[-v, -u, h, -t]);
    }
    if let Some((t, u, v)) = lp_rm_sm_lm(xb, -yb, -phi) {
        best.offer(7, &[v, u, -h, t]);
    }
    if let Some((t, u, v)) = lp_rm_sm_lm(-xb, -yb, phi) {
        best.offer(7, &[-v, -u, h, -t]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(xb, yb, phi) {
        best.offer(10, &[v, u, -h, t]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(-xb, yb, -phi) {
        best.offer(10, &[-v, -u, h, -t]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(xb, -yb, -phi) {
        best.offer(11, &[v, u, -h, t]);
    }
    if let Some((t, u, v)) = lp_rm_sm_rm(-xb, -yb, phi) {
        best.offer(11, &[-v, -u, h, -t]);
    }
}

fn lp_rm_s_lm_rp<T: Scalar>(x: T, y: T, phi: T) -> Option<(T, T, T)> {
    let xi = x + phi.sin();
    let eta = y - T::one() - phi.cos();
    let (rho, _) = polar(xi, eta);
    let two = T::of(2.0);
    let four = T::of(4.0);
    if rho >= two {
        let u = four - (rho * rho - four).sqrt();
        if u <= zero_tol::<T>() {
            let t = mod2pi(((four - u) * xi - two * eta).atan2(-two * xi + (u - four) * eta));
            let v = mod2pi(t - phi);
            if t >= -zero_tol::<T>() && v >= -zero_tol::<T>() {
                return Some((t, u, v));
            }
        }
    }
    None
}

fn ccscc<T: Scalar>(x: T, y: T, phi: T, best: &mut Word<T>) {
    let h = T::of(0.5) * T::PI();
    if let Some((t, u, v)) = lp_rm_s_lm_rp(x, y, phi) {
        best.offer(16, &[t, -h, u, -h, v]);
    }
    if let Some((t, u, v)) = lp_rm_s_lm_rp(-x, y, -phi) {
        best.offer(16, &[-t, h, -u, h, -v]);
    }
    if let Some((t, u, v)) = lp_rm_s_lm_rp(x, -y, -phi) {
        best.offer(17, &[t, -h, u, -h, v]);
    }
    if let Some((t, u, v)) = lp_rm_s_lm_rp(-x, -y, phi) {
        best.offer(17, &[-t, h, -u, h, -v]);
    }
}

fn solve_unit<T: Scalar>(x: T, y: T, phi: T) -> Word<T> {
    let mut best = Word::none();
    csc(x, y, phi, &mut best);
    ccc(x, y, phi, &mut best);
    cccc(x, y, phi, &mut best);
    ccsc(x, y, phi, &mut best);
    ccscc(x, y, phi, &mut best);
    best
}

/// Goal expressed in the start frame, scaled to unit turning radius.
#[inline]
fn canonical<T: Scalar>(s: &Configuration<T>, t: &Configuration<T>, rho: T) -> (T, T, T) {
    let dx = t.x - s.x;
    let dy = t.y - s.y;
    let (sn, c) = s.theta.sin_cos();
    ((c * dx + sn * dy) / rho, (-sn * dx + c * dy) / rho, t.theta - s.theta)
}

/// Shortest Reeds-Shepp curve from `s` to `t` with turning radius `rho`.
pub fn rs_shortest<T: Scalar>(s: &Configuration<T>, t: &Configuration<T>, rho: T) -> RsPath<T> {
    let (x, y, phi) = canonical(s, t, rho);
    let word = solve_unit(x, y, phi);
    let tiny = T::epsilon() * T::of(4.0);
    let segments: Vec<RsSegment<T>> = WORDS[word.kind]
        .iter()
        .zip(word.params.iter())
        .filter(|(_, p)| p.abs() > tiny)
        .map(|(&steer, &p)| RsSegment {
            steer,
            gear: if p >= T::zero() {
                Gear::Forward
            } else {
                Gear::Backward
            },
            param: p.abs(),
        })
        .collect();
    RsPath::from_segments(segments, rho)
}

/// Length of the shortest Reeds-Shepp curve; allocation free.
#[inline]
pub fn rs_length<T: Scalar>(s: &Configuration<T>, t: &Configuration<T>, rho: T) -> T {
    let (x, y, phi) = canonical(s, t, rho);
    solve_unit(x, y, phi).len * rho
}

impl<T: Scalar> RsPath<T> {
    pub fn from_segments(segments: Vec<RsSegment<T>>, rho: T) -> Self {
        let total_length = segments.iter().fold(T::zero(), |acc, s| acc + s.param) * rho;
        Self {
            segments,
            rho,
            total_length,
        }
    }

    pub fn empty(rho: T) -> Self {
        Self::from_segments(Vec::new(), rho)
    }

    /// Signed curvature and world-unit length of each segment.
    pub fn pieces(&self) -> impl Iterator<Item = (Gear, T, T)> + '_ {
        self.segments.iter().map(move |s| {
            (
                s.gear,
                s.steer.unit_curvature::<T>() / self.rho,
                s.param * self.rho,
            )
        })
    }

    /// Pose reached from `start` after the whole curve.
    pub fn end(&self, start: &Configuration<T>) -> Configuration<T> {
        self.pieces().fold(*start, |q, (gear, k, len)| {
            advance(&q, k, gear.sign::<T>() * len)
        })
    }

    /// Debug dump: JSON list of `{steer, gear, param}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&self.segments)?)
    }
}

/// Exact pose at arc length `s_arc` along `path` started at `start`.
pub fn rs_interpolate<T: Scalar>(
    path: &RsPath<T>,
    s_arc: T,
    start: &Configuration<T>,
) -> Result<Configuration<T>> {
    let slack = T::of(1e-9) * (T::one() + path.total_length);
    if !s_arc.is_finite() || s_arc < -slack || s_arc > path.total_length + slack {
        return Err(Error::InvalidArgument(format!(
            "arc length {s_arc} outside [0, {}]",
            path.total_length
        )));
    }
    let mut remaining = s_arc.max(T::zero());
    let mut q = *start;
    for (gear, k, len) in path.pieces() {
        if remaining <= T::zero() {
            break;
        }
        let d = remaining.min(len);
        q = advance(&q, k, gear.sign::<T>() * d);
        remaining = remaining - d;
    }
    Ok(q)
}

/// Prefix of `path` of length `min(total_length, max_len)`.
pub fn rs_truncate<T: Scalar>(path: &RsPath<T>, max_len: T) -> RsPath<T> {
    if max_len >= path.total_length {
        return path.clone();
    }
    let mut remaining = max_len.max(T::zero()) / path.rho;
    let mut segments = Vec::with_capacity(path.segments.len());
    for seg in &path.segments {
        if remaining <= T::zero() {
            break;
        }
        let p = seg.param.min(remaining);
        segments.push(RsSegment { param: p, ..*seg });
        remaining = remaining - p;
    }
    let mut out = RsPath::from_segments(segments, path.rho);
    out.total_length = max_len.max(T::zero());
    out
}

/// Poses along the curve at spacing at most `spacing`, including both endpoints.
pub fn rs_sample<T: Scalar>(
    path: &RsPath<T>,
    start: &Configuration<T>,
    spacing: T,
) -> Vec<Configuration<T>> {
    let mut out = vec![*start];
    let mut q = *start;
    for (gear, k, len) in path.pieces() {
        let n = (len / spacing).ceil().to_usize().unwrap_or(1).max(1);
        let sign = gear.sign::<T>();
        for i in 1..=n {
            let d = len * T::of(i as f64) / T::of(n as f64);
            out.push(advance(&q, k, sign * d));
        }
        q = advance(&q, k, sign * len);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn identical_endpoints_give_empty_path() {
        let a = Configuration::<f64>::new(3.0, -1.0, 0.4);
        let p = rs_shortest(&a, &a, 1.0);
        assert_eq!(p.total_length, 0.0);
        assert!(p.segments.is_empty());
        assert_eq!(rs_length(&a, &a, 2.0), 0.0);
    }

    #[test]
    fn straight_ahead_is_one_segment() {
        let p = rs_shortest(
            &Configuration::<f64>::new(0.0, 0.0, 0.0),
            &Configuration::<f64>::new(5.0, 0.0, 0.0),
            1.0,
        );
        assert_eq!(p.segments.len(), 1);
        assert_eq!(p.segments[0].steer, Steer::Straight);
        assert_eq!(p.segments[0].gear, Gear::Forward);
        assert!((p.total_length - 5.0).abs() < 1e-12);
        let l = rs_length(
            &Configuration::<f64>::new(0.0, 0.0, 0.0),
            &Configuration::<f64>::new(10.0, 0.0, 0.0),
            1.0,
        );
        assert!((l - 10.0).abs() < 1e-12);
    }

    #[test]
    fn straight_back_uses_reverse_gear() {
        let p = rs_shortest(
            &Configuration::<f64>::new(0.0, 0.0, 0.0),
            &Configuration::<f64>::new(-4.0, 0.0, 0.0),
            1.0,
        );
        assert_eq!(p.segments.len(), 1);
        assert_eq!(p.segments[0].gear, Gear::Backward);
        assert!((p.total_length - 4.0).abs() < 1e-12);
    }

    #[test]
    fn interpolation_and_truncation() {
        let s = Configuration::<f64>::new(1.0, 2.0, 0.3);
        let t = Configuration::<f64>::new(-3.0, 4.0, -2.0);
        let p = rs_shortest(&s, &t, 1.5);
        let e = rs_interpolate(&p, p.total_length, &s).unwrap();
        assert!(e.position_distance(&t) < 1e-9 && e.heading_distance(&t) < 1e-9);
        assert_eq!(rs_interpolate(&p, 0.0, &s).unwrap(), s);
        assert!(rs_interpolate(&p, p.total_length + 1.0, &s).is_err());
        assert!(rs_interpolate(&p, -1.0, &s).is_err());

        let same = rs_truncate(&p, p.total_length + 3.0);
        assert_eq!(same, p);
        let half = rs_truncate(&p, 0.5 * p.total_length);
        assert!((half.total_length - 0.5 * p.total_length).abs() < 1e-12);
        let a = half.end(&s);
        let b = rs_interpolate(&p, 0.5 * p.total_length, &s).unwrap();
        assert!(a.position_distance(&b) < 1e-9 && a.heading_distance(&b) < 1e-9);
        for (x, y) in half.segments.iter().zip(&p.segments) {
            assert_eq!((x.steer, x.gear), (y.steer, y.gear));
        }

        let line = rs_shortest(
            &Configuration::<f64>::new(0.0, 0.0, 0.0),
            &Configuration::<f64>::new(8.0, 0.0, 0.0),
            1.0,
        );
        let mid = rs_interpolate(&line, 4.0, &Configuration::<f64>::new(0.0, 0.0, 0.0)).unwrap();
        assert!((mid.x - 4.0).abs() < 1e-12 && mid.y.abs() < 1e-12);
    }

    #[test]
    fn samples_cover_path() {
        let s = Configuration::<f64>::new(0.0, 0.0, 0.0);
        let t = Configuration::<f64>::new(0.0, 0.0, PI);
        let p = rs_shortest(&s, &t, 1.0);
        let pts = rs_sample(&p, &s, 0.05);
        assert_eq!(pts[0], s);
        let last = pts.last().unwrap();
        assert!(last.position_distance(&t) < 1e-9);
        for w in pts.windows(2) {
            assert!(w[0].position_distance(&w[1]) <= 0.05 + 1e-12);
        }
    }

    #[test]
    fn f32_agrees_with_f64() {
        let s = Configuration::<f64>::new(0.0f64, 0.0, 0.0);
        let t = Configuration::<f64>::new(2.0, 1.0, 2.5);
        let a = rs_length(&s, &t, 1.0);
        let b = rs_length(&s.cast::<f32>(), &t.cast::<f32>(), 1.0f32);
        assert!((a - b as f64).abs() < 1e-4);
    }

    #[test]
    fn json_dump_lists_segments() {
        let p = rs_shortest(
            &Configuration::<f64>::new(0.0, 0.0, 0.0),
            &Configuration::<f64>::new(5.0, 0.0, 0.0),
            1.0,
        );
        assert_eq!(
            p.to_json().unwrap(),
            r#"[{"steer":"straight","gear":"forward","param":5.0}]"#
        );
    }
}
