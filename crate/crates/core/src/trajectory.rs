//! Planned motion as a sequence of constant-curvature controls.

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::geometry::Configuration;
use crate::kinematics::{step, ControlInput};
use crate::reeds_shepp::RsPath;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    /// `waypoints[k + 1] = step(waypoints[k], controls[k])`; starts at the start pose.
    pub waypoints: Vec<Configuration<T>>,
    pub controls: Vec<ControlInput<T>>,
    /// Sum of control step lengths, docking included.
    pub length: T,
    /// Part of `length` spent on a terminal Reeds-Shepp docking curve.
    pub docking_length: T,
    pub success: bool,
    /// Goal reached by the stopping rule without docking.
    pub reached: bool,
    /// Every successor was infeasible at some step.
    pub stalled: bool,
    /// Greedy steps taken (zero for tree planners).
    pub steps: usize,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySummary {
    pub success: bool,
    pub reached: bool,
    pub stalled: bool,
    pub length: f64,
    pub docking_length: f64,
    pub wall_time: f64,
    pub steps: usize,
    pub waypoints: usize,
}

impl<T: Scalar> Trajectory<T> {
    pub fn at(start: Configuration<T>) -> Self {
        Self {
            waypoints: vec![start],
            controls: Vec::new(),
            length: T::zero(),
            docking_length: T::zero(),
            success: false,
            reached: false,
            stalled: false,
            steps: 0,
            wall_time: 0.0,
        }
    }

    pub fn start(&self) -> Configuration<T> {
        self.waypoints[0]
    }

    pub fn end(&self) -> Configuration<T> {
        *self.waypoints.last().expect("trajectory always holds its start")
    }

    pub fn push(&mut self, u: ControlInput<T>) {
        let next = step(&self.end(), &u);
        self.waypoints.push(next);
        self.controls.push(u);
        self.length = self.length + u.step_len;
    }

    /// Appends `path` from the current end, split into controls no longer than `spacing`.
    pub fn push_rs(&mut self, path: &RsPath<T>, spacing: T) {
        for (gear, k, len) in path.pieces() {
            let n = (len / spacing).ceil().to_usize().unwrap_or(1).max(1);
            let piece = len / T::of(n as f64);
            for _ in 0..n {
                self.push(ControlInput {
                    gear,
                    curvature: k,
                    step_len: piece,
                });
            }
        }
    }

    /// Arc length of the waypoint polyline.
    pub fn polyline_length(&self) -> T {
        self.waypoints
            .windows(2)
            .fold(T::zero(), |acc, w| acc + w[0].position_distance(&w[1]))
    }

    pub fn summary(&self) -> TrajectorySummary {
        TrajectorySummary {
            success: self.success,
            reached: self.reached,
            stalled: self.stalled,
            length: self.length.as_f64(),
            docking_length: self.docking_length.as_f64(),
            wall_time: self.wall_time,
            steps: self.steps,
            waypoints: self.waypoints.len(),
        }
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["x", "y", "theta"])?;
        for q in &self.waypoints {
            w.write_record([q.x.to_string(), q.y.to_string(), q.theta.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Sum of control step lengths.
pub fn trajectory_length<T: Scalar>(t: &Trajectory<T>) -> T {
    t.controls.iter().fold(T::zero(), |acc, u| acc + u.step_len)
}
