//! Minimal SVG rendering of a workspace and a trajectory. Start is blue, goal red.

use std::fmt::Write;

use crate::geometry::{Configuration, Footprint, Obstacle, Workspace};
use crate::scalar::Scalar;
use crate::trajectory::Trajectory;

fn car<T: Scalar>(out: &mut String, c: &Configuration<T>, fp: &Footprint<T>, style: &str) {
    let pts: Vec<String> = fp
        .corners(c)
        .iter()
        .map(|(x, y)| format!("{:.2},{:.2}", x.as_f64(), y.as_f64()))
        .collect();
    let _ = writeln!(out, r#"<polygon points="{}" {style}/>"#, pts.join(" "));
}

fn heading_tick<T: Scalar>(out: &mut String, c: &Configuration<T>, fp: &Footprint<T>, colour: &str) {
    let (x, y, th) = (c.x.as_f64(), c.y.as_f64(), c.theta.as_f64());
    let l = fp.length.as_f64().max(1.0);
    let _ = writeln!(
        out,
        r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{:.2}" stroke="{colour}" stroke-width="1.5"/>"#,
        x + l * th.cos(),
        y + l * th.sin()
    );
}

/// World coordinates with y pointing up. Footprints are drawn at the endpoints and every
/// `footprint_every` waypoints (0 disables the intermediate ones).
pub fn render<T: Scalar>(
    w: &Workspace<T>,
    start: &Configuration<T>,
    goal: &Configuration<T>,
    traj: Option<&Trajectory<T>>,
    fp: &Footprint<T>,
    footprint_every: usize,
) -> String {
    let l = w.extent.as_f64();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="600" height="600" viewBox="0 0 {l} {l}">"#
    );
    let _ = writeln!(s, r#"<g transform="translate(0,{l}) scale(1,-1)">"#);
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{l}" height="{l}" fill="white" stroke="black"/>"#);
    for o in &w.obstacles {
        match *o {
            Obstacle::Disc { cx, cy, r } => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="{:.2}" fill="gray"/>"#,
                    cx.as_f64(),
                    cy.as_f64(),
                    r.as_f64()
                );
            }
            Obstacle::AxisAlignedBox { xmin, ymin, xmax, ymax } => {
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="gray"/>"#,
                    xmin.as_f64(),
                    ymin.as_f64(),
                    (xmax - xmin).as_f64(),
                    (ymax - ymin).as_f64()
                );
            }
        }
    }
    if let Some(t) = traj {
        let pts: Vec<String> = t
            .waypoints
            .iter()
            .map(|p| format!("{:.2},{:.2}", p.x.as_f64(), p.y.as_f64()))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1"/>"#,
            pts.join(" ")
        );
        if footprint_every > 0 {
            for p in t.waypoints.iter().step_by(footprint_every) {
                car(&mut s, p, fp, r#"fill="none" stroke="lightsteelblue" stroke-width="0.5""#);
            }
        }
    }
    car(&mut s, start, fp, r#"fill="royalblue" fill-opacity="0.6""#);
    heading_tick(&mut s, start, fp, "navy");
    car(&mut s, goal, fp, r#"fill="firebrick" fill-opacity="0.6""#);
    heading_tick(&mut s, goal, fp, "darkred");
    s.push_str("</g>\n</svg>\n");
    s
}
