//! Minimal SVG plots: plan view, elevation and convergence curve.

use std::fmt::Write;

use ipp_core::viewpoints::ViewpointSet;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 600.0;
const MARGIN: f64 = 40.0;

/// Maps data coordinates into the drawing area, y pointing up, equal scale
/// on both axes unless `stretch` is set.
struct Frame {
    min: (f64, f64),
    scale: (f64, f64),
    offset: (f64, f64),
}

impl Frame {
    fn new(points: impl Iterator<Item = (f64, f64)>, stretch: bool) -> Self {
        let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
        for (x, y) in points {
            lo = (lo.0.min(x), lo.1.min(y));
            hi = (hi.0.max(x), hi.1.max(y));
        }
        if !lo.0.is_finite() {
            lo = (0.0, 0.0);
            hi = (1.0, 1.0);
        }
        let span = ((hi.0 - lo.0).max(1e-9), (hi.1 - lo.1).max(1e-9));
        let avail = (WIDTH - 2.0 * MARGIN, HEIGHT - 2.0 * MARGIN);
        let mut scale = (avail.0 / span.0, avail.1 / span.1);
        if !stretch {
            let s = scale.0.min(scale.1);
            scale = (s, s);
        }
        let offset = (
            MARGIN + (avail.0 - span.0 * scale.0) / 2.0,
            MARGIN + (avail.1 - span.1 * scale.1) / 2.0,
        );
        Self { min: lo, scale, offset }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (
            self.offset.0 + (x - self.min.0) * self.scale.0,
            HEIGHT - self.offset.1 - (y - self.min.1) * self.scale.1,
        )
    }
}

fn header(title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{MARGIN}" y="24" font-family="sans-serif" font-size="16">{title}</text>"#);
    s
}

fn polyline(s: &mut String, pts: &[(f64, f64)], stroke: &str, width: f64, closed: bool) {
    let tag = if closed { "polygon" } else { "polyline" };
    let _ = write!(s, r#"<{tag} fill="none" stroke="{stroke}" stroke-width="{width}" points=""#);
    for (i, (x, y)) in pts.iter().enumerate() {
        let sep = if i == 0 { "" } else { " " };
        let _ = write!(s, "{sep}{x:.2},{y:.2}");
    }
    let _ = writeln!(s, r#""/>"#);
}

fn path_svg(vps: &ViewpointSet<f64>, order: &[usize], title: &str, project: impl Fn(f64, f64, f64) -> (f64, f64)) -> String {
    let outline_pts = vps.contours.iter().flat_map(|c| c.outline.iter().map(|p| project(p.x, p.y, p.z)));
    let vp_pts = vps.viewpoints.iter().map(|v| project(v.position.x, v.position.y, v.position.z));
    let frame = Frame::new(outline_pts.chain(vp_pts), false);
    let mut s = header(title);
    for c in &vps.contours {
        let pts: Vec<_> = c
            .outline
            .iter()
            .map(|p| {
                let (u, v) = project(p.x, p.y, p.z);
                frame.map(u, v)
            })
            .collect();
        polyline(&mut s, &pts, "#999999", 1.0, c.closed);
    }
    let path: Vec<_> = order
        .iter()
        .map(|&i| {
            let p = vps.viewpoints[i].position;
            let (u, v) = project(p.x, p.y, p.z);
            frame.map(u, v)
        })
        .collect();
    polyline(&mut s, &path, "#1f77b4", 1.5, false);
    for (x, y) in &path {
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="2" fill="#1f77b4"/>"##);
    }
    if let Some((x, y)) = path.first() {
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#2ca02c"/>"##);
    }
    if let Some((x, y)) = path.last() {
        let _ = writeln!(s, r##"<circle cx="{x:.2}" cy="{y:.2}" r="5" fill="#d62728"/>"##);
    }
    s.push_str("</svg>\n");
    s
}

/// Top-down view of the slice outlines and the path.
pub fn plan_view(vps: &ViewpointSet<f64>, order: &[usize]) -> String {
    path_svg(vps, order, "Plan view (x, y)", |x, y, _| (x, y))
}

/// Side view onto the x–z plane.
pub fn elevation_view(vps: &ViewpointSet<f64>, order: &[usize]) -> String {
    path_svg(vps, order, "Elevation (x, z)", |x, _, z| (x, z))
}

/// Best-so-far fitness per iteration.
pub fn convergence(history: &[f64]) -> String {
    let pts: Vec<(f64, f64)> = history.iter().enumerate().map(|(i, &f)| ((i + 1) as f64, f)).collect();
    let frame = Frame::new(pts.iter().copied().chain([(1.0, 0.0)]), true);
    let mut s = header("Best fitness per iteration");
    let (x0, y0) = frame.map(frame.min.0, frame.min.1);
    let _ = writeln!(
        s,
        r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{:.2}" y2="{y0:.2}" stroke="black"/>"#,
        WIDTH - MARGIN
    );
    let _ = writeln!(s, r#"<line x1="{x0:.2}" y1="{y0:.2}" x2="{x0:.2}" y2="{MARGIN:.2}" stroke="black"/>"#);
    if let (Some(first), Some(last)) = (history.first(), history.last()) {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12">{first:.1}</text>"#,
            x0 + 4.0,
            frame.map(1.0, *first).1 - 4.0
        );
        let (xl, yl) = frame.map(history.len() as f64, *last);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{last:.1}</text>"#,
            xl,
            yl - 6.0
        );
    }
    let mapped: Vec<_> = pts.iter().map(|&(x, y)| frame.map(x, y)).collect();
    polyline(&mut s, &mapped, "#1f77b4", 1.5, false);
    s.push_str("</svg>\n");
    s
}
