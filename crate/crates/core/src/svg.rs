//! SVG pictures in the Poincaré disk.

use std::fmt::Write as _;

use crate::delaunay::Triangulation;
use crate::kernel::{geodesic_arc, Cx, GeodesicArc};
use crate::surface::{Domain, SurfacePoint};
use crate::Result;

const SCALE: f64 = 400.0;

/// Accumulates drawing elements; `finish` wraps them in a document.
pub struct Svg {
    body: String,
}

fn xy(z: &Cx<f64>) -> (f64, f64) {
    (z.re * SCALE, -z.im * SCALE)
}

impl Default for Svg {
    fn default() -> Self {
        Self::new()
    }
}

impl Svg {
    pub fn new() -> Svg {
        let mut body = String::new();
        let _ = writeln!(
            body,
            r#"<circle cx="0" cy="0" r="{SCALE}" fill="none" stroke="black" stroke-width="1"/>"#
        );
        Svg { body }
    }

    fn arc_path(p: &Cx<f64>, q: &Cx<f64>) -> Option<String> {
        let (px, py) = xy(p);
        let (qx, qy) = xy(q);
        match geodesic_arc(p, q).ok()? {
            GeodesicArc::Segment { .. } => Some(format!("M {px:.4} {py:.4} L {qx:.4} {qy:.4}")),
            GeodesicArc::Arc { center, radius, .. } => {
                let a = p.clone() - center.clone();
                let b = q.clone() - center;
                let sweep = if a.cross(&b) > 0.0 { 0 } else { 1 };
                let r = radius * SCALE;
                Some(format!("M {px:.4} {py:.4} A {r:.4} {r:.4} 0 0 {sweep} {qx:.4} {qy:.4}"))
            }
        }
    }

    pub fn geodesic(&mut self, p: &Cx<f64>, q: &Cx<f64>, stroke: &str, width: f64) {
        if let Some(d) = Self::arc_path(p, q) {
            let _ = writeln!(
                self.body,
                r#"<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{width}"/>"#
            );
        }
    }

    pub fn point(&mut self, z: &Cx<f64>, fill: &str, r: f64) {
        let (x, y) = xy(z);
        let _ = writeln!(self.body, r#"<circle cx="{x:.4}" cy="{y:.4}" r="{r}" fill="{fill}"/>"#);
    }

    /// The fundamental polygon, one path per side.
    pub fn domain(&mut self, dom: &Domain) {
        let n = dom.vertices.len();
        for k in 0..n {
            self.geodesic(&dom.vertices[k], &dom.vertices[(k + 1) % n], "steelblue", 1.5);
        }
    }

    /// The images of the polygon under every neighbor translation.
    pub fn neighbor_regions(&mut self, dom: &Domain) {
        let n = dom.vertices.len();
        for e in dom.group.neighbors().skip(1) {
            let m = dom.group.m64(e);
            for k in 0..n {
                let (p, q) = (m.apply(&dom.vertices[k]), m.apply(&dom.vertices[(k + 1) % n]));
                self.geodesic(&p, &q, "lightgray", 0.5);
            }
        }
    }

    pub fn points(&mut self, pts: &[SurfacePoint], fill: &str) {
        for p in pts {
            self.point(&p.approx(), fill, 3.0);
        }
    }

    pub fn systolic_segments(&mut self, dom: &Domain) {
        for (p, q) in dom.systolic_segments() {
            self.geodesic(&p, &q, "crimson", 2.0);
        }
    }

    /// Canonical representatives of every face, and the vertices.
    pub fn triangulation(&mut self, tri: &Triangulation) {
        for f in tri.face_ids() {
            let c = tri.face_corners(f);
            for i in 0..3 {
                self.geodesic(&c[i], &c[(i + 1) % 3], "dimgray", 0.6);
            }
        }
        for v in tri.vertex_ids() {
            let fill = if tri.vertex(v).dummy { "orange" } else { "black" };
            self.point(&tri.vertex_position(v), fill, 2.0);
        }
    }

    pub fn finish(self) -> String {
        let s = SCALE * 1.05;
        let w = 2.0 * s;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.1} {:.1} {w:.1} {w:.1}\" width=\"800\" height=\"800\">\n{}</svg>\n",
            -s, -s, self.body
        )
    }

    pub fn write(self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.finish())?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn domain_has_one_path_per_side() {
        let mut s = Svg::new();
        s.domain(&Domain::get(2));
        let doc = s.finish();
        assert_eq!(doc.matches("<path").count(), 8);
        assert_eq!(doc.matches("<circle").count(), 1);
    }
}
