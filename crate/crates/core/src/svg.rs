//! SVG 1.1 rendering of scenes, decompositions, visibility polygons and
//! visibility graphs. Output depends only on the inputs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::decomposition::{CorridorComplex, RegionKind};
use crate::domain::Scene;
use crate::geom::Point;
use crate::oracle::{PointKind, VgEdge, VisibilityPolygon};

const CANVAS: f64 = 800.0;
const PALETTE: [&str; 8] = ["#8dd3c7", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5", "#bc80bd"];

#[derive(Clone, Copy, Default)]
pub struct Layers<'a> {
    pub complex: Option<&'a CorridorComplex>,
    pub vp: Option<(&'a Point, &'a VisibilityPolygon)>,
    pub vg: Option<&'a BTreeSet<VgEdge>>,
}

struct Frame {
    x0: f64,
    y1: f64,
    k: f64,
}

impl Frame {
    fn new(s: &Scene) -> Self {
        let (x0, y0) = s.min.to_f64();
        let (x1, y1) = s.max.to_f64();
        let k = CANVAS / (x1 - x0).max(y1 - y0);
        Frame { x0, y1, k }
    }

    fn xy(&self, p: &Point) -> (f64, f64) {
        let (x, y) = p.to_f64();
        ((x - self.x0) * self.k, (self.y1 - y) * self.k)
    }

    fn points(&self, ring: &[Point]) -> String {
        ring.iter()
            .map(|p| {
                let (x, y) = self.xy(p);
                format!("{x:.3},{y:.3}")
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

pub fn render(s: &Scene, layers: Layers) -> String {
    let f = Frame::new(s);
    let (w, h) = f.xy(&Point::new(s.max.x.clone(), s.min.y.clone()));
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="#ffffff" stroke="#000000"/>"##);
    if let Some(cc) = layers.complex {
        for r in &cc.regions {
            match r.kind {
                RegionKind::Corridor => {
                    let color = PALETTE[r.ordinal % PALETTE.len()];
                    let _ = writeln!(
                        out,
                        r##"<polygon points="{}" fill="{color}" fill-opacity="0.5" stroke="#555555" stroke-width="0.5"/>"##,
                        f.points(&r.ring)
                    );
                }
                RegionKind::Junction => {
                    let _ = writeln!(
                        out,
                        r##"<polygon points="{}" fill="none" stroke="#000000" stroke-dasharray="3,3"/>"##,
                        f.points(&r.ring)
                    );
                    let n = r.ring.len() as f64;
                    let (cx, cy) =
                        r.ring.iter().map(|p| f.xy(p)).fold((0.0, 0.0), |a, b| (a.0 + b.0 / n, a.1 + b.1 / n));
                    let _ = writeln!(out, r##"<circle cx="{cx:.3}" cy="{cy:.3}" r="5" fill="#000000"/>"##);
                }
            }
        }
    }
    if let Some((q, vp)) = layers.vp {
        let ring: Vec<Point> = vp.points();
        let _ = writeln!(
            out,
            r##"<polygon points="{}" fill="#ffe066" fill-opacity="0.6" stroke="#c99700"/>"##,
            f.points(&ring)
        );
        for e in &vp.entries {
            if e.kind == PointKind::ConstructedVertex {
                let (x, y) = f.xy(&e.point);
                let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="#c99700"/>"##);
            }
        }
        let (x, y) = f.xy(q);
        let _ = writeln!(out, r##"<circle cx="{x:.3}" cy="{y:.3}" r="4" fill="#d62728"/>"##);
    }
    for o in &s.obstacles {
        let _ = writeln!(out, r##"<polygon points="{}" fill="#7f7f7f" stroke="#333333"/>"##, f.points(&o.ring));
    }
    if let Some(edges) = layers.vg {
        for (a, b) in edges {
            let ((x1, y1), (x2, y2)) = (f.xy(a), f.xy(b));
            let _ = writeln!(
                out,
                r##"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="#1f77b4" stroke-width="0.6"/>"##
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::decompose;
    use crate::oracle::{oracle_vg, oracle_vp};

    #[test]
    fn renders_every_layer_deterministically() {
        let s = Scene::empty(0, 0, 10, 10).with_obstacle(0, &[(4, 4), (6, 4), (6, 6), (4, 6)]);
        let cc = decompose(&s).unwrap();
        let q = Point::int(2, 5);
        let vp = oracle_vp(&s, &q).unwrap();
        let vg = oracle_vg(&s);
        let layers = Layers { complex: Some(&cc), vp: Some((&q, &vp)), vg: Some(&vg) };
        let a = render(&s, layers);
        assert_eq!(a, render(&s, layers));
        assert!(a.starts_with("<?xml"));
        assert_eq!(a.matches("<line").count(), 4);
        assert_eq!(a.matches(r##"r="3""##).count(), 2);
        assert!(a.trim_end().ends_with("</svg>"));
    }
}
