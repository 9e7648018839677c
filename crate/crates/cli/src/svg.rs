//! SVG 1.1 drawings of triangulations.

use std::fmt::Write as _;

use gridtri_core::geometry::LatticePoint;
use gridtri_core::regularity::Configuration;
use gridtri_core::Triangulation;

const UNIT: i32 = 40;
const MARGIN: i32 = 20;

/// Grid points, every edge of `t`, and the triangles of `highlight` shaded.
/// Output depends only on the inputs.
pub fn render_svg(t: &Triangulation, highlight: Option<&Configuration>) -> String {
    let (m, n) = (t.grid().m() as i32, t.grid().n() as i32);
    let (w, h) = (m * UNIT + 2 * MARGIN, n * UNIT + 2 * MARGIN);
    let px = |p: LatticePoint| (MARGIN + p.x * UNIT, MARGIN + (n - p.y) * UNIT);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    if let Some(config) = highlight {
        let _ = writeln!(s, r##"<g fill="#f4a261" stroke="none">"##);
        for tri in config.triangles() {
            let pts: Vec<String> = tri
                .vertices()
                .iter()
                .map(|&v| {
                    let (x, y) = px(v);
                    format!("{x},{y}")
                })
                .collect();
            let _ = writeln!(s, r#"<polygon points="{}"/>"#, pts.join(" "));
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, r#"<g stroke="black" stroke-width="1.5" stroke-linecap="round">"#);
    for e in t.edges() {
        let ((x1, y1), (x2, y2)) = (px(e.a()), px(e.b()));
        let _ = writeln!(s, r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g fill="black">"#);
    for p in t.grid().points() {
        let (x, y) = px(p);
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3"/>"#);
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}
