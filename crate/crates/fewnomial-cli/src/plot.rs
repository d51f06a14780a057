//! SVG rendering of traced components in log coordinates.

use std::fmt::Write;

use fewnomial::curves::ComponentReport;

const SIZE: f64 = 640.0;
const MARGIN: f64 = 40.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub fn render_svg(r: &ComponentReport) -> String {
    let w = r.window;
    let scale = (SIZE - 2.0 * MARGIN) / (2.0 * w);
    let px = |z: [f64; 2]| {
        (
            MARGIN + (z[0] + w) * scale,
            SIZE - MARGIN - (z[1] + w) * scale,
        )
    };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#
    );
    let (x0, y0) = px([-w, w]);
    let side = 2.0 * w * scale;
    let _ = writeln!(
        s,
        r##"<rect x="{x0:.1}" y="{y0:.1}" width="{side:.1}" height="{side:.1}" fill="none" stroke="#999"/>"##
    );
    let (ox, oy) = px([0.0, 0.0]);
    let _ = writeln!(
        s,
        r##"<line x1="{x0:.1}" y1="{oy:.1}" x2="{:.1}" y2="{oy:.1}" stroke="#ddd"/>"##,
        x0 + side
    );
    let _ = writeln!(
        s,
        r##"<line x1="{ox:.1}" y1="{y0:.1}" x2="{ox:.1}" y2="{:.1}" stroke="#ddd"/>"##,
        y0 + side
    );
    for (k, c) in r.components.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut pts = String::new();
        for z in &c.points {
            let (x, y) = px(*z);
            let _ = write!(pts, "{x:.2},{y:.2} ");
        }
        let tag = if c.closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            r#"<{tag} points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#,
            pts.trim_end()
        );
        for e in &c.escapes {
            let (x, y) = px(e.point);
            let _ = writeln!(
                s,
                r#"<circle cx="{x:.1}" cy="{y:.1}" r="3" fill="{color}"/>"#
            );
            if let Some(f) = e.facet {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.1}" y="{:.1}" font-size="11" fill="{color}">facet {f}</text>"#,
                    x + 5.0,
                    y - 5.0
                );
            }
        }
    }
    let _ = writeln!(
        s,
        r#"<text x="{MARGIN}" y="24" font-size="14" font-family="sans-serif">{} compact, {} non-compact, window {w}</text>"#,
        r.compact, r.non_compact
    );
    s.push_str("</svg>\n");
    s
}
