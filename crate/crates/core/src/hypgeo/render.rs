//! SVG pictures of the upper half-plane. Output depends only on the scene,
//! so identical scenes give identical bytes.

use std::fmt::Write;

use super::Geodesic;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 30.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Clone, Debug, PartialEq)]
pub enum SceneItem {
    /// Endpoints in float approximation, `None` for `∞`; `oriented` puts
    /// the arrow head at the second endpoint.
    Geodesic {
        ends: [Option<f64>; 2],
        oriented: bool,
        label: String,
    },
    Point {
        x: f64,
        y: f64,
        label: String,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scene {
    pub title: Option<String>,
    pub items: Vec<SceneItem>,
}

impl Scene {
    pub fn new() -> Scene {
        Scene::default()
    }

    pub fn with_title(mut self, title: &str) -> Scene {
        self.title = Some(title.to_string());
        self
    }

    pub fn geodesic(mut self, g: &Geodesic, label: &str) -> Scene {
        let ends = [g.ends()[0].approx_f64(), g.ends()[1].approx_f64()];
        self.items.push(SceneItem::Geodesic {
            ends,
            oriented: g.is_oriented(),
            label: label.to_string(),
        });
        self
    }

    pub fn point(mut self, x: f64, y: f64, label: &str) -> Scene {
        self.items.push(SceneItem::Point {
            x,
            y,
            label: label.to_string(),
        });
        self
    }

    pub fn to_svg(&self) -> String {
        render_scene(self)
    }
}

/// Horizontal window covering every finite coordinate with some slack.
fn window(scene: &Scene) -> (f64, f64) {
    let mut xs: Vec<f64> = Vec::new();
    for item in &scene.items {
        match item {
            SceneItem::Geodesic { ends, .. } => xs.extend(ends.iter().flatten().copied()),
            SceneItem::Point { x, .. } => xs.push(*x),
        }
    }
    xs.retain(|x| x.is_finite());
    if xs.is_empty() {
        return (-1.0, 1.0);
    }
    let lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let pad = ((hi - lo) * 0.15).max(0.5);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_scene(scene: &Scene) -> String {
    let (lo, hi) = window(scene);
    let scale = (WIDTH - 2.0 * MARGIN) / (hi - lo);
    let base = HEIGHT - MARGIN;
    let sx = |x: f64| MARGIN + (x - lo) * scale;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    if let Some(t) = &scene.title {
        let _ = writeln!(out, r#"<text x="{MARGIN}" y="18" font-size="13" font-family="sans-serif">{}</text>"#, escape(t));
    }
    let _ = writeln!(
        out,
        r#"<line x1="{:.2}" y1="{base:.2}" x2="{:.2}" y2="{base:.2}" stroke="black" stroke-width="1"/>"#,
        MARGIN / 2.0,
        WIDTH - MARGIN / 2.0
    );
    let mut colour = 0usize;
    for item in &scene.items {
        match item {
            SceneItem::Geodesic { ends, oriented, label } => {
                let c = PALETTE[colour % PALETTE.len()];
                colour += 1;
                let (label_x, label_y, head) = match ends {
                    [Some(p), Some(q)] => {
                        let (x1, x2) = (sx(p.min(*q)), sx(p.max(*q)));
                        let r = (x2 - x1) / 2.0;
                        let _ = writeln!(
                            out,
                            r#"<path d="M {x1:.2} {base:.2} A {r:.2} {r:.2} 0 0 1 {x2:.2} {base:.2}" fill="none" stroke="{c}" stroke-width="2"/>"#
                        );
                        ((x1 + x2) / 2.0, (base - r - 6.0).max(30.0), Some(sx(*q)))
                    }
                    [Some(p), None] | [None, Some(p)] => {
                        let x = sx(*p);
                        let _ = writeln!(
                            out,
                            r#"<line x1="{x:.2}" y1="{base:.2}" x2="{x:.2}" y2="{MARGIN:.2}" stroke="{c}" stroke-width="2"/>"#
                        );
                        let head = if ends[1].is_some() { Some(x) } else { None };
                        (x + 4.0, MARGIN + 12.0, head)
                    }
                    [None, None] => continue,
                };
                if *oriented {
                    // Attracting endpoint; a point at the top edge for ∞.
                    let (hx, hy) = match head {
                        Some(x) => (x, base),
                        None => (label_x - 4.0, MARGIN),
                    };
                    let _ = writeln!(out, r#"<circle cx="{hx:.2}" cy="{hy:.2}" r="4" fill="{c}"/>"#);
                }
                let _ = writeln!(
                    out,
                    r#"<text x="{label_x:.2}" y="{label_y:.2}" font-size="12" font-family="sans-serif" fill="{c}" text-anchor="middle">{}</text>"#,
                    escape(label)
                );
            }
            SceneItem::Point { x, y, label } => {
                let (px, py) = (sx(*x), base - y * scale);
                let _ = writeln!(out, r#"<circle cx="{px:.2}" cy="{py:.2}" r="3" fill="black"/>"#);
                let _ = writeln!(
                    out,
                    r#"<text x="{:.2}" y="{:.2}" font-size="12" font-family="sans-serif">{}</text>"#,
                    px + 5.0,
                    py - 5.0,
                    escape(label)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}
