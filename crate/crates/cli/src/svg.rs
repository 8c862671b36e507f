//! Deterministic SVG 1.1: y axis up, 100 px per unit.

use std::fmt::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;

const UNIT: f64 = 100.0;
const MARGIN: f64 = 20.0;

const STYLE: &str = "\
.edge-0{fill:none;stroke:#1f5fa8;stroke-width:1.5}
.edge-1{fill:none;stroke:#b8401f;stroke-width:1.5}
.edge-2{fill:none;stroke:#2d8a3e;stroke-width:1.5}
.edge-3{fill:none;stroke:#7a3fa0;stroke-width:1.5}
.translate{stroke-opacity:0.35}
.axis{stroke:#999;stroke-width:0.5}
.hull{fill:#f2e6b3;fill-opacity:0.6;stroke:#8a6d00;stroke-width:1}
.fixed{fill:none;stroke:#000;stroke-width:1.5}
.period2{stroke:#b8401f;stroke-width:1.5}
.periodic{fill:#000}
.loop{fill:#666}";

enum Shape {
    Polyline(Vec<(f64, f64)>, String),
    Polygon(Vec<(f64, f64)>, String),
    Circle((f64, f64), f64, String),
    Cross((f64, f64), f64, String),
    Line((f64, f64), (f64, f64), String),
}

#[derive(Default)]
pub struct Figure {
    shapes: Vec<Shape>,
    min: Option<(f64, f64)>,
    max: Option<(f64, f64)>,
}

pub fn pt(v: &[BigRational]) -> (f64, f64) {
    let f = |x: Option<&BigRational>| x.and_then(ToPrimitive::to_f64).unwrap_or(0.0);
    (f(v.first()), f(v.get(1)))
}

impl Figure {
    pub fn new() -> Self {
        Self::default()
    }

    fn extend(&mut self, p: (f64, f64)) {
        let (lo, hi) = match (self.min, self.max) {
            (Some(lo), Some(hi)) => ((lo.0.min(p.0), lo.1.min(p.1)), (hi.0.max(p.0), hi.1.max(p.1))),
            _ => (p, p),
        };
        self.min = Some(lo);
        self.max = Some(hi);
    }

    pub fn polyline(&mut self, pts: Vec<(f64, f64)>, class: &str) {
        pts.iter().for_each(|&p| self.extend(p));
        self.shapes.push(Shape::Polyline(pts, class.into()));
    }

    pub fn polygon(&mut self, pts: Vec<(f64, f64)>, class: &str) {
        pts.iter().for_each(|&p| self.extend(p));
        self.shapes.push(Shape::Polygon(pts, class.into()));
    }

    /// Radius in pixels.
    pub fn circle(&mut self, p: (f64, f64), r: f64, class: &str) {
        self.extend(p);
        self.shapes.push(Shape::Circle(p, r, class.into()));
    }

    pub fn cross(&mut self, p: (f64, f64), r: f64, class: &str) {
        self.extend(p);
        self.shapes.push(Shape::Cross(p, r, class.into()));
    }

    pub fn line(&mut self, a: (f64, f64), b: (f64, f64), class: &str) {
        self.extend(a);
        self.extend(b);
        self.shapes.push(Shape::Line(a, b, class.into()));
    }

    pub fn render(&self) -> String {
        let (lo, hi) = (self.min.unwrap_or((0.0, 0.0)), self.max.unwrap_or((0.0, 0.0)));
        let w = (hi.0 - lo.0) * UNIT + 2.0 * MARGIN;
        let h = (hi.1 - lo.1) * UNIT + 2.0 * MARGIN;
        let map = |p: (f64, f64)| ((p.0 - lo.0) * UNIT + MARGIN, (hi.1 - p.1) * UNIT + MARGIN);
        let points = |ps: &[(f64, f64)]| {
            ps.iter()
                .map(|&p| {
                    let (x, y) = map(p);
                    format!("{},{}", num(x), num(y))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let mut s = String::new();
        writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
            num(w),
            num(h),
            num(w),
            num(h)
        )
        .unwrap();
        writeln!(s, "<style>\n{STYLE}\n</style>").unwrap();
        for shape in &self.shapes {
            match shape {
                Shape::Polyline(ps, c) => writeln!(s, r#"<polyline class="{c}" points="{}"/>"#, points(ps)),
                Shape::Polygon(ps, c) => writeln!(s, r#"<polygon class="{c}" points="{}"/>"#, points(ps)),
                Shape::Circle(p, r, c) => {
                    let (x, y) = map(*p);
                    writeln!(s, r#"<circle class="{c}" cx="{}" cy="{}" r="{}"/>"#, num(x), num(y), num(*r))
                }
                Shape::Cross(p, r, c) => {
                    let (x, y) = map(*p);
                    writeln!(
                        s,
                        r#"<path class="{c}" d="M{} {}L{} {}M{} {}L{} {}"/>"#,
                        num(x - r),
                        num(y - r),
                        num(x + r),
                        num(y + r),
                        num(x - r),
                        num(y + r),
                        num(x + r),
                        num(y - r)
                    )
                }
                Shape::Line(a, b, c) => {
                    let ((x1, y1), (x2, y2)) = (map(*a), map(*b));
                    writeln!(
                        s,
                        r#"<line class="{c}" x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        num(x1),
                        num(y1),
                        num(x2),
                        num(y2)
                    )
                }
            }
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Fixed two-decimal rendering with trailing zeros trimmed.
fn num(x: f64) -> String {
    let s = format!("{:.2}", x + 0.0);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}
