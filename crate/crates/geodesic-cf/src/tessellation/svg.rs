//! SVG rendering of a trace: the visited translates of `ℱ`, the geodesic, and the
//! symbol of each crossed side. Floating point is used only for drawing.

use super::{ExitSide, GeodesicSpec, Trace};
use crate::exactnum::{ExtReal, IntMatrix2};
use num_traits::ToPrimitive;
use std::fmt::Write;

const WIDTH: f64 = 800.0;
const TOP: f64 = 6.0;
const EDGE_SAMPLES: usize = 16;
const ARC_SAMPLES: usize = 32;

#[derive(Clone, Copy, Debug)]
struct C(f64, f64);

impl C {
    fn add(self, o: C) -> C {
        C(self.0 + o.0, self.1 + o.1)
    }
    fn div(self, o: C) -> C {
        let n = o.0 * o.0 + o.1 * o.1;
        C(
            (self.0 * o.0 + self.1 * o.1) / n,
            (self.1 * o.0 - self.0 * o.1) / n,
        )
    }
    fn scale(self, s: f64) -> C {
        C(self.0 * s, self.1 * s)
    }
}

fn f(x: &num_bigint::BigInt) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

fn mobius(m: &IntMatrix2, z: C) -> C {
    let (a, b, c, d) = (f(&m.a), f(&m.b), f(&m.c), f(&m.d));
    z.scale(a).add(C(b, 0.0)).div(z.scale(c).add(C(d, 0.0)))
}

/// Boundary of `ℱ` truncated at height `TOP`, counter-clockwise from the top left.
fn domain_outline() -> Vec<C> {
    let s3 = 3f64.sqrt() / 2.0;
    let mut pts = Vec::new();
    for i in 0..=EDGE_SAMPLES {
        let y = TOP - (TOP - s3) * i as f64 / EDGE_SAMPLES as f64;
        pts.push(C(-0.5, y));
    }
    for i in 1..ARC_SAMPLES {
        let a = std::f64::consts::PI * (2.0 / 3.0 - i as f64 / (3.0 * ARC_SAMPLES as f64));
        pts.push(C(a.cos(), a.sin()));
    }
    for i in 0..=EDGE_SAMPLES {
        let y = s3 + (TOP - s3) * i as f64 / EDGE_SAMPLES as f64;
        pts.push(C(0.5, y));
    }
    pts
}

struct View {
    x0: f64,
    x1: f64,
    y1: f64,
}

impl View {
    fn of(g: &GeodesicSpec) -> View {
        match (&g.head, &g.foot) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => {
                let (a, b) = (a.to_f64(), b.to_f64());
                let w = (b - a).abs().max(1.0);
                View {
                    x0: a.min(b) - 0.25 * w,
                    x1: a.max(b) + 0.25 * w,
                    y1: 0.75 * w,
                }
            }
            (ExtReal::Finite(t), _) | (_, ExtReal::Finite(t)) => {
                let t = t.to_f64();
                View {
                    x0: t - 1.0,
                    x1: t + 1.0,
                    y1: 1.5,
                }
            }
            _ => unreachable!("a geodesic has a finite endpoint"),
        }
    }

    fn scale(&self) -> f64 {
        WIDTH / (self.x1 - self.x0)
    }

    fn height(&self) -> f64 {
        self.y1 * self.scale()
    }

    fn px(&self, z: C) -> (f64, f64) {
        let s = self.scale();
        let y = z.1.min(self.y1);
        ((z.0 - self.x0) * s, (self.y1 - y) * s)
    }
}

/// Point of the (pulled-back) geodesic with real part `x`, in floating point.
fn point_on(g: &GeodesicSpec, x: f64) -> C {
    match (&g.head, &g.foot) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            let (a, b) = (a.to_f64(), b.to_f64());
            C(x, (-(x - a) * (x - b)).max(0.0).sqrt())
        }
        _ => C(x, (1.0 - x * x).max(0.0).sqrt()),
    }
}

/// Renders the domains visited by `trace` together with the geodesic `g`.
pub fn render_svg(g: &GeodesicSpec, trace: &Trace) -> String {
    let view = View::of(g);
    let outline = domain_outline();
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"#,
        WIDTH,
        view.height(),
        WIDTH,
        view.height()
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let mut hs = vec![IntMatrix2::identity()];
    hs.extend(trace.steps.iter().map(|st| st.h.clone()));
    for (j, h) in hs.iter().enumerate() {
        let mut d = String::new();
        for (i, z) in outline.iter().enumerate() {
            let (x, y) = view.px(mobius(h, *z));
            let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, x, y);
        }
        let fill = if j == 0 { "#dde8f5" } else { "#f3f3f3" };
        let _ = writeln!(
            s,
            r##"<path d="{}Z" fill="{}" stroke="#555555" stroke-width="1"/>"##,
            d.trim_end(),
            fill
        );
    }
    let axis_y = view.px(C(0.0, 0.0)).1;
    let _ = writeln!(
        s,
        r##"<line x1="0" y1="{:.2}" x2="{:.0}" y2="{:.2}" stroke="#000000" stroke-width="1"/>"##,
        axis_y, WIDTH, axis_y
    );
    match (&g.head, &g.foot) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            let (a, b) = (a.to_f64(), b.to_f64());
            let (xa, ya) = view.px(C(a, 0.0));
            let (xb, yb) = view.px(C(b, 0.0));
            let r = (b - a).abs() / 2.0 * view.scale();
            let _ = writeln!(
                s,
                r##"<path d="M{:.2},{:.2} A{:.2},{:.2} 0 0 {} {:.2},{:.2}" fill="none" stroke="#c0392b" stroke-width="2"/>"##,
                xa,
                ya,
                r,
                r,
                if b > a { 1 } else { 0 },
                xb,
                yb
            );
        }
        (ExtReal::Finite(t), _) | (_, ExtReal::Finite(t)) => {
            let (x, y) = view.px(C(t.to_f64(), 0.0));
            let _ = writeln!(
                s,
                r##"<line x1="{:.2}" y1="0" x2="{:.2}" y2="{:.2}" stroke="#c0392b" stroke-width="2"/>"##,
                x, x, y
            );
        }
        _ => {}
    }
    for (j, st) in trace.steps.iter().enumerate() {
        let prev = &hs[j];
        let pulled = g.transform(&prev.adjugate()).expect("invertible");
        let x = st.exit_x.to_f64();
        let local = match st.side {
            ExitSide::Left | ExitSide::Right => {
                let p = point_on(&pulled, x);
                C(x, p.1.max(3f64.sqrt() / 2.0))
            }
            _ => point_on(&pulled, x),
        };
        let (px, py) = view.px(mobius(prev, local));
        let _ = writeln!(
            s,
            r##"<text x="{:.2}" y="{:.2}" font-size="12" font-family="serif" fill="#1a5276">{}&#772;</text>"##,
            px,
            py - 4.0,
            st.symbol.token()
        );
    }
    s.push_str("</svg>\n");
    s
}
