//! Deterministic SVG output.
//!
//! Every coordinate is derived from scaled points and printed in points with
//! at most four decimals, so the bytes depend only on the scene.

use std::fmt::Write as _;

use crate::ast::DecorCode;
use crate::fixdim::Factor;
use crate::metrics::TextSize;
use crate::scene::{Primitive, Scene};

const PT: i64 = 65536;
/// Arrowhead length and half-width.
const HEAD_LEN: i64 = 3 * PT + PT / 2;
const HEAD_HALF: i64 = 104858; // 1.6pt
const HOOK_R: i64 = 2 * PT;
const SPLIT_R: i64 = 3 * PT / 2;
const STROKE: &str = "0.4";

/// Points with up to four decimals, rounded half away from zero, trailing
/// zeros dropped.
pub fn fmt_pt(sp: i64) -> String {
    let scaled = sp as i128 * 10000;
    let mut q = scaled.abs() / 65536;
    if (scaled.abs() % 65536) * 2 >= 65536 {
        q += 1;
    }
    let sign = if sp < 0 && q != 0 { "-" } else { "" };
    let (int, frac) = (q / 10000, q % 10000);
    if frac == 0 {
        return format!("{sign}{int}");
    }
    let f = format!("{frac:04}");
    format!("{sign}{int}.{}", f.trim_end_matches('0'))
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

/// Unit direction plus the normal on its counter-clockwise side, both in
/// page orientation (y down).
fn frame(dir: (i64, i64)) -> ((f64, f64), (f64, f64)) {
    let (x, y) = (dir.0 as f64, dir.1 as f64);
    let len = (x * x + y * y).sqrt();
    let u = if len == 0.0 { (1.0, 0.0) } else { (x / len, y / len) };
    (u, (u.1, -u.0))
}

/// `base + a·u + b·n`, snapped back to scaled points.
fn off(base: (i64, i64), u: (f64, f64), n: (f64, f64), a: i64, b: i64) -> (i64, i64) {
    let (a, b) = (a as f64, b as f64);
    (base.0 + (a * u.0 + b * n.0).round() as i64, base.1 + (a * u.1 + b * n.1).round() as i64)
}

fn pair(p: (i64, i64)) -> String {
    format!("{} {}", fmt_pt(p.0), fmt_pt(p.1))
}

fn polygon(out: &mut String, pts: &[(i64, i64)]) {
    let mut d = format!("M {}", pair(pts[0]));
    for &p in &pts[1..] {
        let _ = write!(d, " L {}", pair(p));
    }
    let _ = writeln!(out, "<path d=\"{d} Z\"/>");
}

fn stroke(out: &mut String, d: &str) {
    let _ = writeln!(out, "<path d=\"{d}\" fill=\"none\" stroke=\"black\" stroke-width=\"{STROKE}\"/>");
}

fn head(out: &mut String, tip: (i64, i64), u: (f64, f64), n: (f64, f64)) {
    polygon(out, &[tip, off(tip, u, n, -HEAD_LEN, HEAD_HALF), off(tip, u, n, -HEAD_LEN, -HEAD_HALF)]);
}

fn glyph(out: &mut String, code: DecorCode, tip: (i64, i64), dir: (i64, i64), second: Option<(i64, i64)>) {
    let (u, n) = frame(dir);
    match code {
        DecorCode::Default | DecorCode::Head => head(out, tip, u, n),
        DecorCode::DoubleHead => {
            head(out, tip, u, n);
            if let Some(s) = second {
                head(out, s, u, n);
            }
        }
        DecorCode::Tail => {
            let (a, b) = (off(tip, u, n, 0, HEAD_HALF), off(tip, u, n, 0, -HEAD_HALF));
            stroke(out, &format!("M {} L {}", pair(a), pair(b)));
        }
        DecorCode::HarpoonUp | DecorCode::HarpoonDown => {
            let side = if code == DecorCode::HarpoonUp { 1 } else { -1 };
            polygon(out, &[tip, off(tip, u, n, -HEAD_LEN, side * HEAD_HALF), off(tip, u, n, -HEAD_LEN, 0)]);
        }
        DecorCode::HookOpen | DecorCode::HookClose => {
            let side = if code == DecorCode::HookOpen { 1 } else { -1 };
            let end = off(tip, u, n, HOOK_R, side * HOOK_R);
            // quarter circle centred one radius to the side of the tip
            let center = off(tip, u, n, 0, side * HOOK_R);
            let (a, b) = ((tip.0 - center.0, tip.1 - center.1), (end.0 - center.0, end.1 - center.1));
            let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
            let sweep = u8::from(cross > 0);
            let r = fmt_pt(HOOK_R);
            stroke(out, &format!("M {} A {r} {r} 0 0 {sweep} {}", pair(tip), pair(end)));
        }
        DecorCode::Split => {
            let c = off(tip, u, n, -SPLIT_R, 0);
            let (l, r) = ((c.0 - SPLIT_R, c.1), (c.0 + SPLIT_R, c.1));
            let rad = fmt_pt(SPLIT_R);
            stroke(out, &format!("M {} A {rad} {rad} 0 1 0 {} A {rad} {rad} 0 1 0 {} Z", pair(l), pair(r), pair(l)));
        }
        DecorCode::Empty => {}
    }
}

/// Renders a scene. `scale` is points per output pixel.
pub fn emit_svg(s: &Scene, scale: Factor) -> String {
    let w = s.width.sp() as i64;
    let h = s.height.sp() as i64;
    let px = |v: i64| {
        let p = scale.numerator().max(1) as i128;
        fmt_pt((v as i128 * 65536 / p) as i64)
    };
    let mut out = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"0 0 {} {}\"",
        px(w),
        px(h),
        fmt_pt(w),
        fmt_pt(h)
    );
    if s.primitives.is_empty() {
        out.push_str("/>\n");
        return out;
    }
    out.push_str(">\n");
    for p in &s.primitives {
        match p {
            Primitive::Rule { x, y, w, h } => {
                let _ = writeln!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                    fmt_pt(x.sp() as i64),
                    fmt_pt(y.sp() as i64),
                    fmt_pt(w.sp() as i64),
                    fmt_pt(h.sp() as i64)
                );
            }
            Primitive::Stroke { x0, y0, x1, y1 } => {
                let a = (x0.sp() as i64, y0.sp() as i64);
                let b = (x1.sp() as i64, y1.sp() as i64);
                stroke(&mut out, &format!("M {} L {}", pair(a), pair(b)));
            }
            Primitive::Glyph { code, tip, dir, second, .. } => {
                let t = (tip.0.sp() as i64, tip.1.sp() as i64);
                let s2 = second.map(|(x, y)| (x.sp() as i64, y.sp() as i64));
                glyph(&mut out, *code, t, *dir, s2);
            }
            Primitive::Text { x, y, text, size, .. } => {
                let fs = match size {
                    TextSize::Text => "10",
                    TextSize::Script => "7",
                };
                let _ = writeln!(
                    out,
                    "<text x=\"{}\" y=\"{}\" font-family=\"serif\" font-size=\"{fs}\">{}</text>",
                    fmt_pt(x.sp() as i64),
                    fmt_pt(y.sp() as i64),
                    escape(text)
                );
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixdim::Dim;

    #[test]
    fn point_formatting() {
        assert_eq!(fmt_pt(0), "0");
        assert_eq!(fmt_pt(65536), "1");
        assert_eq!(fmt_pt(26214), "0.4");
        assert_eq!(fmt_pt(163840), "2.5");
        assert_eq!(fmt_pt(-163840), "-2.5");
        assert_eq!(fmt_pt(1), "0");
        assert_eq!(fmt_pt(-1), "0");
        // 104858 sp = 1.600006..pt
        assert_eq!(fmt_pt(104858), "1.6");
        assert_eq!(fmt_pt(33), "0.0005");
    }

    #[test]
    fn empty_scene_is_root_only() {
        let s = Scene { width: Dim::pt(0), height: Dim::pt(10), primitives: vec![] };
        let svg = emit_svg(&s, Factor::ONE);
        assert_eq!(svg.lines().count(), 1);
        assert!(svg.starts_with("<svg ") && svg.ends_with("/>\n"));
    }

    #[test]
    fn one_rule() {
        let s = Scene {
            width: Dim::pt(34),
            height: Dim::pt(1),
            primitives: vec![Primitive::Rule {
                x: Dim::ZERO,
                y: Dim::ZERO,
                w: Dim::pt(34),
                h: Dim::from_sp_const(26214),
            }],
        };
        let svg = emit_svg(&s, Factor::ONE);
        assert!(svg.contains("<rect x=\"0\" y=\"0\" width=\"34\" height=\"0.4\"/>"));
        assert_eq!(svg.matches('<').count(), 3);
    }

    #[test]
    fn scale_shrinks_outer_size() {
        let s = Scene { width: Dim::pt(20), height: Dim::pt(10), primitives: vec![] };
        let svg = emit_svg(&s, "2".parse().unwrap());
        assert!(svg.contains("width=\"10\" height=\"5\" viewBox=\"0 0 20 10\""));
    }

    #[test]
    fn text_is_escaped() {
        assert_eq!(escape("a<b&\"c\""), "a&lt;b&amp;&quot;c&quot;");
    }
}
