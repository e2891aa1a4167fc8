//! Acceptance criteria 1 to 9, one line each.
//!
//! Runs without the libtest harness so the report reads top to bottom.

use std::process::ExitCode;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cdiagram::ast::{ArrowSpec, ShaftStyle};
use cdiagram::dump::emit_geometry;
use cdiagram::fixdim::{Dim, UnitRegistry};
use cdiagram::geom::{
    layout_arrow, tile_shaft, ArrowGeometry, ArrowKind, LayoutErrorKind, Point, QuadrantFlags, Side,
};
use cdiagram::metrics::{measure_diagram, FixedBoxMetrics, MetricsTables, TextMetricsProvider, TextSize};
use cdiagram::parser::{parse_arrow, parse_document, OptionFamily, ParseErrorKind};
use cdiagram::pipeline::{compile, Options};
use cdiagram::slope::{quantize_sp, select, SLOPES};

type Check = Result<(), String>;

const PT: i64 = 65536;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn tables(src: &str) -> (Vec<ArrowSpec>, MetricsTables) {
    let d = parse_document(src).expect("parses").0.diagram.expect("has a diagram");
    let t = measure_diagram(&d, &FixedBoxMetrics::default(), &UnitRegistry::default()).expect("measures");
    let arrows = d.rows.iter().flatten().flat_map(|c| c.arrows.clone()).collect();
    (arrows, t)
}

fn layout_all(src: &str) -> Vec<Result<ArrowGeometry, LayoutErrorKind>> {
    let (arrows, t) = tables(src);
    let m = FixedBoxMetrics::default();
    arrows.iter().map(|a| layout_arrow(a, &t, &m).map_err(|e| e.kind)).collect()
}

fn one(src: &str) -> Result<ArrowGeometry, String> {
    layout_all(src).remove(0).map_err(|e| format!("{src}: {e}"))
}

fn c1_constants() -> Check {
    let u = UnitRegistry::default();
    let got = [u.hunit, u.standardcgap, u.standardrgap, u.mathaxis, u.strut_height, u.vunit];
    let want = [131072, 2621440, 2097152, 163840, 655360, 104858];
    for (g, w) in got.iter().zip(want) {
        ensure!(g.sp() == w, "expected {w} sp, got {}", g.sp());
    }
    Ok(())
}

/// Independent slope oracle: one plus the number of arithmetic-mean
/// breakpoints at or below dy/dx.
fn oracle(dy: i64, dx: i64) -> u8 {
    if dx <= 0 {
        return 23;
    }
    let mut idx = 1;
    for w in SLOPES.windows(2) {
        let ((a, b), (c, d)) = (w[0], w[1]);
        // dy/dx >= (a/b + c/d)/2
        if 2 * dy * b * d >= dx * (a * d + c * b) {
            idx += 1;
        }
    }
    idx
}

fn c2_slope_oracle() -> Check {
    let mut bad = 0;
    for dx in -50..=600i64 {
        for dy in 1..=600i64 {
            if quantize_sp(dy, dx).index != oracle(dy, dx) {
                bad += 1;
            }
        }
    }
    ensure!(bad == 0, "{bad} mismatches");
    Ok(())
}

fn c3_fixed_points() -> Check {
    for (i, &(num, den)) in SLOPES.iter().enumerate() {
        for a in 1..=1000 {
            let got = quantize_sp(a * num, a * den).index as usize;
            ensure!(got == i + 1, "{num}/{den} times {a} gave index {got}");
        }
    }
    Ok(())
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    let n = rng.gen_range(0..7);
    "abcdefg"[..n].to_string()
}

fn c4_reprojection() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let m = FixedBoxMetrics::default();
    let options = ["", r"\ds(1;-2)", r"\p{2}", r"\0t", r"\1t", r"\1s", r"\dtX(3;4)", r"\da{2}\dY{3}", r"\a-"];
    let mut checked = 0;
    while checked < 10_000 {
        let rows = rng.gen_range(2..5);
        let cols = rng.gen_range(2..5);
        let mut src = String::from(r"\CD ");
        for r in 0..rows {
            for c in 0..cols {
                src.push_str(&random_text(&mut rng));
                for _ in 0..3 {
                    let tr = rng.gen_range(0..rows) as i64;
                    let tc = rng.gen_range(0..cols) as i64;
                    let (xoff, yoff) = (tc - c as i64, r as i64 - tr);
                    if xoff == 0 || yoff == 0 {
                        continue;
                    }
                    let opt = options[rng.gen_range(0..options.len())];
                    src.push_str(&format!(" @(){opt}@({xoff},{yoff})"));
                }
                if c + 1 < cols {
                    src.push_str(" & ");
                }
            }
            if r + 1 < rows {
                src.push_str(r" \\ ");
            }
        }
        src.push_str(r" \endCD");
        let (arrows, t) = tables(&src);
        for a in &arrows {
            let g = layout_arrow(a, &t, &m).map_err(|e| format!("{src}: {e}"))?;
            ensure!(g.kind == ArrowKind::Slanted, "{src}: not slanted");
            let s = g.slope.unwrap();
            let (fx, fy) = (g.first.x.sp() as i64, g.first.y.sp() as i64);
            let (sx, sy) = (g.second.x.sp() as i64, g.second.y.sp() as i64);
            let sign = if g.flags.e { 1 } else { -1 };
            let reproject = |fx: i64, fy: i64, sy: i64| fx + sign * ((sy - fy).abs() * s.den / s.num);
            // the step reads only first and second.y, so a second pass is a no-op
            ensure!(sx == reproject(fx, fy, sy), "{src}: second.x off the line");
            let dx = (sx - fx).abs();
            let resid = dx * s.num - (sy - fy).abs() * s.den;
            ensure!(resid.abs() < s.num, "{src}: residency {resid} for {s}");
            checked += 1;
        }
    }
    Ok(())
}

fn tile_geometry(idx: i64, dy: i64) -> ArrowGeometry {
    let s = select(idx).unwrap();
    let ten = 10 * PT;
    let (cw, ch) = if s.num > s.den { (ten * s.den / s.num, ten) } else { (ten, ten / s.den * s.num) };
    let dim = |v: i64| Dim::from_sp(v).unwrap();
    ArrowGeometry {
        src_cell: (2, 1),
        tgt_cell: (1, 2),
        flags: QuadrantFlags { n: true, e: true, h: false, v: false, nesw: true, hshort: false },
        kind: ArrowKind::Slanted,
        first: Point { x: Dim::ZERO, y: Dim::ZERO },
        second: Point { x: dim(dy * s.den / s.num), y: dim(dy) },
        slope: Some(s),
        shaft: ShaftStyle::Solid,
        p_offset: Dim::ZERO,
        source_vertex: false,
        target_vertex: false,
        tile_size: Some((dim(cw), dim(ch))),
        shaft_pieces: vec![],
        decorations: vec![],
        labels: vec![],
        tiles: vec![],
    }
}

fn c5_tiling() -> Check {
    for idx in [1, 12, 23] {
        let ch = tile_geometry(idx, 0).tile_size.unwrap().1.sp() as i64;
        let mut sweep: Vec<i64> = (0..=40 * PT).step_by(997).collect();
        sweep.extend([ch - 1, ch, ch + 1, 2 * ch, 40 * PT]);
        for dy in sweep {
            let tiles = tile_shaft(&tile_geometry(idx, dy));
            let whole = tiles.iter().filter(|t| !t.partial).count() as i64;
            let want = (0i64).max((dy + ch - 1) / ch - 1);
            ensure!(whole == want, "idx {idx}, dy {dy}: {whole} whole tiles, want {want}");
            if dy == 0 {
                ensure!(tiles.is_empty(), "tiles for zero span");
                continue;
            }
            let last = tiles.last().unwrap();
            ensure!(last.partial, "idx {idx}, dy {dy}: no partial tile");
            ensure!(tiles.iter().filter(|t| t.partial).count() == 1, "more than one partial");
            ensure!(last.raise.sp() as i64 + ch == dy, "idx {idx}, dy {dy}: partial tile top {}", last.raise.sp() as i64 + ch);
        }
        // the strict edge: exactly one tile height makes no whole tile
        let edge = tile_shaft(&tile_geometry(idx, ch));
        ensure!(edge.len() == 1 && edge[0].partial && edge[0].x.sp() == 0, "edge case at charht");
    }
    Ok(())
}

fn c6_golden() -> Check {
    let src = include_str!("fixtures/golden.cd");
    let h = one(src)?;
    let v = layout_all(src).remove(1).map_err(|e| e.to_string())?;
    ensure!(h.first.x.sp() == 13 * 65536 && h.second.x.sp() == 47 * 65536, "H endpoints {} {}", h.first, h.second);
    ensure!(h.first.y.sp() == 163840 && h.second.y.sp() == 163840, "H not on the math axis");
    ensure!(v.first.y.sp() == -5 * 65536 && v.second.y.sp() == -31 * 65536, "V endpoints {} {}", v.first, v.second);
    let fixture = include_str!("fixtures/golden.geom");
    for run in 1..=5 {
        let c = compile(src, &FixedBoxMetrics::default(), &Options::default()).map_err(|e| format!("{e:?}"))?;
        let dump = emit_geometry(&c.arrows, c.frame.as_ref());
        ensure!(dump == fixture, "run {run}: dump differs from fixture");
    }
    Ok(())
}

fn c7_options() -> Check {
    let pairs = [
        (r"\0t", r"\0h"),
        (r"\1t", r"\1h"),
        (r"\a-", r"\a="),
        (r"\ds(1;2)", r"\ds(3;4)"),
        (r"\dtX(1;2)", r"\dtX(3;4)"),
        (r"\dtY(1;2)", r"\dtY(3;4)"),
        (r"\da{1}", r"\da{2}"),
        (r"\dx{1}", r"\dx{2}"),
        (r"\dX{1}", r"\dX{2}"),
        (r"\dy{1}", r"\dy{2}"),
        (r"\dY{1}", r"\dY{2}"),
        (r"\p{1}", r"\p{2}"),
        (r"\L{f}", r"\L{g}"),
        (r"\l{f}", r"\l{g}"),
        (r"\dL{1}", r"\dL{2}"),
        (r"\dl{1}", r"\dl{2}"),
    ];
    for (a, b) in pairs {
        let first = parse_arrow(&format!("@(){a}@(1,1)")).map_err(|e| e.to_string())?;
        let both = parse_arrow(&format!("@(){a}{b}@(1,1)")).map_err(|e| e.to_string())?;
        ensure!(first.options == both.options, "{a} then {b} did not keep {a}");
    }
    let su = parse_arrow(r"@()\s\uns@(2,0)").unwrap().options;
    let us = parse_arrow(r"@()\uns\s@(2,0)").unwrap().options;
    ensure!(su.short && !su.unshort && us.unshort && !us.short, "short/unshort not exclusive");

    let square = r"\CD & abcd \\ {A} & \endCD";
    for (k, want) in [(100, 23), (-100, 1)] {
        let g = one(&square.replace("{A}", &format!(r"@()\da{{{k}}}@(1,1)")))?;
        ensure!(g.slope.unwrap().index == want, "da {k} gave {}", g.slope.unwrap());
    }
    // south-east runs the table the other way
    let se = r"\CD {A} & \\ & abcd \endCD";
    let g = one(&se.replace("{A}", r"@()\da{100}@(1,-1)"))?;
    ensure!(g.slope.unwrap().index == 1, "SE da 100 gave {}", g.slope.unwrap());

    let m = FixedBoxMetrics::default();
    let h = one(r"\CD abcd @()\a0\L{f}@(1,0) & abcd \endCD")?;
    ensure!(h.shaft_pieces.is_empty() && h.decorations.is_empty(), "invisible H draws ink");
    let l = &h.labels[0];
    let mid = (h.first.x.sp() + h.second.x.sp()) / 2;
    let centre = l.at.x.sp() + l.extent.width.sp() / 2;
    ensure!((centre - mid).abs() <= 1, "invisible H label centre {centre}, span middle {mid}");
    ensure!(l.size == TextSize::Text && l.extent == m.measure("f", TextSize::Text), "invisible label not full size");
    let s = one(r"\CD & abcd \\ @()\a0\L{f}\l{g}@(1,1) & \endCD")?;
    ensure!(s.shaft_pieces.is_empty() && s.decorations.is_empty() && s.tiles.is_empty(), "invisible slanted draws ink");
    ensure!(s.labels.len() == 1, "invisible shaft keeps its lower label");
    let l = &s.labels[0];
    let mid = (s.first.x.sp() + s.second.x.sp()) / 2;
    let centre = l.at.x.sp() + l.extent.width.sp() / 2;
    ensure!((centre - mid).abs() <= 1 && l.side == Side::Left, "invisible slanted label centre {centre} vs {mid}");
    Ok(())
}

fn c8_errors() -> Check {
    for off in ["@(1,0)", "@(-1,0)", "@(0,1)", "@(0,-1)"] {
        let r = layout_all(&format!(r"\CD A {off} \endCD"));
        ensure!(r[0] == Err(LayoutErrorKind::ArrowOutsideGrid), "{off} inside a 1x1 grid");
        ensure!(
            r[0].as_ref().unwrap_err().to_string().contains("points outside"),
            "message does not mirror the source"
        );
    }
    let cases = [(r"\0", 'q', OptionFamily::Source), (r"\1", 'q', OptionFamily::Target), (r"\a", '*', OptionFamily::Shaft)];
    for (cmd, c, fam) in cases {
        let e = parse_arrow(&format!("@(){cmd}{c}@(1,0)")).unwrap_err();
        ensure!(e.kind == ParseErrorKind::InvalidOptionChar { found: c, family: fam }, "{cmd}{c} gave {}", e.kind);
        let shown = cmd;
        ensure!(e.to_string().contains(shown), "message {e} does not name {shown}");
    }
    Ok(())
}

fn c9_gaps() -> Check {
    let pt = |v: i64| v * PT;
    let (_, t) = tables(r"\cgaps{1;2} \CD A \endCD");
    let got: Vec<i64> = (1..=4).map(|i| t.cgap(i).sp() as i64).collect();
    ensure!(got == [0, pt(40), pt(80), pt(40)], "cgaps{{1;2}} gave {got:?}");
    let (_, t) = tables(r"\rgaps{0.5} \CD A \endCD");
    let got: Vec<i64> = (0..=3).map(|i| t.rgap(i).sp() as i64).collect();
    ensure!(got == [0, pt(16), pt(32), pt(32)], "rgaps{{0.5}} gave {got:?}");
    let (_, t) = tables(r"\cgaps{\w{X}} \CD A \endCD");
    ensure!(t.cgap(2).sp() as i64 == pt(40), "w{{X}} should lose to 40pt");
    // ten script glyphs are 35pt wide, plus the 15pt margin
    let (_, t) = tables(r"\cgaps{\w{XXXXXXXXXX}} \CD A \endCD");
    ensure!(t.cgap(2).sp() as i64 == pt(50), "w{{10 glyphs}} gave {}", t.cgap(2).sp());
    ensure!(t.cgap(1).sp() == 0, "cgap(1) not pinned");
    Ok(())
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Check);
    let criteria: [Criterion; 9] = [
        ("constants", c1_constants),
        ("slope oracle", c2_slope_oracle),
        ("exact-slope fixed points", c3_fixed_points),
        ("re-projection", c4_reprojection),
        ("tiling", c5_tiling),
        ("golden geometry", c6_golden),
        ("option semantics", c7_options),
        ("error parity", c8_errors),
        ("gap resolution", c9_gaps),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(()) => println!("criterion {}: {name}: PASS", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: {name}: FAIL ({e})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
