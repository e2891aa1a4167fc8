//! Canonical geometry dump.
//!
//! ```text
//! cdgeom 1
//!
//! [arrow 1]
//! cell=1,1
//! first=851968,163840
//! ...
//! ```
//!
//! Values are raw scaled points in the arrow's own frame (y up, relative to
//! the source cell). Keys are sorted within each record; lines end in LF.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::ast::ShaftStyle;
use crate::geom::{ArrowGeometry, ArrowKind, DecorPlacement, LabelPlacement, LabelWhich, Point};
use crate::metrics::TextSize;
use crate::scene::GridFrame;

pub const HEADER: &str = "cdgeom 1";

fn point(p: Point) -> String {
    format!("{},{}", p.x.sp(), p.y.sp())
}

fn decor(d: &DecorPlacement) -> String {
    let mut s = format!("{} tip={} out={},{}", d.slot, point(d.tip), d.outward.0, d.outward.1);
    if let Some(c) = d.cell {
        let _ = write!(s, " cell={}", point(c));
    }
    if let Some(e) = d.extra {
        let _ = write!(s, " extra={}", point(e));
    }
    s
}

fn label(l: &LabelPlacement) -> String {
    let size = match l.size {
        TextSize::Text => "text",
        TextSize::Script => "script",
    };
    let side = match l.side {
        crate::geom::Side::Left => "left",
        crate::geom::Side::Right => "right",
        crate::geom::Side::Centered => "centered",
    };
    format!(
        "{} {size} {side} box={},{},{} text={:?}",
        point(l.at),
        l.extent.width.sp(),
        l.extent.height.sp(),
        l.extent.depth.sp(),
        l.text
    )
}

fn record(g: &ArrowGeometry, frame: Option<&GridFrame>) -> BTreeMap<&'static str, String> {
    let mut m = BTreeMap::new();
    m.insert("cell", format!("{},{}", g.src_cell.0, g.src_cell.1));
    m.insert("target", format!("{},{}", g.tgt_cell.0, g.tgt_cell.1));
    m.insert(
        "kind",
        match g.kind {
            ArrowKind::Horizontal => "H",
            ArrowKind::Vertical => "V",
            ArrowKind::Slanted => "S",
        }
        .to_string(),
    );
    let fl = &g.flags;
    let names = [("e", fl.e), ("h", fl.h), ("hshort", fl.hshort), ("n", fl.n), ("nesw", fl.nesw), ("v", fl.v)];
    let set: Vec<&str> = names.iter().filter(|(_, b)| *b).map(|(n, _)| *n).collect();
    m.insert("flags", if set.is_empty() { "-".into() } else { set.join(",") });
    m.insert("first", point(g.first));
    m.insert("second", point(g.second));
    m.insert("slope", g.slope.map_or("-".into(), |s| s.to_string()));
    m.insert(
        "shaft",
        match g.shaft {
            ShaftStyle::Solid => "solid",
            ShaftStyle::Invisible => "invisible",
            ShaftStyle::Broken => "broken",
            ShaftStyle::Double => "double",
        }
        .to_string(),
    );
    m.insert("p", g.p_offset.sp().to_string());
    m.insert("vertex", format!("{},{}", u8::from(g.source_vertex), u8::from(g.target_vertex)));
    if let Some((w, h)) = g.tile_size {
        m.insert("tile", format!("{},{}", w.sp(), h.sp()));
        let tiles: Vec<String> = g
            .tiles
            .iter()
            .map(|t| format!("{},{}{}", t.x.sp(), t.raise.sp(), if t.partial { "p" } else { "" }))
            .collect();
        m.insert("tiles", tiles.join(" "));
    }
    for d in &g.decorations {
        let key = match d.role {
            crate::ast::Role::Source => "decor.source",
            crate::ast::Role::Target => "decor.target",
        };
        m.insert(key, decor(d));
    }
    for l in &g.labels {
        let key = match l.which {
            LabelWhich::Upper => "label.upper",
            LabelWhich::Lower => "label.lower",
        };
        m.insert(key, label(l));
    }
    if let Some(f) = frame {
        let (r, c) = g.src_cell;
        m.insert("origin", format!("{},{}", f.col_center(c).sp(), f.row_baseline(r).sp()));
    }
    m
}

/// Dump of all arrows. Always starts with the version line.
pub fn emit_geometry(geoms: &[ArrowGeometry], frame: Option<&GridFrame>) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for (i, g) in geoms.iter().enumerate() {
        let _ = write!(out, "\n[arrow {}]\n", i + 1);
        for (k, v) in record(g, frame) {
            let _ = writeln!(out, "{k}={v}");
        }
    }
    out
}
