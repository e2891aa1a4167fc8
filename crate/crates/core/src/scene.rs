//! Absolute placement: the grid frame, and the flat list of primitives the
//! emitters consume. Page coordinates, y downward, origin top left.

use crate::ast::{DecorCode, Diagram, Document, InlineArrow, InlineDirection, Role};
use crate::fixdim::{Dim, DimError, UnitRegistry};
use crate::geom::{fil_half, ArrowGeometry, GlyphSlot, ShaftPiece};
use crate::metrics::{thick_space, MetricsTables, TextMetricsProvider, TextSize};

type R<T> = Result<T, DimError>;

fn d(v: i64) -> R<Dim> {
    Dim::from_sp(v)
}

/// Column centers and row baselines of a measured diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridFrame {
    col_center: Vec<Dim>,
    col_left: Vec<Dim>,
    row_baseline: Vec<Dim>,
    pub total_width: Dim,
    pub total_height: Dim,
    pub pre_space: Dim,
    pub post_space: Dim,
}

impl GridFrame {
    pub fn new(t: &MetricsTables) -> R<GridFrame> {
        let mut col_center = Vec::with_capacity(t.cols);
        let mut col_left = Vec::with_capacity(t.cols);
        let mut x = 0i64;
        let mut center = 0i64;
        for c in 1..=t.cols {
            // the gap skip opens every column; cgap(1) is pinned to zero
            x += t.cgap(c).sp() as i64;
            let w = t.colwidth(c).sp() as i64;
            center = if c == 1 { w / 2 } else { center + t.colwidth(c - 1).sp() as i64 / 2 + t.cgap(c).sp() as i64 + w / 2 };
            col_left.push(d(x)?);
            col_center.push(d(center)?);
            x += w;
        }
        let pre = t.pre_space.sp() as i64;
        let mut row_baseline = Vec::with_capacity(t.rows);
        let mut y = pre;
        for r in 1..=t.rows {
            if r > 1 {
                y += t.rgap(r - 1).sp() as i64;
            }
            y += t.rowheight(r).sp() as i64;
            row_baseline.push(d(y)?);
            y += t.rowdepth(r).sp() as i64;
        }
        y += t.post_space.sp() as i64;
        Ok(GridFrame {
            col_center,
            col_left,
            row_baseline,
            total_width: d(x)?,
            total_height: d(y)?,
            pre_space: t.pre_space,
            post_space: t.post_space,
        })
    }

    /// 1-based.
    pub fn col_center(&self, c: usize) -> Dim {
        self.col_center[c - 1]
    }

    pub fn col_left(&self, c: usize) -> Dim {
        self.col_left[c - 1]
    }

    pub fn row_baseline(&self, r: usize) -> Dim {
        self.row_baseline[r - 1]
    }

    /// Page position of a point given relative to cell (row, col).
    pub fn to_page(&self, cell: (usize, usize), x: Dim, y: Dim) -> (i64, i64) {
        let ox = self.col_center(cell.1).sp() as i64;
        let oy = self.row_baseline(cell.0).sp() as i64;
        (ox + x.sp() as i64, oy - y.sp() as i64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitive {
    /// Filled rectangle, top-left corner plus size.
    Rule { x: Dim, y: Dim, w: Dim, h: Dim },
    /// Straight 0.4pt stroke; slanted shafts are made of these.
    Stroke { x0: Dim, y0: Dim, x1: Dim, y1: Dim },
    /// A decoration glyph, drawn as a vector shape at its tip.
    Glyph {
        role: Role,
        code: DecorCode,
        slot: GlyphSlot,
        tip: (Dim, Dim),
        /// Away from the shaft, page orientation.
        dir: (i64, i64),
        second: Option<(Dim, Dim)>,
    },
    /// Text with its left baseline point and natural box.
    Text { x: Dim, y: Dim, text: String, size: TextSize, width: Dim, height: Dim, depth: Dim },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Scene {
    pub width: Dim,
    pub height: Dim,
    pub primitives: Vec<Primitive>,
}

fn pt2(p: (i64, i64)) -> R<(Dim, Dim)> {
    Ok((d(p.0)?, d(p.1)?))
}

/// Appends the primitives of one arrow.
pub fn arrow_primitives(f: &GridFrame, g: &ArrowGeometry, out: &mut Vec<Primitive>) -> R<()> {
    let at = |x: Dim, y: Dim| f.to_page(g.src_cell, x, y);
    for piece in &g.shaft_pieces {
        match *piece {
            ShaftPiece::Rule { x0, y0, x1, y1 } => {
                let (px, py) = at(x0, y1);
                out.push(Primitive::Rule { x: d(px)?, y: d(py)?, w: x1.try_sub(x0)?, h: y1.try_sub(y0)? });
            }
            ShaftPiece::Line { from, to } => {
                let (a, b) = (at(from.x, from.y), at(to.x, to.y));
                out.push(Primitive::Stroke { x0: d(a.0)?, y0: d(a.1)?, x1: d(b.0)?, y1: d(b.1)? });
            }
        }
    }
    for dec in &g.decorations {
        out.push(Primitive::Glyph {
            role: dec.role,
            code: dec.code,
            slot: dec.slot,
            tip: pt2(at(dec.tip.x, dec.tip.y))?,
            dir: (dec.outward.0, -dec.outward.1),
            second: dec.extra.map(|p| pt2(at(p.x, p.y))).transpose()?,
        });
    }
    for l in &g.labels {
        let (x, y) = at(l.at.x, l.at.y);
        out.push(Primitive::Text {
            x: d(x)?,
            y: d(y)?,
            text: l.text.clone(),
            size: l.size,
            width: l.extent.width,
            height: l.extent.height,
            depth: l.extent.depth,
        });
    }
    Ok(())
}

/// Natural width of an `\East`/`\West` arrow.
pub fn inline_width(a: &InlineArrow, u: &UnitRegistry, m: &dyn TextMetricsProvider) -> Dim {
    let pad = thick_space(u, TextSize::Script).sp() as i64 * 3;
    let up = m.measure(&a.upper, TextSize::Script).width.sp() as i64 + pad;
    let low = m.measure(&a.lower, TextSize::Script).width.sp() as i64 + pad;
    let w = (u.min_ext_arrow.sp() as i64).max(up).max(low);
    Dim::from_sp(w).unwrap_or(u.min_ext_arrow)
}

/// Lays out one inline arrow with its top edge at `top`; returns the bottom.
fn inline_primitives(
    a: &InlineArrow,
    top: i64,
    u: &UnitRegistry,
    m: &dyn TextMetricsProvider,
    out: &mut Vec<Primitive>,
) -> R<(i64, i64)> {
    let w = inline_width(a, u, m).sp() as i64;
    let axis = u.mathaxis.sp() as i64;
    let half_rule = 13107;
    let gap = u.label_pad.sp() as i64;
    let thick = thick_space(u, TextSize::Script).sp() as i64;
    let up = m.measure(&a.upper, TextSize::Script);
    let above = axis + half_rule + gap + up.height.sp() as i64 + up.depth.sp() as i64;
    let baseline = top + above;
    let show_lower = m.measure(&a.lower, TextSize::Text).width.sp() > 0;
    let low = m.measure(&a.lower, TextSize::Script);
    let below = if show_lower {
        (low.height.sp() as i64 + low.depth.sp() as i64 + gap + half_rule - axis).max(0)
    } else {
        0
    };
    let y_axis = baseline - axis;
    out.push(Primitive::Rule { x: Dim::ZERO, y: d(y_axis - half_rule)?, w: d(w)?, h: d(2 * half_rule)? });
    let (tip, dir, slot) = match a.direction {
        InlineDirection::East => (w, (1, 0), GlyphSlot { family: 1, code: 119 }),
        InlineDirection::West => (0, (-1, 0), GlyphSlot { family: 2, code: 117 }),
    };
    out.push(Primitive::Glyph {
        role: Role::Target,
        code: DecorCode::Default,
        slot,
        tip: (d(tip)?, d(y_axis)?),
        dir,
        second: None,
    });
    // label boxes carry the thick spaces: one before and two after for
    // East, mirrored for West
    let lead = match a.direction {
        InlineDirection::East => thick,
        InlineDirection::West => 2 * thick,
    };
    let mut label = |text: &str, b: crate::metrics::CellBox, y: i64| -> R<()> {
        let boxw = b.width.sp() as i64 + 3 * thick;
        out.push(Primitive::Text {
            x: d(fil_half(w - boxw) + lead)?,
            y: d(y)?,
            text: text.to_string(),
            size: TextSize::Script,
            width: b.width,
            height: b.height,
            depth: b.depth,
        });
        Ok(())
    };
    if !a.upper.is_empty() {
        label(&a.upper, up, y_axis - half_rule - gap - up.depth.sp() as i64)?;
    }
    if show_lower {
        label(&a.lower, low, y_axis + half_rule + gap + low.height.sp() as i64)?;
    }
    Ok((baseline + below, w))
}

/// Places every cell, arrow and inline arrow of a document.
pub fn assemble(
    diagram: Option<&Diagram>,
    inline: &[InlineArrow],
    t: Option<&MetricsTables>,
    geoms: &[ArrowGeometry],
    u: &UnitRegistry,
    m: &dyn TextMetricsProvider,
) -> R<Scene> {
    let mut s = Scene::default();
    let mut bottom = 0;
    if let (Some(dg), Some(t)) = (diagram, t) {
        let f = GridFrame::new(t)?;
        for (ri, row) in dg.rows.iter().enumerate() {
            for (ci, cell) in row.iter().enumerate() {
                let (r, c) = (ri + 1, ci + 1);
                let b = t.cell(r, c);
                if b.width.is_zero() {
                    continue;
                }
                let free = t.colwidth(c).sp() as i64 - b.width.sp() as i64;
                let ink = m.measure(&cell.content, TextSize::Text);
                s.primitives.push(Primitive::Text {
                    x: d(f.col_left(c).sp() as i64 + fil_half(free))?,
                    y: f.row_baseline(r),
                    text: cell.content.trim().to_string(),
                    size: TextSize::Text,
                    width: ink.width,
                    height: ink.height,
                    depth: ink.depth,
                });
            }
        }
        for g in geoms {
            arrow_primitives(&f, g, &mut s.primitives)?;
        }
        s.width = f.total_width;
        bottom = f.total_height.sp() as i64;
    }
    let mut width = s.width.sp() as i64;
    for a in inline {
        let (b, w) = inline_primitives(a, bottom, u, m, &mut s.primitives)?;
        bottom = b;
        width = width.max(w);
    }
    s.width = d(width)?;
    s.height = d(bottom)?;
    Ok(s)
}

/// [`assemble`] for a parsed document.
pub fn assemble_document(
    doc: &Document,
    t: Option<&MetricsTables>,
    geoms: &[ArrowGeometry],
    u: &UnitRegistry,
    m: &dyn TextMetricsProvider,
) -> R<Scene> {
    assemble(doc.diagram.as_ref(), &doc.inline_arrows, t, geoms, u, m)
}
