//! Arrow geometry: endpoints, option pipeline, and the abstract pieces
//! (shaft, decorations, labels) the scene is built from.
//!
//! Coordinates are relative to the source cell: x from the center of its
//! column slot, y from its baseline, x rightward and y upward.

mod slanted;
mod slots;
mod straight;

use std::fmt;

use thiserror::Error;

use crate::ast::{ArrowOptions, ArrowSpec, DecorCode, Role, ShaftStyle, SourcePos};
use crate::fixdim::{Dim, DimError, Factor};
use crate::metrics::{CellBox, MetricsTables, TextMetricsProvider, TextSize};
use crate::slope::{getcos, quantize_sp, shift_index, QuantSlope};

pub use slanted::tile_shaft;
pub use slots::{decoration_slots, slanted_slots, SlantedSlots};

pub(crate) const PT: i64 = 65536;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LayoutErrorKind {
    #[error("This arrow points outside the \\CD")]
    ArrowOutsideGrid,
    #[error("arrow @(0,0) has no direction")]
    DegenerateArrow,
    #[error("{0}")]
    Dimension(#[from] DimError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct LayoutError {
    pub pos: SourcePos,
    pub kind: LayoutErrorKind,
}

pub type LayoutResult<T> = Result<T, LayoutErrorKind>;

/// Checked conversion of an intermediate back into a dimension.
pub(crate) fn dim(v: i64) -> LayoutResult<Dim> {
    Ok(Dim::from_sp(v)?)
}

/// `f` times `v` the way TeX scales a register by a decimal.
pub(crate) fn scale(v: i64, f: Factor) -> i64 {
    let mag = (v as i128).abs() * f.numerator() as i128 / 65536;
    let neg = (v < 0) != f.is_negative();
    (if neg { -mag } else { mag }) as i64
}

/// `\multiply` then `\divide`: truncates toward zero.
pub(crate) fn muldiv(v: i64, m: i64, n: i64) -> i64 {
    (v as i128 * m as i128 / n as i128) as i64
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Dim,
    pub y: Dim,
}

impl Point {
    pub(crate) fn sp(x: i64, y: i64) -> LayoutResult<Point> {
        Ok(Point { x: dim(x)?, y: dim(y)? })
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x.sp(), self.y.sp())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct QuadrantFlags {
    /// Target above the source.
    pub n: bool,
    /// Target right of the source.
    pub e: bool,
    /// Horizontal: yoff = 0.
    pub h: bool,
    /// Vertical: xoff = 0.
    pub v: bool,
    pub nesw: bool,
    pub hshort: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ArrowKind {
    Horizontal,
    Vertical,
    Slanted,
}

/// One piece of shaft ink.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShaftPiece {
    /// Filled axis-aligned rectangle with corners (x0, y0) < (x1, y1).
    Rule { x0: Dim, y0: Dim, x1: Dim, y1: Dim },
    /// A 0.4pt stroke.
    Line { from: Point, to: Point },
}

/// (font family 1..5, character code) of a decoration glyph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GlyphSlot {
    pub family: u8,
    pub code: u16,
}

impl fmt::Display for GlyphSlot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family, self.code)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecorPlacement {
    pub role: Role,
    pub code: DecorCode,
    pub slot: GlyphSlot,
    /// Where the decoration meets the shaft end.
    pub tip: Point,
    /// Direction pointing away from the shaft, as a (dx, dy) pair.
    pub outward: (i64, i64),
    /// Slanted arrows: left edge and baseline of the font cell.
    pub cell: Option<Point>,
    /// Tip of the second copy of a double head.
    pub extra: Option<Point>,
    pub extra_cell: Option<Point>,
}

/// One font cell of a slanted shaft: left edge and baseline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TilePlacement {
    pub x: Dim,
    pub raise: Dim,
    pub partial: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LabelWhich {
    Upper,
    Lower,
}

/// Which way the label box hangs from its reference point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
    Centered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelPlacement {
    pub which: LabelWhich,
    pub text: String,
    pub size: TextSize,
    pub side: Side,
    /// Left end of the text baseline.
    pub at: Point,
    pub extent: CellBox,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowGeometry {
    pub src_cell: (usize, usize),
    pub tgt_cell: (usize, usize),
    pub flags: QuadrantFlags,
    pub kind: ArrowKind,
    pub first: Point,
    pub second: Point,
    pub slope: Option<QuantSlope>,
    pub shaft: ShaftStyle,
    pub p_offset: Dim,
    pub source_vertex: bool,
    pub target_vertex: bool,
    /// Slanted only: (charwd, charht) of one shaft tile.
    pub tile_size: Option<(Dim, Dim)>,
    pub shaft_pieces: Vec<ShaftPiece>,
    pub decorations: Vec<DecorPlacement>,
    pub labels: Vec<LabelPlacement>,
    pub tiles: Vec<TilePlacement>,
}

/// Register state shared by the three drawing back ends.
#[derive(Clone, Debug)]
pub(crate) struct Regs {
    pub fl: QuadrantFlags,
    pub fx: i64,
    pub fy: i64,
    pub sx: i64,
    pub sy: i64,
    pub slope: Option<QuantSlope>,
    pub charwd: i64,
    pub charht: i64,
    pub p: i64,
    pub scode: i32,
    pub tcode: i32,
}

fn sign(b: bool) -> i64 {
    if b {
        1
    } else {
        -1
    }
}

/// Lays out one arrow of the measured diagram.
pub fn layout_arrow(
    spec: &ArrowSpec,
    t: &MetricsTables,
    m: &dyn TextMetricsProvider,
) -> Result<ArrowGeometry, LayoutError> {
    layout(spec, t, m).map_err(|kind| LayoutError { pos: spec.pos, kind })
}

fn layout(spec: &ArrowSpec, t: &MetricsTables, m: &dyn TextMetricsProvider) -> LayoutResult<ArrowGeometry> {
    let o = &spec.options;
    let u = &t.units;
    let (row, col) = spec.cell;
    let (xoff, yoff) = (spec.xoff as i64, spec.yoff as i64);
    if xoff == 0 && yoff == 0 {
        return Err(LayoutErrorKind::DegenerateArrow);
    }
    let trow = row as i64 - yoff;
    let tcol = col as i64 + xoff;
    if trow < 1 || trow > t.rows as i64 || tcol < 1 || tcol > t.cols as i64 {
        return Err(LayoutErrorKind::ArrowOutsideGrid);
    }
    let (trow, tcol) = (trow as usize, tcol as usize);

    let e = xoff > 0;
    let v = xoff == 0;
    let n = yoff > 0;
    let h = yoff == 0;
    let mut fl = QuadrantFlags { n, e, h, v, nesw: n == e, hshort: o.short && h };
    // shifts and slope steering only make sense for slanted arrows
    let (dt_x, dt_y, da) = if h || v { (None, None, None) } else { (o.dt_x, o.dt_y, o.da) };

    let cw = |c: usize| t.colwidth(c).sp() as i64;
    let cgap = |c: usize| t.cgap(c).sp() as i64;
    let rgap = |r: usize| t.rgap(r).sp() as i64;
    let rh = |r: usize| t.rowheight(r).sp() as i64;
    let rd = |r: usize| t.rowdepth(r).sp() as i64;
    let cell = |r: usize, c: usize| t.cell(r, c);
    let es = sign(e);
    let ns = sign(n);
    let pad = u.pad.sp() as i64;
    let mathaxis = u.mathaxis.sp() as i64;

    // source point
    let half = cell(row, col).width.sp() as i64 / 2;
    let svertex = half == 0;
    let (mut fx, mut fy);
    if svertex {
        fx = 0;
        fy = mathaxis;
    } else {
        let base = if fl.hshort { cw(col) / 2 } else { half };
        fx = es * base;
        // outward past the cell for horizontal arrows, inward otherwise
        fx += if h { es * pad } else { -es * pad };
        let src = cell(row, col);
        fy = if n {
            src.height.sp() as i64 + if v { pad } else { 0 }
        } else if v {
            -(src.depth.sp() as i64) - pad
        } else {
            0
        };
    }

    // target x
    let mut sx = 0;
    let mut tvertex = false;
    if !v {
        sx = es * (cw(col) / 2);
        if !e {
            sx -= cgap(col);
        }
        if e {
            for c in col + 1..tcol {
                sx += cw(c) + cgap(c);
            }
        } else {
            for c in (tcol + 1..col).rev() {
                sx -= cw(c) + cgap(c);
            }
        }
        if !fl.hshort {
            sx += es * (cw(tcol) / 2);
        }
        if e {
            sx += cgap(tcol);
        }
        let tw = cell(trow, tcol).width.sp() as i64 / 2;
        if h && tw == 0 {
            tvertex = true;
            fl.hshort = false;
        }
        if !fl.hshort {
            sx -= es * tw;
        }
        if tvertex {
            sx += u.vertex_nudge.sp() as i64;
        } else {
            sx -= es * pad;
        }
    }

    // target y
    let mut sy = 0;
    if !h {
        sy = if n { rh(row) } else { -rd(row) - rgap(row) };
        if n {
            for r in (trow + 1..row).rev() {
                sy += rh(r) + rd(r) + rgap(r);
            }
        } else {
            for r in row + 1..trow {
                sy -= rh(r) + rd(r) + rgap(r);
            }
        }
        if v && cell(trow, col).width.is_zero() {
            tvertex = true;
        }
        let tgt = cell(trow, tcol);
        if n {
            sy += rgap(trow) + rd(trow);
            if tvertex {
                sy += mathaxis;
            } else {
                sy -= tgt.depth.sp() as i64 + pad;
            }
        } else {
            sy -= rh(trow);
            if tvertex {
                sy += mathaxis;
            } else {
                sy += tgt.height.sp() as i64 + pad;
            }
        }
    }

    // option pipeline
    let hunit = u.hunit.sp() as i64;
    let vunit = u.vunit.sp() as i64;
    if let Some((a, b)) = o.ds {
        if !v {
            fx += scale(hunit, a);
        }
        if !h {
            fy += scale(vunit, b);
        }
    }
    let quant = |fx: i64, fy: i64, sx: i64, sy: i64| quantize_sp(ns * (sy - fy), es * (sx - fx));
    let line_y = |s: QuantSlope, fx: i64, fy: i64, sx: i64| fy + muldiv((sx - fx) * sign(fl.nesw), s.num, s.den);
    let mut slope = None;
    if let Some((a, b)) = dt_x {
        sy += scale(vunit, b);
        sx += scale(hunit, a);
        slope = Some(quant(fx, fy, sx, sy));
    } else if let Some((a, b)) = dt_y {
        sy += scale(vunit, b);
        sx += scale(hunit, a);
        let s = quant(fx, fy, sx, sy);
        sy = line_y(s, fx, fy, sx);
        slope = Some(s);
    } else if let Some(k) = da {
        let s = shift_index(quant(fx, fy, sx, sy), k, fl.nesw);
        if let Some(f) = o.dy_target {
            sy += scale(vunit, f);
        } else if let Some(f) = o.dx_target {
            sx += scale(hunit, f);
            sy = line_y(s, fx, fy, sx);
        }
        slope = Some(s);
    } else if !h && !v {
        slope = Some(quant(fx, fy, sx, sy));
    }

    let slanted = !h && !v;
    let s = slope.unwrap_or(QuantSlope { num: 1, den: 1, index: 12 });
    if slanted && !svertex {
        // step off the source box along the slope
        let d = 6 * PT * s.den / (s.num + s.den);
        fx += es * d;
        fy += ns * muldiv(d, s.num, s.den);
    }
    let p = o.p.map_or(0, |f| scale(hunit / 2, f));
    if slanted && o.p.is_some() {
        let (main, cross) = getcos(dim(p)?, s);
        fy += main.sp() as i64;
        sy += main.sp() as i64;
        fx += if fl.nesw { -(cross.sp() as i64) } else { cross.sp() as i64 };
    }

    let scode = o.src_decor.code(Role::Source);
    let tcode = o.tgt_decor.code(Role::Target);
    let (mut charwd, mut charht) = (0, 0);
    if slanted {
        let ten = u.tile.sp() as i64;
        if s.num > s.den {
            charht = ten;
            charwd = ten * s.den / s.num;
        } else {
            charwd = ten;
            charht = ten / s.den * s.num;
        }
        let three_tenths: Factor = "0.3".parse().expect("constant");
        if tcode == 3 {
            sy -= ns * scale(charht, three_tenths);
        }
        if scode == 2 {
            fx += es * scale(charht, three_tenths);
        }
        if tcode == 12 {
            sy -= ns * charht;
        }
        let keep_x = dt_y.is_some() || (da.is_some() && o.dx_target.is_some());
        if !keep_x {
            sx = fx + muldiv((sy - fy) * sign(fl.nesw), s.den, s.num);
        }
    }

    let regs = Regs { fl, fx, fy, sx, sy, slope, charwd, charht, p, scode, tcode };
    let mut g = ArrowGeometry {
        src_cell: (row, col),
        tgt_cell: (trow, tcol),
        flags: fl,
        kind: if h {
            ArrowKind::Horizontal
        } else if v {
            ArrowKind::Vertical
        } else {
            ArrowKind::Slanted
        },
        first: Point::default(),
        second: Point::default(),
        slope,
        shaft: o.shaft(),
        p_offset: dim(p)?,
        source_vertex: svertex,
        target_vertex: tvertex,
        tile_size: if slanted { Some((dim(charwd)?, dim(charht)?)) } else { None },
        shaft_pieces: Vec::new(),
        decorations: Vec::new(),
        labels: Vec::new(),
        tiles: Vec::new(),
    };
    match g.kind {
        ArrowKind::Horizontal => straight::horizontal(&mut g, &regs, o, t, m)?,
        ArrowKind::Vertical => straight::vertical(&mut g, &regs, o, t, m)?,
        ArrowKind::Slanted => slanted::slanted(&mut g, &regs, o, t, m)?,
    }
    Ok(g)
}

/// Labels of an already laid out arrow.
pub fn place_labels(
    spec: &ArrowSpec,
    t: &MetricsTables,
    m: &dyn TextMetricsProvider,
) -> Result<Vec<LabelPlacement>, LayoutError> {
    Ok(layout_arrow(spec, t, m)?.labels)
}

/// Size a label is set in: full size over an invisible shaft.
pub(crate) fn upper_size(o: &ArrowOptions) -> TextSize {
    if o.shaft() == ShaftStyle::Invisible {
        TextSize::Text
    } else {
        TextSize::Script
    }
}

/// Share of `free` that the first of two `fil` glues receives.
pub fn fil_half(free: i64) -> i64 {
    if free > 0 {
        (free + 1) / 2
    } else {
        0
    }
}
