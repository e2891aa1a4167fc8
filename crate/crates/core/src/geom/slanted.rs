//! Slanted arrows, built the way the font-based original builds them: a
//! row of glyph tiles laid along the slope, one partial tile at the end,
//! and decoration glyphs of the same cell size at either end.

use crate::ast::{ArrowOptions, Role, ShaftStyle};
use crate::fixdim::Factor;
use crate::metrics::{CellBox, MetricsTables, TextMetricsProvider, TextSize};
use crate::slope::{getcos, QuantSlope};

use super::slots::slanted_slots;
use super::*;

/// Cursor state of the emulated horizontal list.
struct Emu<'a> {
    r: &'a Regs,
    s: QuantSlope,
    cursor: i64,
    shifted: i64,
    goal: i64,
    adjust: i64,
    tiles: Vec<(i64, i64, bool)>,
    src: Vec<(i64, i64)>,
    tgt: Vec<(i64, i64)>,
}

impl Emu<'_> {
    /// `\raise` for north arrows, `\lower` otherwise.
    fn y(&self, v: i64) -> i64 {
        if self.r.fl.n {
            v
        } else {
            -v
        }
    }

    fn along(&self) -> (i64, i64) {
        let (main, cross) = getcos(Dim::from_sp_const(3 * PT as i32), self.s);
        (main.sp() as i64, cross.sp() as i64)
    }

    /// Source decoration. `w` is the decoration glyph width.
    fn source(&mut self, scode: i32, w: i64) {
        let n = self.r.fl.n;
        let charht = self.r.charht;
        if self.r.fl.nesw {
            if scode == 2 {
                let d = self.shifted - charht;
                if n {
                    self.cursor -= w;
                }
                self.src.push((self.cursor, self.y(d)));
                self.cursor += w;
                if !n {
                    self.cursor -= w;
                }
            } else {
                if !n {
                    self.cursor -= w;
                }
                self.src.push((self.cursor, self.y(self.shifted)));
                self.cursor += w;
                if n {
                    self.cursor -= w;
                }
            }
            if scode == 12 {
                self.shifted += charht;
                self.goal -= charht;
                self.cursor += if n { w } else { -w };
            }
            if scode == 13 {
                let (main, cross) = self.along();
                if n {
                    self.cursor += main;
                } else {
                    self.cursor -= w + main;
                }
                self.adjust = self.shifted + cross;
                self.src.push((self.cursor, self.y(self.adjust)));
                self.cursor += w;
                if n {
                    self.cursor -= main + w;
                } else {
                    self.cursor += main;
                }
            }
        } else {
            if n {
                self.cursor -= w;
            }
            if scode == 2 {
                self.cursor += if n { w } else { -w };
                let d = self.shifted - charht;
                self.src.push((self.cursor, self.y(d)));
                self.cursor += w;
                if n {
                    self.cursor -= w;
                }
            } else {
                self.src.push((self.cursor, self.y(self.shifted)));
                self.cursor += w;
                if !n {
                    self.cursor -= w;
                }
            }
            if scode == 12 {
                self.shifted += charht;
                self.goal -= charht;
                self.cursor += if n { -w } else { w };
            }
            if scode == 13 {
                let (main, cross) = self.along();
                if n {
                    self.cursor -= w + main;
                } else {
                    self.cursor += main;
                }
                self.adjust = self.shifted + cross;
                self.src.push((self.cursor, self.y(self.adjust)));
                self.cursor += w;
                if n {
                    self.cursor += main;
                } else {
                    self.cursor -= main + w;
                }
            }
        }
    }

    fn shaft(&mut self) {
        let (e, charwd, charht) = (self.r.fl.e, self.r.charwd, self.r.charht);
        while self.goal > charht {
            if !e {
                self.cursor -= charwd;
            }
            self.tiles.push((self.cursor, self.y(self.shifted), false));
            self.cursor += charwd;
            if !e {
                self.cursor -= charwd;
            }
            self.shifted += charht;
            self.goal -= charht;
        }
        if self.goal > 0 {
            let d = (charht - self.goal) / self.s.num * self.s.den;
            if e {
                self.cursor -= d;
            } else {
                self.cursor += d - charwd;
            }
            self.adjust = self.shifted - charht + self.goal;
            self.tiles.push((self.cursor, self.y(self.adjust), true));
            self.cursor += charwd;
            if !e {
                self.cursor -= charwd;
            }
        } else {
            self.adjust = self.shifted - charht;
        }
    }

    fn target(&mut self, tcode: i32, w: i64) {
        let (e, n) = (self.r.fl.e, self.r.fl.n);
        if tcode == 3 || tcode == 12 {
            self.adjust += self.r.charht;
            if !e {
                self.cursor -= if n { self.r.charwd } else { w };
            }
        } else if e {
            self.cursor -= w;
        }
        self.tgt.push((self.cursor, self.y(self.adjust)));
        self.cursor += w;
        if tcode == 13 {
            self.cursor -= w;
            let (main, cross) = self.along();
            self.cursor += if e { -main } else { main };
            self.adjust -= cross;
            self.tgt.push((self.cursor, self.y(self.adjust)));
        }
    }
}

/// Runs the tile and decoration cursor over one arrow.
fn emulate<'a>(r: &'a Regs, shaft: ShaftStyle) -> Emu<'a> {
    let s = r.slope.expect("slanted arrows carry a slope");
    let fl = &r.fl;
    let mut shifted = if fl.n { r.fy } else { -r.fy };
    if !fl.e {
        shifted += r.charht;
    }
    let goal = if fl.n { r.sy - r.fy } else { r.fy - r.sy };
    let mut emu =
        Emu { r, s, cursor: r.fx, shifted, goal, adjust: 0, tiles: Vec::new(), src: Vec::new(), tgt: Vec::new() };
    if shaft == ShaftStyle::Invisible {
        return emu;
    }
    let slots = slanted_slots(s.index, fl, r.scode, r.tcode, shaft);
    // decoration glyphs share the shaft cell
    let w = r.charwd;
    if slots.source.is_some() {
        emu.source(r.scode, w);
    }
    emu.shaft();
    if slots.target.is_some() {
        emu.target(r.tcode, w);
    }
    emu
}

/// Shaft tiles of a laid out slanted arrow; empty for straight arrows and
/// invisible shafts.
pub fn tile_shaft(g: &ArrowGeometry) -> Vec<TilePlacement> {
    let (Some(slope), Some((cw, ch))) = (g.slope, g.tile_size) else {
        return Vec::new();
    };
    let code = |role| {
        g.decorations
            .iter()
            .find(|d| d.role == role)
            .map_or(if role == Role::Source { 0 } else { -1 }, |d| d.code.code(role))
    };
    let r = Regs {
        fl: g.flags,
        fx: g.first.x.sp() as i64,
        fy: g.first.y.sp() as i64,
        sx: g.second.x.sp() as i64,
        sy: g.second.y.sp() as i64,
        slope: Some(slope),
        charwd: cw.sp() as i64,
        charht: ch.sp() as i64,
        p: g.p_offset.sp() as i64,
        scode: code(Role::Source),
        tcode: code(Role::Target),
    };
    to_tiles(&emulate(&r, g.shaft).tiles).unwrap_or_default()
}

fn to_tiles(raw: &[(i64, i64, bool)]) -> LayoutResult<Vec<TilePlacement>> {
    raw.iter().map(|&(x, y, partial)| Ok(TilePlacement { x: dim(x)?, raise: dim(y)?, partial })).collect()
}

fn line(from: (i64, i64), to: (i64, i64)) -> LayoutResult<ShaftPiece> {
    Ok(ShaftPiece::Line { from: Point::sp(from.0, from.1)?, to: Point::sp(to.0, to.1)? })
}

/// Ink of one tile glyph whose cell starts at `(x, y)`.
fn tile_ink(x: i64, y: i64, r: &Regs, shaft: ShaftStyle, out: &mut Vec<ShaftPiece>) -> LayoutResult<()> {
    let rise = if r.fl.nesw { r.charht } else { -r.charht };
    let (a, b) = ((x, y), (x + r.charwd, y + rise));
    match shaft {
        ShaftStyle::Broken => {
            let at = |k: i64| (a.0 + (b.0 - a.0) * k / 6, a.1 + (b.1 - a.1) * k / 6);
            for (k0, k1) in [(0, 1), (2, 4), (5, 6)] {
                out.push(line(at(k0), at(k1))?);
            }
        }
        _ => out.push(line(a, b)?),
    }
    Ok(())
}

pub(crate) fn slanted(
    g: &mut ArrowGeometry,
    r: &Regs,
    o: &ArrowOptions,
    t: &MetricsTables,
    m: &dyn TextMetricsProvider,
) -> LayoutResult<()> {
    let u = &t.units;
    let s = r.slope.expect("slanted arrows carry a slope");
    let fl = &r.fl;
    g.first = Point::sp(r.fx, r.fy)?;
    g.second = Point::sp(r.sx, r.sy)?;

    let emu = emulate(r, g.shaft);
    g.tiles = to_tiles(&emu.tiles)?;
    let offsets: Vec<(i64, i64)> = if g.shaft == ShaftStyle::Double {
        let (main, cross) = getcos(u.double_gap, s);
        let (main, cross) = (main.sp() as i64, cross.sp() as i64);
        if fl.nesw {
            vec![(cross, -main), (-cross, main)]
        } else {
            vec![(cross, main), (-cross, -main)]
        }
    } else {
        vec![(0, 0)]
    };
    for &(x, y, _) in &emu.tiles {
        for &(ox, oy) in &offsets {
            tile_ink(x + ox, y + oy, r, g.shaft, &mut g.shaft_pieces)?;
        }
    }

    let slots = slanted_slots(s.index, fl, r.scode, r.tcode, g.shaft);
    let travel = (if fl.e { s.den } else { -s.den }, if fl.n { s.num } else { -s.num });
    let rise = if fl.nesw { r.charht } else { -r.charht };
    // end of the cell diagonal that lies furthest along `out`
    let tip = |(x, y): (i64, i64), out: (i64, i64)| {
        let b = (x + r.charwd, y + rise);
        let dot = |p: (i64, i64)| p.0 as i128 * out.0 as i128 + p.1 as i128 * out.1 as i128;
        if dot(b) > dot((x, y)) {
            b
        } else {
            (x, y)
        }
    };
    let cells = [(Role::Source, slots.source, &emu.src), (Role::Target, slots.target, &emu.tgt)];
    for (role, ch, at) in cells {
        let (Some(ch), Some(&first)) = (ch, at.first()) else { continue };
        let out = if role == Role::Source { (-travel.0, -travel.1) } else { travel };
        let t0 = tip(first, out);
        let extra = at.get(1).copied();
        g.decorations.push(DecorPlacement {
            role,
            code: if role == Role::Source { o.src_decor } else { o.tgt_decor },
            slot: GlyphSlot { family: slots.decor_family, code: ch },
            tip: Point::sp(t0.0, t0.1)?,
            outward: out,
            cell: Some(Point::sp(first.0, first.1)?),
            extra: extra.map(|c| tip(c, out)).map(|p| Point::sp(p.0, p.1)).transpose()?,
            extra_cell: extra.map(|c| Point::sp(c.0, c.1)).transpose()?,
        });
    }

    labels(g, r, s, o, t, m)
}

fn labels(
    g: &mut ArrowGeometry,
    r: &Regs,
    s: QuantSlope,
    o: &ArrowOptions,
    t: &MetricsTables,
    m: &dyn TextMetricsProvider,
) -> LayoutResult<()> {
    let u = &t.units;
    let hunit = u.hunit.sp() as i64;
    let nesw = r.fl.nesw;
    let mid = ((r.fx + r.sx) / 2, (r.fy + r.sy) / 2);
    let pad = if g.shaft == ShaftStyle::Double { 2 * u.label_pad.sp() as i64 } else { u.label_pad.sp() as i64 };
    let half: Factor = "0.5".parse().expect("constant");
    let invisible = g.shaft == ShaftStyle::Invisible;
    let idx = s.index;

    if let Some(text) = &o.label_upper {
        let size = upper_size(o);
        let b: CellBox = m.measure(text, size);
        let (wd, ht, dp) = (b.width.sp() as i64, b.height.sp() as i64, b.depth.sp() as i64);
        let ldi = o.dl_upper.map_or(0, |f| scale(hunit, f));
        let mut x = mid.0 + ldi;
        let rise = muldiv(ldi, s.num, s.den);
        let mut y = if nesw { mid.1 + rise } else { mid.1 - rise };
        let box_wd = wd + pad;
        if invisible {
            let shift = scale(box_wd, half) + PT;
            x += if nesw { shift } else { -shift };
            y -= scale(ht, half);
        } else {
            y += dp;
            if idx < 6 {
                y += 2 * PT;
            }
        }
        // llap hangs the padded box left of x, rlap right of it
        let (left, side) = if nesw { (x - pad - wd, Side::Left) } else { (x + pad, Side::Right) };
        g.labels.push(LabelPlacement {
            which: LabelWhich::Upper,
            text: text.clone(),
            size,
            side,
            at: Point::sp(left, y)?,
            extent: b,
        });
    }
    if let (Some(text), false) = (&o.label_lower, invisible) {
        let b = m.measure(text, TextSize::Script);
        let (wd, ht) = (b.width.sp() as i64, b.height.sp() as i64);
        let ldii = o.dl_lower.map_or(0, |f| scale(hunit, f));
        let x = if nesw { mid.0 + ldii } else { mid.0 - ldii };
        let mut y = mid.1 + muldiv(ldii, s.num, s.den) - ht;
        if idx < 9 {
            y -= 3 * PT;
        }
        let (left, side) = if nesw { (x + pad, Side::Right) } else { (x - pad - wd, Side::Left) };
        g.labels.push(LabelPlacement {
            which: LabelWhich::Lower,
            text: text.clone(),
            size: TextSize::Script,
            side,
            at: Point::sp(left, y)?,
            extent: b,
        });
    }
    Ok(())
}

#[cfg(test)]
pub(super) fn test_tiles(r: &Regs) -> Vec<(i64, i64, bool)> {
    emulate(r, ShaftStyle::Solid).tiles
}
