//! Horizontal and vertical arrows.

use crate::ast::{ArrowOptions, Role, ShaftStyle};
use crate::metrics::{MetricsTables, TextMetricsProvider, TextSize};

use super::slots::{straight_end, straight_slot, End};
use super::*;

/// On-intervals of one 10pt broken cell, measured from its start. The gaps
/// are the `fil` glue of the leader box after TeX's cumulative rounding.
const H_DASHES: [(i64, i64); 3] = [(0, 109227), (218453, 436907), (546133, 655360)];
/// Same for the vertical cell: 1.67pt, 3.33pt and 1.67pt rules.
const V_DASHES: [(i64, i64); 3] = [(0, 109445), (218563, 436798), (545915, 655360)];

const RULE: i64 = 26214; // 0.4pt
const HALF_RULE: i64 = 13107;

fn rule(x0: i64, y0: i64, x1: i64, y1: i64) -> LayoutResult<ShaftPiece> {
    Ok(ShaftPiece::Rule { x0: dim(x0)?, y0: dim(y0)?, x1: dim(x1)?, y1: dim(y1)? })
}

/// Whole leader cells of `cell` in `len`, and the centering offset.
fn cleaders(len: i64, cell: i64) -> (i64, i64) {
    if len <= 0 {
        return (0, 0);
    }
    (len / cell, len % cell / 2)
}

fn decor(
    role: Role,
    code: i32,
    o: &ArrowOptions,
    fl: &QuadrantFlags,
    tip: (i64, i64),
    outward: (i64, i64),
    sep: i64,
) -> LayoutResult<Option<DecorPlacement>> {
    let Some(slot) = straight_slot(role, code, straight_end(role, fl)) else {
        return Ok(None);
    };
    let extra = if code == 13 {
        // second head one separation further in
        Some(Point::sp(tip.0 - outward.0 * sep, tip.1 - outward.1 * sep)?)
    } else {
        None
    };
    Ok(Some(DecorPlacement {
        role,
        code: match role {
            Role::Source => o.src_decor,
            Role::Target => o.tgt_decor,
        },
        slot,
        tip: Point::sp(tip.0, tip.1)?,
        outward,
        cell: None,
        extra,
        extra_cell: None,
    }))
}

pub(crate) fn horizontal(
    g: &mut ArrowGeometry,
    r: &Regs,
    o: &ArrowOptions,
    t: &MetricsTables,
    m: &dyn TextMetricsProvider,
) -> LayoutResult<()> {
    let u = &t.units;
    let fl = &r.fl;
    let hunit = u.hunit.sp() as i64;
    let mathaxis = u.mathaxis.sp() as i64;
    let axis = mathaxis + r.p;
    g.first = Point::sp(r.fx, axis)?;
    g.second = Point::sp(r.sx, axis)?;

    let xd = o.dx.map_or(0, |f| scale(hunit, f));
    let big_xd = o.dx_target.map_or(0, |f| scale(hunit, f));
    // both adjustments move their end eastward
    let (src_end, tgt_end) = (r.fx + xd, r.sx + big_xd);
    let (left, right) = if fl.e { (src_end, tgt_end) } else { (tgt_end, src_end) };
    let len = right - left;
    let ten = u.tile.sp() as i64;
    match g.shaft {
        ShaftStyle::Invisible => {}
        ShaftStyle::Solid => {
            if len > 0 {
                g.shaft_pieces.push(rule(left, axis - HALF_RULE, right, axis + HALF_RULE)?);
            }
        }
        ShaftStyle::Broken => {
            let (cells, off) = cleaders(len, ten);
            for i in 0..cells {
                let x = left + off + i * ten;
                for (a, b) in H_DASHES {
                    g.shaft_pieces.push(rule(x + a, axis - HALF_RULE, x + b, axis + HALF_RULE)?);
                }
            }
        }
        ShaftStyle::Double => {
            let (cells, off) = cleaders(len, ten);
            if cells > 0 {
                let (x0, x1) = (left + off, left + off + cells * ten);
                let d = |pt10: i64| pt10 * PT / 10;
                g.shaft_pieces.push(rule(x0, axis + d(8), x1, axis + d(12))?);
                g.shaft_pieces.push(rule(x0, axis - d(16), x1, axis - d(12))?);
            }
        }
    }

    if !matches!(g.shaft, ShaftStyle::Invisible | ShaftStyle::Double) {
        let sep = u.doublehead_sep.sp() as i64;
        let ends = [(Role::Source, r.scode, src_end), (Role::Target, r.tcode, tgt_end)];
        for (role, code, x) in ends {
            let out = if straight_end(role, fl) == End::West { (-1, 0) } else { (1, 0) };
            if let Some(d) = decor(role, code, o, fl, (x, axis), out, sep)? {
                g.decorations.push(d);
            }
        }
    }

    // labels share the arrow's box: [lead][2dL][hfil][label][hfil][trail]
    let span = (r.sx - r.fx).abs();
    let box_left = if fl.e { r.fx } else { r.sx };
    let (lead, trail) = if fl.e { (xd, -big_xd) } else { (big_xd, -xd) };
    let double_extra = if g.shaft == ShaftStyle::Double { 2 * PT } else { 0 };
    let gap = u.label_pad.sp() as i64;
    let place = |which, text: &str, size, dl: i64, y: &dyn Fn(&crate::metrics::CellBox) -> i64| {
        let b = m.measure(text, size);
        let w = b.width.sp() as i64;
        let free = span - (lead + 2 * dl + w + trail);
        let x = box_left + lead + 2 * dl + fil_half(free);
        Ok::<_, LayoutErrorKind>(LabelPlacement {
            which,
            text: text.to_string(),
            size,
            side: Side::Centered,
            at: Point::sp(x, y(&b))?,
            extent: b,
        })
    };
    let invisible = g.shaft == ShaftStyle::Invisible;
    if let Some(text) = &o.label_upper {
        let dl = o.dl_upper.map_or(0, |f| scale(hunit, f));
        let y = |b: &crate::metrics::CellBox| {
            let base = if invisible { 0 } else { mathaxis + b.depth.sp() as i64 + gap + double_extra };
            base + r.p
        };
        g.labels.push(place(LabelWhich::Upper, text, upper_size(o), dl, &y)?);
    }
    if let (Some(text), false) = (&o.label_lower, invisible) {
        let dl = o.dl_lower.map_or(0, |f| scale(hunit, f));
        let y = |b: &crate::metrics::CellBox| -(b.height.sp() as i64) - gap - double_extra + mathaxis + r.p;
        g.labels.push(place(LabelWhich::Lower, text, TextSize::Script, dl, &y)?);
    }
    Ok(())
}

pub(crate) fn vertical(
    g: &mut ArrowGeometry,
    r: &Regs,
    o: &ArrowOptions,
    t: &MetricsTables,
    m: &dyn TextMetricsProvider,
) -> LayoutResult<()> {
    let u = &t.units;
    let fl = &r.fl;
    let vunit = u.vunit.sp() as i64;
    let hunit = u.hunit.sp() as i64;
    let x = r.p;
    g.first = Point::sp(x, r.fy)?;
    g.second = Point::sp(x, r.sy)?;

    let span = if fl.n { r.sy - r.fy } else { r.fy - r.sy };
    let bottom = if fl.n { r.fy } else { r.fy - span };
    let top = bottom + span;
    let yd = o.dy.map_or(0, |f| scale(vunit, f));
    let big_yd = o.dy_target.map_or(0, |f| scale(vunit, f));
    // \dy pulls the source end toward the target, \dY pushes the target out
    let (shaft_top, shaft_bottom) = if fl.n { (top + big_yd, bottom + yd) } else { (top - yd, bottom - big_yd) };
    let len = shaft_top - shaft_bottom;
    match g.shaft {
        ShaftStyle::Invisible => {}
        ShaftStyle::Solid => {
            if len > 0 {
                g.shaft_pieces.push(rule(x, shaft_bottom, x + RULE, shaft_top)?);
            }
        }
        ShaftStyle::Broken => {
            let ten = u.tile.sp() as i64;
            let (cells, off) = cleaders(len, ten);
            for i in 0..cells {
                let y = shaft_top - off - i * ten;
                for (a, b) in V_DASHES {
                    g.shaft_pieces.push(rule(x, y - b, x + RULE, y - a)?);
                }
            }
        }
        ShaftStyle::Double => {
            let (cells, off) = cleaders(len, PT);
            if cells > 0 {
                let (y1, y0) = (shaft_top - off, shaft_top - off - cells * PT);
                g.shaft_pieces.push(rule(x, y0, x + RULE, y1)?);
                g.shaft_pieces.push(rule(x + 2 * PT + RULE, y0, x + 2 * PT + 2 * RULE, y1)?);
            }
        }
    }

    if !matches!(g.shaft, ShaftStyle::Invisible | ShaftStyle::Double) {
        let sep = u.doublehead_sep.sp() as i64;
        for (role, code) in [(Role::Source, r.scode), (Role::Target, r.tcode)] {
            let (y, out) = if straight_end(role, fl) == End::Top { (shaft_top, (0, 1)) } else { (shaft_bottom, (0, -1)) };
            if let Some(d) = decor(role, code, o, fl, (x + HALF_RULE, y), out, sep)? {
                g.decorations.push(d);
            }
        }
    }

    // labels: vbox to span {vfil, label, vskip 2dL, vfil}
    let baseline = |b: &crate::metrics::CellBox, dl: i64| {
        let (ht, dp) = (b.height.sp() as i64, b.depth.sp() as i64);
        let free = span - (ht + dp + 2 * dl);
        top - fil_half(free) - ht
    };
    let invisible = g.shaft == ShaftStyle::Invisible;
    if let Some(text) = &o.label_upper {
        let size = upper_size(o);
        let b = m.measure(text, size);
        let dl = o.dl_upper.map_or(0, |f| scale(hunit, f));
        let w = b.width.sp() as i64;
        let (left, side) = if invisible {
            (x - w / 2, Side::Centered)
        } else {
            (x - u.label_pad.sp() as i64 - w, Side::Left)
        };
        g.labels.push(LabelPlacement {
            which: LabelWhich::Upper,
            text: text.clone(),
            size,
            side,
            at: Point::sp(left, baseline(&b, dl))?,
            extent: b,
        });
    }
    if let (Some(text), false) = (&o.label_lower, invisible) {
        let b = m.measure(text, TextSize::Script);
        let dl = o.dl_lower.map_or(0, |f| scale(hunit, f));
        let gap = if g.shaft == ShaftStyle::Double { 9 * PT / 2 } else { 5 * PT / 2 };
        g.labels.push(LabelPlacement {
            which: LabelWhich::Lower,
            text: text.clone(),
            size: TextSize::Script,
            side: Side::Right,
            at: Point::sp(x + gap, baseline(&b, dl))?,
            extent: b,
        });
    }
    Ok(())
}
