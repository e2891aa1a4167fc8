//! Decoration glyph slots, as the arrow fonts number them.

use crate::ast::{DecorCode, Role, ShaftStyle};

use super::{ArrowKind, GlyphSlot, QuadrantFlags};

/// Character at the west (horizontal) or north (vertical) end of a straight
/// arrow, before the split-decoration special case.
fn near_char(role: Role, code: i32) -> Option<u16> {
    Some(match (role, code) {
        (Role::Source, 2) => 118,
        (Role::Source, 3) => 117,
        (Role::Source, 6) => 119,
        (Role::Source, 7) => 120,
        (Role::Source, 8) => 121,
        (Role::Source, 9) => 122,
        (Role::Target, 0 | 2) => 117,
        (Role::Target, 3) => 118,
        (Role::Target, 4) => 119,
        (Role::Target, 5) => 120,
        (Role::Target, 10) => 121,
        (Role::Target, 11) => 122,
        (_, 13) => 117,
        _ => return None,
    })
}

/// Which end of a straight arrow a role sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum End {
    West,
    East,
    Top,
    Bottom,
}

pub(crate) fn straight_end(role: Role, fl: &QuadrantFlags) -> End {
    let src = role == Role::Source;
    if fl.h {
        if src == fl.e {
            End::West
        } else {
            End::East
        }
    } else if src == fl.n {
        End::Bottom
    } else {
        End::Top
    }
}

/// Glyph of a horizontal or vertical arrow end; `None` when nothing is drawn.
pub(crate) fn straight_slot(role: Role, code: i32, end: End) -> Option<GlyphSlot> {
    if code == -1 || (role == Role::Source && code == 0) {
        return None;
    }
    let slot = |family, code| Some(GlyphSlot { family, code });
    match (end, code) {
        (End::West, 12) => slot(1, 125),
        (End::East, 12) => slot(1, 125),
        (End::Top | End::Bottom, 12) => slot(3, 123),
        (End::West, c) => near_char(role, c).and_then(|ch| slot(2, ch)),
        (End::East, c) => near_char(role, c).and_then(|ch| slot(1, ch + 2)),
        (End::Top, c) => near_char(role, c).and_then(|ch| slot(3, ch)),
        (End::Bottom, c) => near_char(role, c).and_then(|ch| slot(4, ch)),
    }
}

/// Font and character numbers of a slanted arrow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlantedSlots {
    pub family: u8,
    /// Shaft tile character, after the broken-shaft adjustment.
    pub shaft_char: u16,
    /// Family the decorations come from.
    pub decor_family: u8,
    pub source: Option<u16>,
    pub target: Option<u16>,
}

/// Slot arithmetic of a slanted arrow with table index `idx`.
pub fn slanted_slots(idx: u8, fl: &QuadrantFlags, scode: i32, tcode: i32, shaft: ShaftStyle) -> SlantedSlots {
    let idx = idx as i64;
    let (family, mut ang): (u8, i64) = if fl.nesw {
        if idx < 10 {
            (1, (idx - 1) * 13)
        } else if idx < 19 {
            (2, (idx - 10) * 13)
        } else {
            (3, (idx - 19) * 13)
        }
    } else if idx < 5 {
        (3, (idx - 1) * 13 + 65)
    } else if idx < 14 {
        (4, (idx - 5) * 13)
    } else if idx < 23 {
        (5, (idx - 14) * 13)
    } else {
        (1, 117)
    };
    let base = if ang == 117 { 115 } else { ang };
    let mut t = base;
    let mut s = base;
    if fl.e {
        t += if tcode == 0 || tcode == 13 { 2 } else { tcode as i64 };
        s += match scode {
            0 => 0,
            13 => 3,
            c => c as i64,
        };
    } else {
        t += match tcode {
            0 | 2 | 13 => 3,
            3 => 2,
            4 => 6,
            5 => 7,
            10 => 8,
            11 => 9,
            12 => 12,
            _ => 0,
        };
        s += match scode {
            2 => 3,
            3 => 2,
            6 => 4,
            7 => 5,
            8 => 10,
            9 => 11,
            12 => 12,
            13 => 2,
            _ => 0,
        };
    }
    if shaft == ShaftStyle::Broken {
        ang += 1;
    }
    // the steep non-NESW decorations live in family 5, except that a broken
    // shaft has already moved the character off 117
    let decor_family = if ang == 117 { 5 } else { family };
    let drawn = !matches!(shaft, ShaftStyle::Invisible | ShaftStyle::Double);
    SlantedSlots {
        family,
        shaft_char: ang as u16,
        decor_family,
        source: (drawn && scode != 0 && scode != -1).then_some(s as u16),
        target: (drawn && tcode != -1).then_some(t as u16),
    }
}

/// Glyph slot for one decoration, or `None` when it is not drawn.
/// `slope_index` is ignored for straight arrows.
pub fn decoration_slots(
    role: Role,
    code: DecorCode,
    fl: &QuadrantFlags,
    kind: ArrowKind,
    slope_index: u8,
    shaft: ShaftStyle,
) -> Option<GlyphSlot> {
    let c = code.code(role);
    if kind != ArrowKind::Slanted {
        if matches!(shaft, ShaftStyle::Invisible | ShaftStyle::Double) {
            return None;
        }
        return straight_slot(role, c, straight_end(role, fl));
    }
    let (sc, tc) = match role {
        Role::Source => (c, 0),
        Role::Target => (0, c),
    };
    let slots = slanted_slots(slope_index, fl, sc, tc, shaft);
    let ch = match role {
        Role::Source => slots.source,
        Role::Target => slots.target,
    }?;
    Some(GlyphSlot { family: slots.decor_family, code: ch })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags(n: bool, e: bool, h: bool, v: bool) -> QuadrantFlags {
        QuadrantFlags { n, e, h, v, nesw: n == e, hshort: false }
    }

    #[test]
    fn slanted_examples() {
        let ne = flags(true, true, false, false);
        let got = decoration_slots(Role::Target, DecorCode::Default, &ne, ArrowKind::Slanted, 7, ShaftStyle::Solid);
        assert_eq!(got, Some(GlyphSlot { family: 1, code: 80 }));
        assert_eq!(
            decoration_slots(Role::Target, DecorCode::Empty, &ne, ArrowKind::Slanted, 7, ShaftStyle::Solid),
            None
        );
        assert_eq!(
            decoration_slots(Role::Source, DecorCode::Default, &ne, ArrowKind::Slanted, 7, ShaftStyle::Solid),
            None
        );
    }

    #[test]
    fn steepest_non_nesw_uses_family_five_for_decorations() {
        let se = flags(false, true, false, false);
        let s = slanted_slots(23, &se, 0, 0, ShaftStyle::Solid);
        assert_eq!((s.family, s.shaft_char, s.decor_family, s.target), (1, 117, 5, Some(117)));
        let b = slanted_slots(23, &se, 0, 0, ShaftStyle::Broken);
        assert_eq!((b.shaft_char, b.decor_family), (118, 1));
    }

    #[test]
    fn west_offsets() {
        let nw = flags(true, false, false, false);
        // idx 5 non-NESW: family 4 base 0
        let s = slanted_slots(5, &nw, 13, 4, ShaftStyle::Solid);
        assert_eq!((s.family, s.source, s.target), (4, Some(2), Some(6)));
    }

    #[test]
    fn double_and_invisible_have_no_decorations() {
        let ne = flags(true, true, false, false);
        for sh in [ShaftStyle::Double, ShaftStyle::Invisible] {
            let s = slanted_slots(12, &ne, 3, 0, sh);
            assert_eq!((s.source, s.target), (None, None));
        }
    }

    #[test]
    fn horizontal_tables() {
        let east = flags(false, true, true, false);
        let west = flags(false, false, true, false);
        let h = |role, code: DecorCode, fl: &QuadrantFlags| {
            decoration_slots(role, code, fl, ArrowKind::Horizontal, 0, ShaftStyle::Solid)
        };
        assert_eq!(h(Role::Target, DecorCode::Default, &east), Some(GlyphSlot { family: 1, code: 119 }));
        assert_eq!(h(Role::Target, DecorCode::Default, &west), Some(GlyphSlot { family: 2, code: 117 }));
        assert_eq!(h(Role::Source, DecorCode::Tail, &east), Some(GlyphSlot { family: 2, code: 118 }));
        assert_eq!(h(Role::Source, DecorCode::Tail, &west), Some(GlyphSlot { family: 1, code: 120 }));
        assert_eq!(h(Role::Target, DecorCode::HookClose, &east), Some(GlyphSlot { family: 1, code: 124 }));
        assert_eq!(h(Role::Source, DecorCode::Split, &east), Some(GlyphSlot { family: 1, code: 125 }));
        assert_eq!(h(Role::Source, DecorCode::Default, &east), None);
    }

    #[test]
    fn vertical_tables() {
        let north = flags(true, false, false, true);
        let south = flags(false, false, false, true);
        let v = |role, code: DecorCode, fl: &QuadrantFlags| {
            decoration_slots(role, code, fl, ArrowKind::Vertical, 0, ShaftStyle::Broken)
        };
        assert_eq!(v(Role::Target, DecorCode::Default, &north), Some(GlyphSlot { family: 3, code: 117 }));
        assert_eq!(v(Role::Target, DecorCode::Default, &south), Some(GlyphSlot { family: 4, code: 117 }));
        assert_eq!(v(Role::Source, DecorCode::HarpoonUp, &north), Some(GlyphSlot { family: 4, code: 119 }));
        assert_eq!(v(Role::Source, DecorCode::Split, &north), Some(GlyphSlot { family: 3, code: 123 }));
        assert_eq!(v(Role::Target, DecorCode::Split, &north), Some(GlyphSlot { family: 3, code: 123 }));
    }
}
