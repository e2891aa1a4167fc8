//! The 23 admissible arrow slopes and how a direction snaps to one.

use std::fmt;

use thiserror::Error;

use crate::fixdim::Dim;

/// (num, den) by index 1..=23, shallowest first.
pub const SLOPES: [(i64, i64); 23] = [
    (1, 6),
    (1, 5),
    (1, 4),
    (1, 3),
    (2, 5),
    (1, 2),
    (3, 5),
    (2, 3),
    (3, 4),
    (4, 5),
    (5, 6),
    (1, 1),
    (6, 5),
    (5, 4),
    (4, 3),
    (3, 2),
    (5, 3),
    (2, 1),
    (5, 2),
    (3, 1),
    (4, 1),
    (5, 1),
    (6, 1),
];

pub const MIN_INDEX: i64 = 1;
pub const MAX_INDEX: i64 = 23;

/// A table slope: rise `num` over run `den`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuantSlope {
    pub num: i64,
    pub den: i64,
    pub index: u8,
}

impl fmt::Display for QuantSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}#{}", self.num, self.den, self.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("slope index {0} outside 1..23")]
pub struct IndexOutOfRange(pub i64);

pub fn select(index: i64) -> Result<QuantSlope, IndexOutOfRange> {
    if !(MIN_INDEX..=MAX_INDEX).contains(&index) {
        return Err(IndexOutOfRange(index));
    }
    let (num, den) = SLOPES[(index - 1) as usize];
    Ok(QuantSlope { num, den, index: index as u8 })
}

fn entry(index: i64) -> QuantSlope {
    select(index).expect("index in range")
}

/// Nearest table slope to `dy/dx`. `dy` is a magnitude; `dx` may be
/// negative after target shifts, which snaps to the steepest slope.
///
/// Between two neighbouring table slopes the breakpoint is their arithmetic
/// mean; a direction exactly on the mean goes to the steeper one.
pub fn quantize(dy: Dim, dx: Dim) -> QuantSlope {
    quantize_sp(dy.sp() as i64, dx.sp() as i64)
}

/// [`quantize`] on raw scaled points, for differences that may exceed the
/// range of a single dimension.
pub fn quantize_sp(dy: i64, dx: i64) -> QuantSlope {
    let (dy, dx) = (dy as i128, dx as i128);
    if dx < 0 {
        return entry(23);
    }
    if 6 * dy < dx {
        return entry(1);
    }
    if 6 * dx < dy {
        return entry(23);
    }
    let (mut pa, mut pb) = (0i128, 1i128);
    for (i, &(a, b)) in SLOPES.iter().enumerate() {
        let (a, b) = (a as i128, b as i128);
        if dx * a < dy * b {
            pa = a;
            pb = b;
            continue;
        }
        // first slope not below dy/dx; step back if the predecessor is nearer
        if 2 * dy * b * pb < dx * (a * pb + pa * b) {
            return entry(i as i64);
        }
        return entry(i as i64 + 1);
    }
    // dx·6 ≥ dy was checked above, so (6,1) always stops the scan
    unreachable!("slope scan fell off the table")
}

/// Moves `steps` along the table, toward steeper slopes for NE/SW arrows and
/// toward shallower ones otherwise, clamped to the table.
pub fn shift_index(s: QuantSlope, steps: i64, nesw: bool) -> QuantSlope {
    let delta = if nesw { steps } else { steps.saturating_neg() };
    entry((s.index as i64).saturating_add(delta).clamp(MIN_INDEX, MAX_INDEX))
}

/// Splits an offset `p` perpendicular to the slope into a vertical (`main`)
/// and horizontal (`cross`) part using the coarse cosine factors 0.9/0.8/0.7.
pub fn getcos(p: Dim, s: QuantSlope) -> (Dim, Dim) {
    let idx = s.index as i64;
    let p = p.sp() as i64;
    if s.num < s.den {
        let f = if idx < 8 { 9 } else { 8 };
        let main = p * f / 10;
        let cross = main * s.num / s.den;
        (sp(main), sp(cross))
    } else {
        let k = 24 - idx;
        let f = if k < 8 {
            9
        } else if k < 12 {
            8
        } else {
            7
        };
        let cross = p * f / 10;
        let main = cross * s.den / s.num;
        (sp(main), sp(cross))
    }
}

fn sp(v: i64) -> Dim {
    // both parts are no larger than |p|
    Dim::from_sp(v).expect("getcos shrinks")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(dy: i32, dx: i32) -> u8 {
        quantize(Dim::from_sp_const(dy), Dim::from_sp_const(dx)).index
    }

    #[test]
    fn table_is_strictly_increasing() {
        for w in SLOPES.windows(2) {
            assert!(w[0].0 * w[1].1 < w[1].0 * w[0].1);
        }
        assert_eq!(SLOPES[0], (1, 6));
        assert_eq!(SLOPES[22], (6, 1));
    }

    #[test]
    fn quantize_examples() {
        assert_eq!(q(5 * 65536, -3 * 65536), 23);
        assert_eq!(q(1, 1), 12);
        assert_eq!(q(11, 20), 7);
        assert_eq!(q(1, 6), 1);
        assert_eq!(q(1, 7), 1);
        assert_eq!(q(7, 1), 23);
        // zero run after a target shift
        assert_eq!(q(5, 0), 23);
    }

    #[test]
    fn seed_predecessor_never_wins() {
        for dx in 1..=600 {
            for dy in 0..=600 {
                if 6 * dy >= dx && 6 * dx >= dy {
                    assert!(q(dy, dx) >= 1);
                }
            }
        }
    }

    #[test]
    fn select_examples() {
        assert_eq!(select(12).unwrap(), QuantSlope { num: 1, den: 1, index: 12 });
        assert_eq!((select(1).unwrap().num, select(1).unwrap().den), (1, 6));
        assert_eq!((select(23).unwrap().num, select(23).unwrap().den), (6, 1));
        assert_eq!(select(0), Err(IndexOutOfRange(0)));
        assert_eq!(select(24), Err(IndexOutOfRange(24)));
    }

    #[test]
    fn shift_examples() {
        let s = select(12).unwrap();
        assert_eq!(shift_index(s, 3, true), select(15).unwrap());
        assert_eq!(shift_index(s, 100, true).index, 23);
        assert_eq!(shift_index(s, 3, false), select(9).unwrap());
        assert_eq!(shift_index(s, i64::MIN, false).index, 23);
        assert_eq!(shift_index(s, 0, false), s);
    }

    #[test]
    fn getcos_examples() {
        let p = Dim::from_sp_const(98304);
        let (m, c) = getcos(p, select(12).unwrap());
        assert_eq!((m.sp(), c.sp()), (68812, 68812));
        let (m, c) = getcos(p, select(1).unwrap());
        assert_eq!((m.sp(), c.sp()), (88473, 14745));
        assert_eq!(getcos(Dim::ZERO, select(5).unwrap()), (Dim::ZERO, Dim::ZERO));
        // negative offsets truncate toward zero
        let (m, c) = getcos(-p, select(1).unwrap());
        assert_eq!((m.sp(), c.sp()), (-88473, -14745));
    }
}
