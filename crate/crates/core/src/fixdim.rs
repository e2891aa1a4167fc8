//! Scaled-point lengths and decimal factors with TeX rounding rules.
//!
//! Every length in the compiler is a [`Dim`]: a signed count of scaled points
//! (65536 sp = 1 pt) whose magnitude stays below 2^30. Arithmetic truncates
//! toward zero, exactly like `\divide` and factor-times-dimen assignments.
//! Anything that would leave the legal range is a [`DimError::Overflow`].

use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use thiserror::Error;

/// Scaled points per point.
pub const UNITY: i64 = 1 << 16;

/// Largest legal magnitude of a dimension, in sp.
pub const MAX_DIMEN: i64 = (1 << 30) - 1;

/// TeX keeps at most this many fractional digits when scanning a decimal.
const MAX_FRACTION_DIGITS: usize = 17;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimError {
    #[error("dimension too large")]
    Overflow,
    #[error("invalid number `{0}`")]
    InvalidLiteral(String),
    #[error("unknown unit `{0}`")]
    UnknownUnit(String),
}

pub type DimResult<T> = Result<T, DimError>;

fn check(v: i128) -> DimResult<Dim> {
    if v.abs() > MAX_DIMEN as i128 {
        Err(DimError::Overflow)
    } else {
        Ok(Dim(v as i32))
    }
}

/// A length in scaled points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dim(i32);

impl Dim {
    pub const ZERO: Dim = Dim(0);

    /// Whole points. Panics at compile time (or run time) when out of range.
    pub const fn pt(points: i32) -> Dim {
        let v = points as i64 * UNITY;
        assert!(v <= MAX_DIMEN && v >= -MAX_DIMEN, "dimension too large");
        Dim(v as i32)
    }

    pub const fn from_sp_const(sp: i32) -> Dim {
        assert!(sp as i64 <= MAX_DIMEN && sp as i64 >= -MAX_DIMEN, "dimension too large");
        Dim(sp)
    }

    pub fn from_sp(sp: i64) -> DimResult<Dim> {
        check(sp as i128)
    }

    #[inline]
    pub const fn sp(self) -> i32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn abs(self) -> Dim {
        Dim(self.0.abs())
    }

    pub fn try_add(self, other: Dim) -> DimResult<Dim> {
        check(self.0 as i128 + other.0 as i128)
    }

    pub fn try_sub(self, other: Dim) -> DimResult<Dim> {
        check(self.0 as i128 - other.0 as i128)
    }

    /// `\multiply`.
    pub fn mul_int(self, m: i64) -> DimResult<Dim> {
        check(self.0 as i128 * m as i128)
    }

    /// `\divide`: truncates toward zero. Division by zero is an error in TeX;
    /// here it is a caller bug.
    pub fn div_int(self, n: i64) -> Dim {
        assert!(n != 0, "division of a dimension by zero");
        Dim((self.0 as i64 / n) as i32)
    }

    /// `trunc(self * m / n)` with a 128-bit intermediate.
    pub fn muldiv(self, m: i64, n: i64) -> DimResult<Dim> {
        assert!(n != 0, "division of a dimension by zero");
        check(self.0 as i128 * m as i128 / n as i128)
    }

    /// Half a dimension, truncated, as `\divide\dimen@\tw@` does.
    #[inline]
    pub fn half(self) -> Dim {
        Dim(self.0 / 2)
    }

    pub fn scale(self, f: Factor) -> DimResult<Dim> {
        let mag = (self.0 as i128).abs() * f.p as i128 / UNITY as i128;
        let negative = (self.0 < 0) != f.negative;
        check(if negative { -mag } else { mag })
    }

    /// Parses a TeX dimension such as `6pt`, `-1.5pt`, `.4pt`, `2bp`.
    pub fn parse(literal: &str) -> DimResult<Dim> {
        let s = literal.trim();
        let split = s
            .char_indices()
            .find(|(_, c)| c.is_ascii_alphabetic())
            .map(|(i, _)| i)
            .ok_or_else(|| DimError::InvalidLiteral(literal.to_string()))?;
        let (number, unit) = (s[..split].trim(), s[split..].trim());
        let d = Decimal::parse(number)?;
        let (num, den): (i64, i64) = match unit {
            "pt" => (1, 1),
            "sp" => {
                let v = if d.negative { -(d.int as i128) } else { d.int as i128 };
                return check(v);
            }
            "pc" => (12, 1),
            "in" => (7227, 100),
            "bp" => (7227, 7200),
            "cm" => (7227, 254),
            "mm" => (7227, 2540),
            "dd" => (1238, 1157),
            "cc" => (14856, 1157),
            other => return Err(DimError::UnknownUnit(other.to_string())),
        };
        let mut int = d.int as i128;
        let mut frac = d.frac as i128;
        if (num, den) != (1, 1) {
            let prod = int * num as i128;
            let whole = prod / den as i128;
            let rem = prod % den as i128;
            frac = (num as i128 * frac + UNITY as i128 * rem) / den as i128;
            int = whole + frac / UNITY as i128;
            frac %= UNITY as i128;
        }
        if int >= 1 << 14 {
            return Err(DimError::Overflow);
        }
        let v = int * UNITY as i128 + frac;
        check(if d.negative { -v } else { v })
    }
}

impl Neg for Dim {
    type Output = Dim;
    fn neg(self) -> Dim {
        Dim(-self.0)
    }
}

impl fmt::Display for Dim {
    /// Prints as TeX's `\the` would: shortest decimal that scans back exactly.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = self.0 as i64;
        if s < 0 {
            f.write_str("-")?;
            s = -s;
        }
        write!(f, "{}.", s / UNITY)?;
        let mut s = 10 * (s % UNITY) + 5;
        let mut delta = 10;
        loop {
            if delta > UNITY {
                s += 0x8000 - 50000;
            }
            write!(f, "{}", s / UNITY)?;
            s = 10 * (s % UNITY);
            delta *= 10;
            if s <= delta {
                break;
            }
        }
        f.write_str("pt")
    }
}

/// Unsigned decimal split into integer part and a 16-bit rounded fraction.
#[derive(Debug, Clone, Copy)]
struct Decimal {
    negative: bool,
    int: u64,
    frac: u64,
}

impl Decimal {
    fn parse(literal: &str) -> DimResult<Decimal> {
        let bad = || DimError::InvalidLiteral(literal.to_string());
        let mut s = literal.trim();
        let mut negative = false;
        while let Some(c) = s.chars().next() {
            match c {
                '-' => negative = !negative,
                '+' => {}
                c if c.is_whitespace() => {}
                _ => break,
            }
            s = &s[c.len_utf8()..];
        }
        let (int_part, frac_part) = match s.find(['.', ',']) {
            Some(i) => (&s[..i], &s[i + 1..]),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.bytes().all(|b| b.is_ascii_digit())
            || !frac_part.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(bad());
        }
        let mut int: u64 = 0;
        for b in int_part.bytes() {
            int = int
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u64))
                .filter(|v| *v <= i32::MAX as u64)
                .ok_or(DimError::Overflow)?;
        }
        let digits = &frac_part[..frac_part.len().min(MAX_FRACTION_DIGITS)];
        let mut frac: u64 = 0;
        if !digits.is_empty() {
            let n: u128 = digits.parse().map_err(|_| bad())?;
            let pow = 10u128.pow(digits.len() as u32);
            // round half away from zero on the magnitude
            frac = ((2 * n * UNITY as u128 + pow) / (2 * pow)) as u64;
        }
        if frac == UNITY as u64 {
            int += 1;
            frac = 0;
        }
        Ok(Decimal { negative, int, frac })
    }
}

/// `"2"` → 2pt, `"1.6"` → 104858 sp.
pub fn dim_from_pt(literal: &str) -> DimResult<Dim> {
    let d = Decimal::parse(literal)?;
    let v = d.int as i128 * UNITY as i128 + d.frac as i128;
    check(if d.negative { -v } else { v })
}

/// A decimal multiplier held as a magnitude over 2^16 plus a sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    p: u64,
    negative: bool,
}

impl Factor {
    pub const ONE: Factor = Factor { p: UNITY as u64, negative: false };
    pub const ZERO: Factor = Factor { p: 0, negative: false };

    pub fn from_raw(p: u64, negative: bool) -> Factor {
        Factor { p, negative: negative && p != 0 }
    }

    /// Magnitude numerator over 2^16.
    pub fn numerator(self) -> u64 {
        self.p
    }

    pub fn is_negative(self) -> bool {
        self.negative
    }
}

impl Default for Factor {
    fn default() -> Self {
        Factor::ONE
    }
}

impl FromStr for Factor {
    type Err = DimError;

    fn from_str(s: &str) -> DimResult<Factor> {
        let d = Decimal::parse(s)?;
        Ok(Factor::from_raw(d.int * UNITY as u64 + d.frac, d.negative))
    }
}

impl fmt::Display for Factor {
    /// Exact decimal expansion of p/2^16; always scans back to the same factor.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        write!(f, "{}", self.p >> 16)?;
        let mut rem = self.p & 0xffff;
        if rem != 0 {
            f.write_str(".")?;
            while rem != 0 {
                rem *= 10;
                write!(f, "{}", rem >> 16)?;
                rem &= 0xffff;
            }
        }
        Ok(())
    }
}

/// Lengths that parameterise diagram layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitRegistry {
    pub hunit: Dim,
    pub vunit: Dim,
    pub standardcgap: Dim,
    pub standardrgap: Dim,
    pub mathaxis: Dim,
    pub strut_height: Dim,
    /// Clearance between a cell box and an arrow end.
    pub pad: Dim,
    /// Extra reach of a horizontal arrow into an empty target cell.
    pub vertex_nudge: Dim,
    /// Length stepped along a slanted arrow before it leaves its source box.
    pub source_diag_offset: Dim,
    pub label_pad: Dim,
    pub double_gap: Dim,
    pub doublehead_sep: Dim,
    /// Major-axis size of one slanted shaft tile.
    pub tile: Dim,
    pub min_ext_arrow: Dim,
    /// A text-size thick math space.
    pub thick_space: Dim,
}

impl Default for UnitRegistry {
    fn default() -> Self {
        UnitRegistry {
            hunit: Dim::pt(2),
            vunit: dim_from_pt("1.6").expect("constant"),
            standardcgap: Dim::pt(40),
            standardrgap: Dim::pt(32),
            mathaxis: Dim::pt(90).div_int(36),
            strut_height: Dim::pt(10),
            pad: Dim::pt(3),
            vertex_nudge: dim_from_pt(".4").expect("constant"),
            source_diag_offset: Dim::pt(6),
            label_pad: Dim::pt(2),
            double_gap: dim_from_pt("1.5").expect("constant"),
            doublehead_sep: Dim::pt(3),
            tile: Dim::pt(10),
            min_ext_arrow: dim_from_pt("11.111").expect("constant"),
            thick_space: Dim::pt(50).div_int(18),
        }
    }
}

impl UnitRegistry {
    /// `\Cgaps`: scales the standard column gap and the horizontal unit.
    pub fn cgaps(&self, f: Factor) -> DimResult<UnitRegistry> {
        Ok(UnitRegistry {
            standardcgap: self.standardcgap.scale(f)?,
            hunit: self.hunit.scale(f)?,
            ..self.clone()
        })
    }

    /// `\Rgaps`: scales the standard row gap and the vertical unit.
    pub fn rgaps(&self, f: Factor) -> DimResult<UnitRegistry> {
        Ok(UnitRegistry {
            standardrgap: self.standardrgap.scale(f)?,
            vunit: self.vunit.scale(f)?,
            ..self.clone()
        })
    }
}
