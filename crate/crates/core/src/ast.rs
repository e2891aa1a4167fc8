//! Syntax tree for diagram documents.

use std::fmt;

use crate::fixdim::{Dim, Factor};

/// 1-based line and column (in characters) of a token.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourcePos {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for SourcePos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Which end of an arrow a decoration sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Role {
    Source,
    Target,
}

/// Head/tail decoration requested by `\0` (source) or `\1` (target).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DecorCode {
    /// Not given: no source decoration, an arrowhead at the target.
    #[default]
    Default,
    /// `e`: nothing.
    Empty,
    /// `t`
    Tail,
    /// `h`
    Head,
    /// `'`
    HarpoonUp,
    /// `` ` ``
    HarpoonDown,
    /// `(`
    HookOpen,
    /// `)`
    HookClose,
    /// `s`
    Split,
    /// `H`
    DoubleHead,
}

impl DecorCode {
    pub fn from_char(c: char) -> Option<DecorCode> {
        Some(match c {
            'e' => DecorCode::Empty,
            't' => DecorCode::Tail,
            'h' => DecorCode::Head,
            '\'' => DecorCode::HarpoonUp,
            '`' => DecorCode::HarpoonDown,
            '(' => DecorCode::HookOpen,
            ')' => DecorCode::HookClose,
            's' => DecorCode::Split,
            'H' => DecorCode::DoubleHead,
            _ => return None,
        })
    }

    pub fn as_char(self) -> Option<char> {
        Some(match self {
            DecorCode::Default => return None,
            DecorCode::Empty => 'e',
            DecorCode::Tail => 't',
            DecorCode::Head => 'h',
            DecorCode::HarpoonUp => '\'',
            DecorCode::HarpoonDown => '`',
            DecorCode::HookOpen => '(',
            DecorCode::HookClose => ')',
            DecorCode::Split => 's',
            DecorCode::DoubleHead => 'H',
        })
    }

    /// The integer the option setters store for this code. Source and target
    /// use different numberings.
    pub fn code(self, role: Role) -> i32 {
        use DecorCode::*;
        match (self, role) {
            (Default, _) => 0,
            (Empty, _) => -1,
            (Split, _) => 12,
            (DoubleHead, _) => 13,
            (Tail, Role::Source) => 2,
            (Head, Role::Source) => 3,
            (HarpoonUp, Role::Source) => 6,
            (HarpoonDown, Role::Source) => 7,
            (HookOpen, Role::Source) => 8,
            (HookClose, Role::Source) => 9,
            (Head, Role::Target) => 2,
            (Tail, Role::Target) => 3,
            (HarpoonUp, Role::Target) => 4,
            (HarpoonDown, Role::Target) => 5,
            (HookOpen, Role::Target) => 10,
            (HookClose, Role::Target) => 11,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ShaftStyle {
    /// `\a+`, also the default.
    Solid,
    /// `\a0`
    Invisible,
    /// `\a-`
    Broken,
    /// `\a=`
    Double,
}

impl ShaftStyle {
    pub fn from_char(c: char) -> Option<ShaftStyle> {
        Some(match c {
            '0' => ShaftStyle::Invisible,
            '+' => ShaftStyle::Solid,
            '-' => ShaftStyle::Broken,
            '=' => ShaftStyle::Double,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            ShaftStyle::Invisible => '0',
            ShaftStyle::Solid => '+',
            ShaftStyle::Broken => '-',
            ShaftStyle::Double => '=',
        }
    }

    /// -1, 1, 2, 3 as stored by `\a`.
    pub fn code(self) -> i32 {
        match self {
            ShaftStyle::Invisible => -1,
            ShaftStyle::Solid => 1,
            ShaftStyle::Broken => 2,
            ShaftStyle::Double => 3,
        }
    }
}

/// Options collected between `@()` and the arrow they modify.
///
/// Every setter is first-wins: it reports `false` and leaves the record
/// untouched when the option was already given.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ArrowOptions {
    pub src_decor: DecorCode,
    pub tgt_decor: DecorCode,
    pub shaft: Option<ShaftStyle>,
    /// `\ds(x;y)`: source shift in (hunit, vunit).
    pub ds: Option<(Factor, Factor)>,
    /// `\dtX(x;y)`: target shift, slope re-quantized.
    pub dt_x: Option<(Factor, Factor)>,
    /// `\dtY(x;y)`: target shift, target y re-derived from the quantized line.
    pub dt_y: Option<(Factor, Factor)>,
    /// `\da n`: slope table index shift.
    pub da: Option<i64>,
    /// `\dx f`: source-side x adjustment in hunit.
    pub dx: Option<Factor>,
    /// `\dX f`: target-side x adjustment in hunit.
    pub dx_target: Option<Factor>,
    /// `\dy f`: source-side y adjustment in vunit.
    pub dy: Option<Factor>,
    /// `\dY f`: target-side y adjustment in vunit.
    pub dy_target: Option<Factor>,
    /// `\p f`: parallel offset in hunit/2.
    pub p: Option<Factor>,
    pub label_upper: Option<String>,
    pub label_lower: Option<String>,
    pub dl_upper: Option<Factor>,
    pub dl_lower: Option<Factor>,
    pub short: bool,
    pub unshort: bool,
}

macro_rules! first_wins {
    ($name:ident, $field:ident, $ty:ty) => {
        pub fn $name(&mut self, v: $ty) -> bool {
            if self.$field.is_some() {
                return false;
            }
            self.$field = Some(v);
            true
        }
    };
}

impl ArrowOptions {
    pub fn shaft(&self) -> ShaftStyle {
        self.shaft.unwrap_or(ShaftStyle::Solid)
    }

    pub fn is_default(&self) -> bool {
        *self == ArrowOptions::default()
    }

    pub fn set_decor(&mut self, role: Role, code: DecorCode) -> bool {
        let slot = match role {
            Role::Source => &mut self.src_decor,
            Role::Target => &mut self.tgt_decor,
        };
        if *slot != DecorCode::Default {
            return false;
        }
        *slot = code;
        true
    }

    first_wins!(set_shaft, shaft, ShaftStyle);
    first_wins!(set_ds, ds, (Factor, Factor));
    first_wins!(set_dt_x, dt_x, (Factor, Factor));
    first_wins!(set_dt_y, dt_y, (Factor, Factor));
    first_wins!(set_da, da, i64);
    first_wins!(set_dx, dx, Factor);
    first_wins!(set_dx_target, dx_target, Factor);
    first_wins!(set_dy, dy, Factor);
    first_wins!(set_dy_target, dy_target, Factor);
    first_wins!(set_p, p, Factor);
    first_wins!(set_label_upper, label_upper, String);
    first_wins!(set_label_lower, label_lower, String);
    first_wins!(set_dl_upper, dl_upper, Factor);
    first_wins!(set_dl_lower, dl_lower, Factor);

    /// `\s`; ignored once `\uns` was seen.
    pub fn set_short(&mut self) -> bool {
        if self.unshort {
            return false;
        }
        self.short = true;
        true
    }

    /// `\uns`; ignored once `\s` was seen.
    pub fn set_unshort(&mut self) -> bool {
        if self.short {
            return false;
        }
        self.unshort = true;
        true
    }
}

/// `@(xoff,yoff)` with its options. `xoff` counts columns eastward, `yoff`
/// rows northward.
#[derive(Clone, Debug)]
pub struct ArrowSpec {
    pub xoff: i32,
    pub yoff: i32,
    pub options: ArrowOptions,
    /// (row, col) of the owning cell, 1-based.
    pub cell: (usize, usize),
    pub pos: SourcePos,
}

impl PartialEq for ArrowSpec {
    // positions are provenance, not content
    fn eq(&self, other: &Self) -> bool {
        self.xoff == other.xoff
            && self.yoff == other.yoff
            && self.options == other.options
            && self.cell == other.cell
    }
}

impl Eq for ArrowSpec {}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Cell {
    pub content: String,
    pub arrows: Vec<ArrowSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    Column,
    Row,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GapEntry {
    Scale(Factor),
    /// `\w{text}f`: at least wide enough for `text` at script size plus 15pt.
    Widen(String, Factor),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapSpec {
    pub axis: Axis,
    pub entries: Vec<GapEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceOp {
    /// `\preCDspace`/`\postCDspace`: accumulate.
    Add(Dim),
    /// `\PreCDSpace`/`\PostCDSpace`: replace.
    Set(Dim),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    Gaps(GapSpec),
    /// `\Cgaps f`
    ScaleColumns(Factor),
    /// `\Rgaps f`
    ScaleRows(Factor),
    PreSpace(SpaceOp),
    PostSpace(SpaceOp),
}

/// A `\CD ... \endCD` grid plus the directives that preceded it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    pub directives: Vec<Directive>,
    pub rows: Vec<Vec<Cell>>,
}

impl Diagram {
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Widest row, as the measuring pass counts it.
    pub fn col_count(&self) -> usize {
        self.rows.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn cell(&self, row: usize, col: usize) -> Option<&Cell> {
        self.rows.get(row.checked_sub(1)?)?.get(col.checked_sub(1)?)
    }

    /// All arrows in row-major cell order, source order within a cell.
    pub fn arrows(&self) -> impl Iterator<Item = &ArrowSpec> {
        self.rows.iter().flatten().flat_map(|c| c.arrows.iter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InlineDirection {
    East,
    West,
}

/// `\East{upper}{lower}` / `\West{upper}{lower}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InlineArrow {
    pub direction: InlineDirection,
    pub upper: String,
    pub lower: String,
}

pub fn parse_inline_arrow(direction: InlineDirection, upper: &str, lower: &str) -> InlineArrow {
    InlineArrow { direction, upper: upper.to_string(), lower: lower.to_string() }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Document {
    pub diagram: Option<Diagram>,
    pub inline_arrows: Vec<InlineArrow>,
}

fn write_factor_pair(f: &mut fmt::Formatter<'_>, name: &str, v: Option<(Factor, Factor)>) -> fmt::Result {
    match v {
        Some((a, b)) => write!(f, "\\{name}({a};{b})"),
        None => Ok(()),
    }
}

fn write_factor(f: &mut fmt::Formatter<'_>, name: &str, v: Option<Factor>) -> fmt::Result {
    match v {
        Some(a) => write!(f, "\\{name}{{{a}}}"),
        None => Ok(()),
    }
}

impl fmt::Display for ArrowOptions {
    /// Canonical option group body (without the surrounding `@()`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.src_decor.as_char() {
            write!(f, "\\0{c}")?;
        }
        if let Some(c) = self.tgt_decor.as_char() {
            write!(f, "\\1{c}")?;
        }
        if let Some(s) = self.shaft {
            write!(f, "\\a{}", s.as_char())?;
        }
        write_factor_pair(f, "ds", self.ds)?;
        write_factor_pair(f, "dtX", self.dt_x)?;
        write_factor_pair(f, "dtY", self.dt_y)?;
        if let Some(n) = self.da {
            write!(f, "\\da{{{n}}}")?;
        }
        write_factor(f, "dx", self.dx)?;
        write_factor(f, "dX", self.dx_target)?;
        write_factor(f, "dy", self.dy)?;
        write_factor(f, "dY", self.dy_target)?;
        write_factor(f, "p", self.p)?;
        if let Some(l) = &self.label_upper {
            write!(f, "\\L{{{l}}}")?;
        }
        if let Some(l) = &self.label_lower {
            write!(f, "\\l{{{l}}}")?;
        }
        write_factor(f, "dL", self.dl_upper)?;
        write_factor(f, "dl", self.dl_lower)?;
        if self.short {
            f.write_str("\\s")?;
        }
        if self.unshort {
            f.write_str("\\uns")?;
        }
        Ok(())
    }
}

impl fmt::Display for ArrowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.options.is_default() {
            write!(f, "@(){}", self.options)?;
        }
        write!(f, "@({},{})", self.xoff, self.yoff)
    }
}

impl fmt::Display for GapSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.axis {
            Axis::Column => "cgaps",
            Axis::Row => "rgaps",
        };
        write!(f, "\\{name}{{")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            match e {
                GapEntry::Scale(x) => write!(f, "{x}")?,
                GapEntry::Widen(t, x) if *x == Factor::ONE => write!(f, "\\w{{{t}}}")?,
                GapEntry::Widen(t, x) => write!(f, "\\w{{{t}}}{x}")?,
            }
        }
        f.write_str("}")
    }
}

impl fmt::Display for Directive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Directive::Gaps(g) => write!(f, "{g}"),
            Directive::ScaleColumns(x) => write!(f, "\\Cgaps{{{x}}}"),
            Directive::ScaleRows(x) => write!(f, "\\Rgaps{{{x}}}"),
            Directive::PreSpace(SpaceOp::Add(d)) => write!(f, "\\preCDspace{{{}sp}}", d.sp()),
            Directive::PreSpace(SpaceOp::Set(d)) => write!(f, "\\PreCDSpace{{{}sp}}", d.sp()),
            Directive::PostSpace(SpaceOp::Add(d)) => write!(f, "\\postCDspace{{{}sp}}", d.sp()),
            Directive::PostSpace(SpaceOp::Set(d)) => write!(f, "\\PostCDSpace{{{}sp}}", d.sp()),
        }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.directives {
            writeln!(f, "{d}")?;
        }
        f.write_str("\\CD\n")?;
        for (r, row) in self.rows.iter().enumerate() {
            if r > 0 {
                f.write_str(" \\\\\n")?;
            }
            for (c, cell) in row.iter().enumerate() {
                if c > 0 {
                    f.write_str(" & ")?;
                }
                f.write_str(&cell.content)?;
                for a in &cell.arrows {
                    write!(f, " {a}")?;
                }
            }
        }
        // a lone blank cell after the last \\ would be read as \crcr
        if let [.., last] = self.rows.as_slice() {
            if self.rows.len() > 1 && matches!(last.as_slice(), [c] if c.content.trim().is_empty() && c.arrows.is_empty()) {
                f.write_str(" \\\\")?;
            }
        }
        f.write_str("\n\\endCD\n")
    }
}

impl fmt::Display for InlineArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.direction {
            InlineDirection::East => "East",
            InlineDirection::West => "West",
        };
        write!(f, "\\{name}{{{}}}{{{}}}", self.upper, self.lower)
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = &self.diagram {
            write!(f, "{d}")?;
        }
        for a in &self.inline_arrows {
            writeln!(f, "{a}")?;
        }
        Ok(())
    }
}
