//! Cell measurement and gap tables.
//!
//! Text is never typeset; a [`TextMetricsProvider`] turns opaque cell text
//! into a box. The default provider gives every glyph the same box, which is
//! crude but fully deterministic.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::ast::{Axis, Diagram, Directive, GapEntry, GapSpec, SpaceOp};
use crate::fixdim::{dim_from_pt, Dim, DimError, DimResult, UnitRegistry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TextSize {
    Text,
    Script,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct CellBox {
    pub width: Dim,
    pub height: Dim,
    pub depth: Dim,
}

impl CellBox {
    pub const EMPTY: CellBox = CellBox { width: Dim::ZERO, height: Dim::ZERO, depth: Dim::ZERO };
}

impl fmt::Display for CellBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}+{}", self.width, self.height, self.depth)
    }
}

pub trait TextMetricsProvider {
    /// Natural box of `text`. Must be deterministic, and the empty string
    /// must measure as an empty box.
    fn measure(&self, text: &str, size: TextSize) -> CellBox;
}

/// Width of the `\;` math space at `size`.
pub fn thick_space(u: &UnitRegistry, size: TextSize) -> Dim {
    match size {
        TextSize::Text => u.thick_space,
        TextSize::Script => script(u.thick_space),
    }
}

fn script(d: Dim) -> Dim {
    d.muldiv(7, 10).expect("shrinking cannot overflow")
}

/// Every glyph is a fixed box unless the table says otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedBoxMetrics {
    pub default: CellBox,
    pub glyphs: BTreeMap<char, CellBox>,
}

impl Default for FixedBoxMetrics {
    fn default() -> Self {
        FixedBoxMetrics {
            default: CellBox { width: Dim::pt(5), height: Dim::pt(7), depth: Dim::pt(2) },
            glyphs: BTreeMap::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("metrics line {line}: {message}")]
pub struct MetricsFileError {
    pub line: usize,
    pub message: String,
}

enum Glyph {
    Char(char),
    Word,
}

/// Splits text into measurable glyphs. Control words count as one glyph;
/// grouping, scripts markers, spaces and the math spacing commands count as
/// nothing.
fn glyphs(text: &str) -> Vec<Glyph> {
    let mut out = Vec::new();
    let mut it = text.chars().peekable();
    while let Some(c) = it.next() {
        match c {
            '\\' => match it.next() {
                Some(n) if n.is_ascii_alphabetic() => {
                    while it.next_if(char::is_ascii_alphabetic).is_some() {}
                    out.push(Glyph::Word);
                }
                Some(',' | ':' | ';' | '!' | ' ') | None => {}
                Some(n) => out.push(Glyph::Char(n)),
            },
            '{' | '}' | '^' | '_' | '$' | '&' | '~' => {}
            c if c.is_whitespace() => {}
            c => out.push(Glyph::Char(c)),
        }
    }
    out
}

impl FixedBoxMetrics {
    /// Reads the line format
    ///
    /// ```text
    /// # comment
    /// default 5 7 2
    /// glyph U+0041 6 7 0
    /// glyph 102 4.5 7 2
    /// ```
    ///
    /// Values are in points. Anything else is rejected.
    pub fn parse(src: &str) -> Result<FixedBoxMetrics, MetricsFileError> {
        let mut m = FixedBoxMetrics::default();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| MetricsFileError { line, message };
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let fields: Vec<&str> = text.split_whitespace().collect();
            let dims = |vals: &[&str]| -> Result<CellBox, MetricsFileError> {
                if vals.len() != 3 {
                    return Err(err(format!("expected 3 dimensions, found {}", vals.len())));
                }
                let mut d = [Dim::ZERO; 3];
                for (slot, v) in d.iter_mut().zip(vals) {
                    *slot = dim_from_pt(v).map_err(|e| err(format!("{e}")))?;
                    if *slot < Dim::ZERO {
                        return Err(err(format!("negative dimension `{v}`")));
                    }
                }
                Ok(CellBox { width: d[0], height: d[1], depth: d[2] })
            };
            match fields[0] {
                "default" => m.default = dims(&fields[1..])?,
                "glyph" => {
                    let cp = fields.get(1).ok_or_else(|| err("missing codepoint".into()))?;
                    let n = match cp.strip_prefix("U+").or_else(|| cp.strip_prefix("u+")) {
                        Some(hex) => u32::from_str_radix(hex, 16),
                        None => cp.parse::<u32>(),
                    }
                    .map_err(|_| err(format!("bad codepoint `{cp}`")))?;
                    let c = char::from_u32(n).ok_or_else(|| err(format!("bad codepoint `{cp}`")))?;
                    m.glyphs.insert(c, dims(&fields[2..])?);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(m)
    }

    fn glyph(&self, g: &Glyph) -> CellBox {
        match g {
            Glyph::Char(c) => self.glyphs.get(c).copied().unwrap_or(self.default),
            Glyph::Word => self.default,
        }
    }
}

impl TextMetricsProvider for FixedBoxMetrics {
    fn measure(&self, text: &str, size: TextSize) -> CellBox {
        let mut b = CellBox::EMPTY;
        for g in glyphs(text) {
            let gb = self.glyph(&g);
            // a line of a few thousand glyphs cannot reach 2^30 sp
            b.width = b.width.try_add(gb.width).unwrap_or(b.width);
            b.height = b.height.max(gb.height);
            b.depth = b.depth.max(gb.depth);
        }
        match size {
            TextSize::Text => b,
            TextSize::Script => CellBox { width: script(b.width), height: script(b.height), depth: script(b.depth) },
        }
    }
}

/// Gap lookup: one pinned zero index, explicit entries after it, and the
/// standard gap everywhere else.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapTable {
    pinned: usize,
    entries: Vec<Dim>,
    standard: Dim,
}

impl GapTable {
    pub fn standard(axis: Axis, standard: Dim) -> GapTable {
        GapTable { pinned: pinned(axis), entries: Vec::new(), standard }
    }

    pub fn get(&self, i: usize) -> Dim {
        if i == self.pinned {
            return Dim::ZERO;
        }
        match i.checked_sub(self.pinned + 1).and_then(|k| self.entries.get(k)) {
            Some(d) => *d,
            None => self.standard,
        }
    }

    pub fn entries(&self) -> &[Dim] {
        &self.entries
    }
}

fn pinned(axis: Axis) -> usize {
    match axis {
        Axis::Column => 1,
        Axis::Row => 0,
    }
}

/// Evaluates a `\cgaps`/`\rgaps` list against the units in force. The
/// returned table falls back to the standard gap of `u`.
pub fn resolve_gaps(g: &GapSpec, m: &dyn TextMetricsProvider, u: &UnitRegistry) -> DimResult<GapTable> {
    let standard = match g.axis {
        Axis::Column => u.standardcgap,
        Axis::Row => u.standardrgap,
    };
    let mut entries = Vec::with_capacity(g.entries.len());
    for e in &g.entries {
        entries.push(match e {
            GapEntry::Scale(f) => standard.scale(*f)?,
            GapEntry::Widen(text, f) => {
                let need = m.measure(text, TextSize::Script).width.try_add(Dim::pt(15))?;
                standard.scale(*f)?.max(need)
            }
        });
    }
    Ok(GapTable { pinned: pinned(g.axis), entries, standard })
}

/// Everything the layout passes read about the grid.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricsTables {
    cells: Vec<Vec<CellBox>>,
    rowheight: Vec<Dim>,
    rowdepth: Vec<Dim>,
    colwidth: Vec<Dim>,
    pub cgap: GapTable,
    pub rgap: GapTable,
    pub rows: usize,
    pub cols: usize,
    /// Last row that reached `cols` cells.
    pub max_col_row: usize,
    /// Units after `\Cgaps`/`\Rgaps`.
    pub units: UnitRegistry,
    pub pre_space: Dim,
    pub post_space: Dim,
}

impl MetricsTables {
    /// Box of cell (row, col), 1-based. Cells missing from a short row read
    /// as empty boxes.
    pub fn cell(&self, row: usize, col: usize) -> CellBox {
        self.cells
            .get(row.wrapping_sub(1))
            .and_then(|r| r.get(col.wrapping_sub(1)))
            .copied()
            .unwrap_or(CellBox::EMPTY)
    }

    pub fn rowheight(&self, row: usize) -> Dim {
        self.rowheight.get(row.wrapping_sub(1)).copied().unwrap_or(Dim::ZERO)
    }

    pub fn rowdepth(&self, row: usize) -> Dim {
        self.rowdepth.get(row.wrapping_sub(1)).copied().unwrap_or(Dim::ZERO)
    }

    pub fn colwidth(&self, col: usize) -> Dim {
        self.colwidth.get(col.wrapping_sub(1)).copied().unwrap_or(Dim::ZERO)
    }

    pub fn cgap(&self, i: usize) -> Dim {
        self.cgap.get(i)
    }

    pub fn rgap(&self, i: usize) -> Dim {
        self.rgap.get(i)
    }
}

/// The measuring pass. Directives are applied in order first, so gap lists
/// see the units in force where they were written.
pub fn measure_diagram(
    d: &Diagram,
    m: &dyn TextMetricsProvider,
    base: &UnitRegistry,
) -> Result<MetricsTables, DimError> {
    let mut u = base.clone();
    let mut cgap_entries: Option<GapTable> = None;
    let mut rgap_entries: Option<GapTable> = None;
    let (mut pre, mut post) = (Dim::ZERO, Dim::ZERO);
    for dir in &d.directives {
        match dir {
            Directive::Gaps(g) => {
                let t = resolve_gaps(g, m, &u)?;
                match g.axis {
                    Axis::Column => cgap_entries = Some(t),
                    Axis::Row => rgap_entries = Some(t),
                }
            }
            Directive::ScaleColumns(f) => u = u.cgaps(*f)?,
            Directive::ScaleRows(f) => u = u.rgaps(*f)?,
            Directive::PreSpace(op) => pre = apply(pre, *op)?,
            Directive::PostSpace(op) => post = apply(post, *op)?,
        }
    }
    // positions past an explicit list use the standard as it stands at \CD
    let mut cgap = cgap_entries.unwrap_or_else(|| GapTable::standard(Axis::Column, u.standardcgap));
    cgap.standard = u.standardcgap;
    let mut rgap = rgap_entries.unwrap_or_else(|| GapTable::standard(Axis::Row, u.standardrgap));
    rgap.standard = u.standardrgap;

    let mut cells = Vec::with_capacity(d.rows.len());
    let (mut rowheight, mut rowdepth) = (Vec::new(), Vec::new());
    let mut cols = 0;
    let mut max_col_row = 0;
    let mut colwidth: Vec<Dim> = Vec::new();
    for (r, row) in d.rows.iter().enumerate() {
        let mut boxes = Vec::with_capacity(row.len());
        let (mut ht, mut dp) = (Dim::ZERO, Dim::ZERO);
        for (c, cell) in row.iter().enumerate() {
            let natural = m.measure(&cell.content, TextSize::Text);
            let b = CellBox {
                width: natural.width,
                height: natural.height.max(u.strut_height),
                depth: natural.depth.max(Dim::ZERO),
            };
            ht = ht.max(b.height);
            dp = dp.max(b.depth);
            if c == colwidth.len() {
                colwidth.push(Dim::ZERO);
            }
            colwidth[c] = colwidth[c].max(b.width);
            boxes.push(b);
        }
        if row.len() >= cols {
            cols = row.len();
            max_col_row = r + 1;
        }
        cells.push(boxes);
        rowheight.push(ht);
        rowdepth.push(dp);
    }
    Ok(MetricsTables {
        cells,
        rowheight,
        rowdepth,
        colwidth,
        cgap,
        rgap,
        rows: d.rows.len(),
        cols,
        max_col_row,
        units: u,
        pre_space: pre,
        post_space: post,
    })
}

fn apply(cur: Dim, op: SpaceOp) -> DimResult<Dim> {
    match op {
        SpaceOp::Add(d) => cur.try_add(d),
        SpaceOp::Set(d) => Ok(d),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_document;

    fn tables(src: &str) -> MetricsTables {
        let d = parse_document(src).unwrap().0.diagram.unwrap();
        measure_diagram(&d, &FixedBoxMetrics::default(), &UnitRegistry::default()).unwrap()
    }

    fn pt(n: i32) -> Dim {
        Dim::pt(n)
    }

    #[test]
    fn empty_cells_are_struts() {
        let t = tables(r"\CD & \\ & \endCD");
        for (r, c) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert_eq!(t.cell(r, c), CellBox { width: Dim::ZERO, height: pt(10), depth: Dim::ZERO });
        }
        assert_eq!(t.colwidth(1), Dim::ZERO);
        assert_eq!((t.rows, t.cols), (2, 2));
    }

    #[test]
    fn glyph_boxes() {
        let t = tables(r"\CD AB \endCD");
        assert_eq!(t.cell(1, 1), CellBox { width: pt(10), height: pt(10), depth: pt(2) });
        let m = FixedBoxMetrics::default();
        let f = m.measure("f", TextSize::Script);
        assert_eq!(f.width.sp(), 229376);
        assert_eq!(f.height.sp(), 321126);
        assert_eq!(f.depth.sp(), 91750);
        assert_eq!(m.measure(r"f\circ g", TextSize::Text).width, pt(15));
        assert_eq!(m.measure(r"{X}^{2}_\; \,", TextSize::Text).width, pt(10));
        assert_eq!(m.measure("", TextSize::Script), CellBox::EMPTY);
    }

    #[test]
    fn ragged_rows() {
        let t = tables(r"\CD A & BB & CCC \\ DDDD & E \endCD");
        assert_eq!((t.cols, t.max_col_row), (3, 1));
        assert_eq!(t.colwidth(1), pt(20));
        assert_eq!(t.colwidth(2), pt(10));
        assert_eq!(t.colwidth(3), pt(15));
        assert_eq!(t.cell(2, 3), CellBox::EMPTY);
        // ties go to the later row
        let t = tables(r"\CD A & B \\ C & D \\ E \endCD");
        assert_eq!(t.max_col_row, 2);
    }

    #[test]
    fn rows_take_maxima() {
        let t = tables(r"\CD A & \\ \endCD");
        assert_eq!((t.rowheight(1), t.rowdepth(1)), (pt(10), pt(2)));
    }

    #[test]
    fn gap_examples() {
        let t = tables(r"\cgaps{1;2} \CD A \endCD");
        assert_eq!([t.cgap(1), t.cgap(2), t.cgap(3), t.cgap(4)], [Dim::ZERO, pt(40), pt(80), pt(40)]);
        let t = tables(r"\rgaps{0.5} \CD A \endCD");
        assert_eq!([t.rgap(0), t.rgap(1), t.rgap(2), t.rgap(7)], [Dim::ZERO, pt(16), pt(32), pt(32)]);
        let t = tables(r"\cgaps{\w{X}} \CD A \endCD");
        assert_eq!(t.cgap(2), pt(40));
        let t = tables(r"\cgaps{\w{XXXXXXXXXXXXX}0.1} \CD A \endCD");
        // 13 script glyphs: 45.5pt + 15pt beats 4pt
        assert_eq!(t.cgap(2), dim_from_pt("60.5").unwrap());
    }

    #[test]
    fn defaults_without_lists() {
        let t = tables(r"\CD A \endCD");
        assert_eq!([t.cgap(1), t.cgap(2)], [Dim::ZERO, pt(40)]);
        assert_eq!([t.rgap(0), t.rgap(1)], [Dim::ZERO, pt(32)]);
    }

    #[test]
    fn list_entries_freeze_but_fallback_follows_scaling() {
        let t = tables(r"\cgaps{1} \Cgaps{2} \CD A \endCD");
        assert_eq!(t.cgap(2), pt(40));
        assert_eq!(t.cgap(3), pt(80));
        assert_eq!(t.units.hunit, pt(4));
        let t = tables(r"\Cgaps{2} \cgaps{1} \CD A \endCD");
        assert_eq!(t.cgap(2), pt(80));
    }

    #[test]
    fn spaces_accumulate_or_reset() {
        let t = tables(r"\preCDspace{6pt} \preCDspace{1pt} \PostCDSpace{3pt} \postCDspace{1pt} \CD A \endCD");
        assert_eq!((t.pre_space, t.post_space), (pt(7), pt(4)));
        let t = tables(r"\preCDspace{6pt} \PreCDSpace{1pt} \CD A \endCD");
        assert_eq!(t.pre_space, pt(1));
    }

    #[test]
    fn metrics_file() {
        let m = FixedBoxMetrics::parse("# synthetic\ndefault 4 6 1\nglyph U+0041 20 10 2 # A\nglyph 66 1.5 3 0\n")
            .unwrap();
        assert_eq!(m.measure("AB", TextSize::Text), CellBox { width: dim_from_pt("21.5").unwrap(), height: pt(10), depth: pt(2) });
        assert_eq!(m.measure("z", TextSize::Text).width, pt(4));
        for bad in ["size 1 2 3", "glyph U+zz 1 2 3", "glyph 65 1 2", "default 1 2 x", "default 1 -2 3"] {
            assert!(FixedBoxMetrics::parse(bad).is_err(), "{bad}");
        }
        assert_eq!(FixedBoxMetrics::parse("\nfoo").unwrap_err().line, 2);
    }
}
