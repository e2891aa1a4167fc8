//! Recursive-descent parser for diagram documents.
//!
//! A document is a sequence of gap/space directives, at most one
//! `\CD ... \endCD` body, and any number of `\East`/`\West` inline arrows.
//! Cell contents stay opaque text; only `&`, `\\`, braces and `@(` are
//! structural inside the body.

use std::fmt;

use thiserror::Error;

use crate::ast::*;
use crate::fixdim::{Dim, DimError, Factor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OptionFamily {
    /// `\0`, source decoration
    Source,
    /// `\1`, target decoration
    Target,
    /// `\a`, shaft style
    Shaft,
}

impl fmt::Display for OptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OptionFamily::Source => "\\0",
            OptionFamily::Target => "\\1",
            OptionFamily::Shaft => "\\a",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("\\CD without matching \\endCD")]
    UnterminatedCD,
    #[error("\\endCD without \\CD")]
    StrayEndCD,
    #[error("only one \\CD per document")]
    MultipleCD,
    #[error("\\{0} must not be used within \\CD")]
    GapDirectiveInsideCD(String),
    #[error("unbalanced braces")]
    UnbalancedBraces,
    #[error("Invalid option {family} (`{found}`)")]
    InvalidOptionChar { found: char, family: OptionFamily },
    #[error("option group is not followed by an arrow @(m,n)")]
    MissingArrowAfterOptions,
    #[error("unknown arrow option \\{0}")]
    UnknownOption(String),
    #[error("`@{0}` is not an arrow; expected `@(`")]
    UnexpectedAt(String),
    #[error("malformed arrow offsets `{0}`")]
    MalformedArrow(String),
    #[error("missing argument for \\{0}")]
    MissingArgument(String),
    #[error("invalid number `{0}`")]
    InvalidNumber(String),
    #[error("{0}")]
    Dimension(#[from] DimError),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: SourcePos,
    pub kind: ParseErrorKind,
}

/// A non-fatal finding, e.g. a duplicated option that was ignored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: SourcePos,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: warning: {}", self.pos, self.message)
    }
}

pub type Diagnostics = Vec<Diagnostic>;

type PResult<T> = Result<T, ParseError>;

struct Scanner {
    chars: Vec<(char, SourcePos)>,
    i: usize,
    end: SourcePos,
    warnings: Diagnostics,
}

impl Scanner {
    /// Strips `%` comments (through the end of the line) while keeping `\%`.
    fn new(input: &str) -> Scanner {
        let mut chars = Vec::with_capacity(input.len());
        let (mut line, mut col) = (1u32, 1u32);
        let mut in_comment = false;
        let mut escaped = false;
        for c in input.chars() {
            let pos = SourcePos { line, col };
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            if in_comment {
                if c == '\n' {
                    in_comment = false;
                }
                continue;
            }
            if c == '%' && !escaped {
                in_comment = true;
                continue;
            }
            escaped = c == '\\' && !escaped;
            chars.push((c, pos));
        }
        Scanner { chars, i: 0, end: SourcePos { line, col }, warnings: Vec::new() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.i).map(|c| c.0)
    }

    fn pos(&self) -> SourcePos {
        self.chars.get(self.i).map_or(self.end, |c| c.1)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.i += 1;
        }
    }

    fn warn(&mut self, pos: SourcePos, message: impl Into<String>) {
        self.warnings.push(Diagnostic { pos, message: message.into() });
    }

    fn err<T>(&self, pos: SourcePos, kind: ParseErrorKind) -> PResult<T> {
        Err(ParseError { pos, kind })
    }

    /// Reads the name after a backslash: a run of letters, or one character.
    fn control_name(&mut self) -> String {
        debug_assert_eq!(self.peek(), Some('\\'));
        self.i += 1;
        let mut name = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_alphabetic) {
            name.push(c);
            self.i += 1;
        }
        if name.is_empty() {
            if let Some(c) = self.bump() {
                name.push(c);
            }
        }
        name
    }

    /// Raw text of a balanced group; the opening brace is the current char.
    fn group(&mut self) -> PResult<String> {
        let open = self.pos();
        debug_assert_eq!(self.peek(), Some('{'));
        self.i += 1;
        let mut depth = 0usize;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.err(open, ParseErrorKind::UnbalancedBraces),
                Some('\\') => {
                    out.push('\\');
                    if let Some(c) = self.bump() {
                        out.push(c);
                    }
                }
                Some('{') => {
                    depth += 1;
                    out.push('{');
                }
                Some('}') if depth == 0 => return Ok(out),
                Some('}') => {
                    depth -= 1;
                    out.push('}');
                }
                Some(c) => out.push(c),
            }
        }
    }

    /// An undelimited macro argument: a braced group, a control sequence, or
    /// a single character. Leading spaces are skipped.
    fn argument(&mut self, cmd: &str) -> PResult<String> {
        self.skip_ws();
        match self.peek() {
            None => self.err(self.pos(), ParseErrorKind::MissingArgument(cmd.to_string())),
            Some('{') => self.group(),
            Some('}') => self.err(self.pos(), ParseErrorKind::UnbalancedBraces),
            Some('\\') => Ok(format!("\\{}", self.control_name())),
            Some(c) => {
                self.i += 1;
                Ok(c.to_string())
            }
        }
    }

    /// Text up to (not including) `stop` at brace depth zero; consumes `stop`.
    fn until(&mut self, stop: char, cmd: &str) -> PResult<String> {
        let start = self.pos();
        let mut depth = 0usize;
        let mut out = String::new();
        loop {
            match self.bump() {
                None => return self.err(start, ParseErrorKind::MissingArgument(cmd.to_string())),
                Some(c) if c == stop && depth == 0 => return Ok(out),
                Some('{') => {
                    depth += 1;
                    out.push('{');
                }
                Some('}') if depth == 0 => return self.err(start, ParseErrorKind::UnbalancedBraces),
                Some('}') => {
                    depth -= 1;
                    out.push('}');
                }
                Some(c) => out.push(c),
            }
        }
    }
}

fn factor(text: &str, pos: SourcePos) -> PResult<Factor> {
    let t = text.trim();
    // an empty factor multiplies by one
    if t.is_empty() {
        return Ok(Factor::ONE);
    }
    t.parse::<Factor>().map_err(|e| ParseError {
        pos,
        kind: match e {
            DimError::Overflow => ParseErrorKind::Dimension(e),
            _ => ParseErrorKind::InvalidNumber(t.to_string()),
        },
    })
}

fn integer(text: &str, pos: SourcePos) -> PResult<i64> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    t.parse::<i64>().map_err(|_| ParseError { pos, kind: ParseErrorKind::InvalidNumber(text.trim().to_string()) })
}

fn gap_spec(text: &str, axis: Axis, pos: SourcePos) -> PResult<GapSpec> {
    let mut entries = Vec::new();
    let mut depth = 0usize;
    let mut start = 0;
    let mut pieces = Vec::new();
    for (i, c) in text.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            ';' if depth == 0 => {
                pieces.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&text[start..]);
    for piece in pieces {
        let p = piece.trim();
        if let Some(rest) = p.strip_prefix("\\w").filter(|r| !r.starts_with(|c: char| c.is_ascii_alphabetic())) {
            let mut sc = Scanner::new(rest);
            let body = sc.argument("w").map_err(|e| ParseError { pos, kind: e.kind })?;
            let tail: String = sc.chars[sc.i..].iter().map(|c| c.0).collect();
            entries.push(GapEntry::Widen(body.trim().to_string(), factor(&tail, pos)?));
        } else {
            entries.push(GapEntry::Scale(factor(p, pos)?));
        }
    }
    Ok(GapSpec { axis, entries })
}

const BODY_FORBIDDEN: &[&str] = &["cgaps", "rgaps", "Cgaps", "Rgaps", "preCDspace", "postCDspace"];

#[derive(Default)]
struct CellBuilder {
    content: String,
    arrows: Vec<ArrowSpec>,
}

impl CellBuilder {
    fn finish(self, row: usize, col: usize) -> Cell {
        let content = self.content.split_whitespace().collect::<Vec<_>>().join(" ");
        let arrows = self
            .arrows
            .into_iter()
            .map(|mut a| {
                a.cell = (row, col);
                a
            })
            .collect();
        Cell { content, arrows }
    }

    fn is_blank(&self) -> bool {
        self.arrows.is_empty() && self.content.trim().is_empty()
    }
}

struct Parser {
    sc: Scanner,
}

impl Parser {
    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        let mut pending: Vec<Directive> = Vec::new();
        let mut stray_text = false;
        loop {
            self.sc.skip_ws();
            let pos = self.sc.pos();
            let Some(c) = self.sc.peek() else { break };
            match c {
                '\\' => {
                    stray_text = false;
                    let name = self.sc.control_name();
                    match name.as_str() {
                        "CD" => {
                            if doc.diagram.is_some() {
                                return self.sc.err(pos, ParseErrorKind::MultipleCD);
                            }
                            let rows = self.body(pos)?;
                            doc.diagram = Some(Diagram { directives: std::mem::take(&mut pending), rows });
                        }
                        "endCD" => return self.sc.err(pos, ParseErrorKind::StrayEndCD),
                        "East" | "West" => {
                            let upper = self.sc.argument(&name)?;
                            let lower = self.sc.argument(&name)?;
                            let dir =
                                if name == "East" { InlineDirection::East } else { InlineDirection::West };
                            doc.inline_arrows.push(parse_inline_arrow(dir, upper.trim(), lower.trim()));
                        }
                        _ => match self.directive(&name, pos)? {
                            Some(d) if doc.diagram.is_some() => {
                                self.sc.warn(pos, format!("{d} after \\CD has no effect"));
                            }
                            Some(d) => pending.push(d),
                            None => self.sc.warn(pos, format!("\\{name} outside \\CD ignored")),
                        },
                    }
                }
                '{' => {
                    self.sc.group()?;
                    self.sc.warn(pos, "group outside \\CD ignored");
                }
                '}' => return self.sc.err(pos, ParseErrorKind::UnbalancedBraces),
                _ => {
                    self.sc.bump();
                    if !stray_text {
                        self.sc.warn(pos, "text outside \\CD ignored");
                        stray_text = true;
                    }
                }
            }
        }
        if doc.diagram.is_none() && !pending.is_empty() {
            self.sc.warn(SourcePos { line: 1, col: 1 }, "directives without a \\CD have no effect");
        }
        Ok(doc)
    }

    fn directive(&mut self, name: &str, pos: SourcePos) -> PResult<Option<Directive>> {
        let dim = |p: &mut Parser| -> PResult<Dim> {
            let arg = p.sc.argument(name)?;
            Dim::parse(&arg).map_err(|e| ParseError { pos, kind: e.into() })
        };
        Ok(Some(match name {
            "cgaps" | "rgaps" => {
                let axis = if name == "cgaps" { Axis::Column } else { Axis::Row };
                let arg = self.sc.argument(name)?;
                Directive::Gaps(gap_spec(&arg, axis, pos)?)
            }
            "Cgaps" => Directive::ScaleColumns(factor(&self.sc.argument(name)?, pos)?),
            "Rgaps" => Directive::ScaleRows(factor(&self.sc.argument(name)?, pos)?),
            "preCDspace" => Directive::PreSpace(SpaceOp::Add(dim(self)?)),
            "postCDspace" => Directive::PostSpace(SpaceOp::Add(dim(self)?)),
            "PreCDSpace" => Directive::PreSpace(SpaceOp::Set(dim(self)?)),
            "PostCDSpace" => Directive::PostSpace(SpaceOp::Set(dim(self)?)),
            _ => return Ok(None),
        }))
    }

    /// Everything between `\CD` and `\endCD`.
    fn body(&mut self, cd_pos: SourcePos) -> PResult<Vec<Vec<Cell>>> {
        let mut rows: Vec<Vec<Cell>> = Vec::new();
        let mut row: Vec<Cell> = Vec::new();
        let mut cell = CellBuilder::default();
        let mut open_braces: Vec<SourcePos> = Vec::new();
        loop {
            let pos = self.sc.pos();
            let Some(c) = self.sc.peek() else {
                return self.sc.err(cd_pos, ParseErrorKind::UnterminatedCD);
            };
            match c {
                '&' if open_braces.is_empty() => {
                    self.sc.bump();
                    row.push(std::mem::take(&mut cell).finish(rows.len() + 1, row.len() + 1));
                }
                '{' => {
                    self.sc.bump();
                    open_braces.push(pos);
                    cell.content.push('{');
                }
                '}' => {
                    self.sc.bump();
                    if open_braces.pop().is_none() {
                        return self.sc.err(pos, ParseErrorKind::UnbalancedBraces);
                    }
                    cell.content.push('}');
                }
                '@' => {
                    let arrow = self.arrow(&mut cell.content)?;
                    cell.arrows.push(arrow);
                }
                '\\' => {
                    let name = self.sc.control_name();
                    match name.as_str() {
                        "endCD" | "\\" if !open_braces.is_empty() => {
                            return self.sc.err(open_braces[0], ParseErrorKind::UnbalancedBraces);
                        }
                        "endCD" => {
                            // \crcr: a final empty row after \\ is not a row
                            let drop_last = !rows.is_empty() && row.is_empty() && cell.is_blank();
                            if !drop_last {
                                row.push(cell.finish(rows.len() + 1, row.len() + 1));
                                rows.push(row);
                            }
                            return Ok(rows);
                        }
                        "\\" => {
                            row.push(std::mem::take(&mut cell).finish(rows.len() + 1, row.len() + 1));
                            rows.push(std::mem::take(&mut row));
                        }
                        "CD" => return self.sc.err(pos, ParseErrorKind::MultipleCD),
                        n if BODY_FORBIDDEN.contains(&n) => {
                            return self.sc.err(pos, ParseErrorKind::GapDirectiveInsideCD(name));
                        }
                        _ => {
                            cell.content.push('\\');
                            cell.content.push_str(&name);
                        }
                    }
                }
                c if c.is_whitespace() => {
                    self.sc.bump();
                    cell.content.push(' ');
                }
                c => {
                    self.sc.bump();
                    cell.content.push(c);
                }
            }
        }
    }

    /// `@(m,n)` or `@()options@(m,n)`; the scanner is at the `@`.
    fn arrow(&mut self, content: &mut String) -> PResult<ArrowSpec> {
        let start = self.sc.pos();
        self.sc.bump();
        match self.sc.peek() {
            Some('(') => {}
            other => {
                let shown = other.map(String::from).unwrap_or_default();
                return self.sc.err(start, ParseErrorKind::UnexpectedAt(shown));
            }
        }
        self.sc.bump();
        if self.sc.peek() == Some(')') {
            self.sc.bump();
            return self.options(start, content);
        }
        self.offsets(start, ArrowOptions::default())
    }

    /// Reads `m,n)` after `@(`.
    fn offsets(&mut self, at: SourcePos, options: ArrowOptions) -> PResult<ArrowSpec> {
        let text = self.sc.until(')', "@(").map_err(|_| ParseError {
            pos: at,
            kind: ParseErrorKind::MalformedArrow("unterminated".into()),
        })?;
        let bad = || ParseError { pos: at, kind: ParseErrorKind::MalformedArrow(text.clone()) };
        let (x, y) = text.split_once(',').ok_or_else(bad)?;
        let parse = |s: &str| s.split_whitespace().collect::<String>().parse::<i32>().map_err(|_| bad());
        Ok(ArrowSpec { xoff: parse(x)?, yoff: parse(y)?, options, cell: (0, 0), pos: at })
    }

    fn options(&mut self, group_pos: SourcePos, content: &mut String) -> PResult<ArrowSpec> {
        let mut o = ArrowOptions::default();
        let missing = ParseError { pos: group_pos, kind: ParseErrorKind::MissingArrowAfterOptions };
        loop {
            self.sc.skip_ws();
            let pos = self.sc.pos();
            match self.sc.peek() {
                None | Some('&') => return Err(missing),
                Some('@') => {
                    self.sc.bump();
                    if self.sc.peek() != Some('(') {
                        let shown = self.sc.peek().map(String::from).unwrap_or_default();
                        return self.sc.err(pos, ParseErrorKind::UnexpectedAt(shown));
                    }
                    self.sc.bump();
                    if self.sc.peek() == Some(')') {
                        self.sc.bump();
                        self.sc.warn(pos, "@() inside an option group ignored");
                        continue;
                    }
                    return self.offsets(pos, o);
                }
                Some('\\') => {
                    let name = self.sc.control_name();
                    let applied = self.option(&name, pos, &mut o)?;
                    if !applied {
                        self.sc.warn(pos, format!("repeated option \\{name} ignored"));
                    }
                }
                Some(c) => {
                    self.sc.bump();
                    content.push(c);
                    self.sc.warn(pos, "text inside an option group is typeset as cell content");
                }
            }
        }
    }

    /// Applies one option; `Ok(false)` when first-wins discarded it.
    fn option(&mut self, name: &str, pos: SourcePos, o: &mut ArrowOptions) -> PResult<bool> {
        let sc = &mut self.sc;
        let pair = |sc: &mut Scanner| -> PResult<(Factor, Factor)> {
            sc.skip_ws();
            if sc.peek() != Some('(') {
                return sc.err(pos, ParseErrorKind::MissingArgument(name.to_string()));
            }
            sc.bump();
            let a = sc.until(';', name)?;
            let b = sc.until(')', name)?;
            Ok((factor(&a, pos)?, factor(&b, pos)?))
        };
        let single = |sc: &mut Scanner, family: OptionFamily| -> PResult<char> {
            let arg = sc.argument(name)?;
            let mut chars = arg.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                (first, _) => sc.err(
                    pos,
                    ParseErrorKind::InvalidOptionChar { found: first.unwrap_or(' '), family },
                ),
            }
        };
        Ok(match name {
            "0" | "1" => {
                let (role, family) =
                    if name == "0" { (Role::Source, OptionFamily::Source) } else { (Role::Target, OptionFamily::Target) };
                let c = single(sc, family)?;
                let taken = match role {
                    Role::Source => o.src_decor != DecorCode::Default,
                    Role::Target => o.tgt_decor != DecorCode::Default,
                };
                // a repeated option is skipped before its character is checked
                if taken {
                    return Ok(false);
                }
                let code = DecorCode::from_char(c)
                    .ok_or(ParseError { pos, kind: ParseErrorKind::InvalidOptionChar { found: c, family } })?;
                o.set_decor(role, code)
            }
            "a" => {
                let c = single(sc, OptionFamily::Shaft)?;
                if o.shaft.is_some() {
                    return Ok(false);
                }
                let s = ShaftStyle::from_char(c).ok_or(ParseError {
                    pos,
                    kind: ParseErrorKind::InvalidOptionChar { found: c, family: OptionFamily::Shaft },
                })?;
                o.set_shaft(s)
            }
            "ds" => o.set_ds(pair(sc)?),
            "dtX" => o.set_dt_x(pair(sc)?),
            "dtY" => o.set_dt_y(pair(sc)?),
            "da" => o.set_da(integer(&sc.argument(name)?, pos)?),
            "dx" => o.set_dx(factor(&sc.argument(name)?, pos)?),
            "dX" => o.set_dx_target(factor(&sc.argument(name)?, pos)?),
            "dy" => o.set_dy(factor(&sc.argument(name)?, pos)?),
            "dY" => o.set_dy_target(factor(&sc.argument(name)?, pos)?),
            "p" => o.set_p(factor(&sc.argument(name)?, pos)?),
            "dL" => o.set_dl_upper(factor(&sc.argument(name)?, pos)?),
            "dl" => o.set_dl_lower(factor(&sc.argument(name)?, pos)?),
            "L" => o.set_label_upper(sc.argument(name)?.trim().to_string()),
            "l" => o.set_label_lower(sc.argument(name)?.trim().to_string()),
            "s" => o.set_short(),
            "uns" => o.set_unshort(),
            "\\" | "endCD" => return sc.err(pos, ParseErrorKind::MissingArrowAfterOptions),
            _ => return sc.err(pos, ParseErrorKind::UnknownOption(name.to_string())),
        })
    }
}

/// Parses a whole document.
pub fn parse_document(input: &str) -> Result<(Document, Diagnostics), ParseError> {
    let mut p = Parser { sc: Scanner::new(input) };
    let doc = p.document()?;
    Ok((doc, p.sc.warnings))
}

/// Parses a single arrow, `@(m,n)` or `@()options@(m,n)`, ignoring any
/// trailing text. The result is not attached to a cell.
pub fn parse_arrow(input: &str) -> Result<ArrowSpec, ParseError> {
    let mut p = Parser { sc: Scanner::new(input) };
    p.sc.skip_ws();
    if p.sc.peek() != Some('@') {
        return p.sc.err(p.sc.pos(), ParseErrorKind::UnexpectedAt(String::new()));
    }
    let mut stray = String::new();
    p.arrow(&mut stray)
}
