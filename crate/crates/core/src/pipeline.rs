//! Source text to scene, in one call.

use std::fmt;

use crate::ast::{Document, SourcePos};
use crate::fixdim::UnitRegistry;
use crate::geom::{layout_arrow, ArrowGeometry};
use crate::metrics::{measure_diagram, MetricsTables, TextMetricsProvider};
use crate::parser::{parse_document, Diagnostics};
use crate::scene::{assemble_document, GridFrame, Scene};

/// A fatal problem, with the position it is reported at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub pos: SourcePos,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub document: Document,
    pub tables: Option<MetricsTables>,
    pub frame: Option<GridFrame>,
    pub arrows: Vec<ArrowGeometry>,
    pub scene: Scene,
    pub warnings: Diagnostics,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub units: UnitRegistry,
    /// Treat warnings as errors.
    pub strict: bool,
}

const START: SourcePos = SourcePos { line: 1, col: 1 };

/// Parses, measures and lays out `src`. On failure, every error found is
/// returned; warnings only count under `strict`.
pub fn compile(src: &str, m: &dyn TextMetricsProvider, opts: &Options) -> Result<Compiled, Vec<Failure>> {
    let (document, warnings) = parse_document(src)
        .map_err(|e| vec![Failure { pos: e.pos, message: e.kind.to_string() }])?;
    if opts.strict && !warnings.is_empty() {
        return Err(warnings.iter().map(|w| Failure { pos: w.pos, message: w.message.clone() }).collect());
    }
    let fail = |message: String| vec![Failure { pos: START, message }];
    let tables = match &document.diagram {
        Some(d) => Some(measure_diagram(d, m, &opts.units).map_err(|e| fail(e.to_string()))?),
        None => None,
    };
    let mut arrows = Vec::new();
    let mut errors = Vec::new();
    if let (Some(d), Some(t)) = (&document.diagram, &tables) {
        for spec in d.rows.iter().flatten().flat_map(|c| c.arrows.iter()) {
            match layout_arrow(spec, t, m) {
                Ok(g) => arrows.push(g),
                Err(e) => errors.push(Failure { pos: e.pos, message: e.kind.to_string() }),
            }
        }
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    let frame = tables.as_ref().map(GridFrame::new).transpose().map_err(|e| fail(e.to_string()))?;
    let units = tables.as_ref().map_or(&opts.units, |t| &t.units);
    let scene = assemble_document(&document, tables.as_ref(), &arrows, units, m).map_err(|e| fail(e.to_string()))?;
    Ok(Compiled { document, tables, frame, arrows, scene, warnings })
}
