//! Command-line driver.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::dump::emit_geometry;
use crate::fixdim::{Factor, UnitRegistry};
use crate::metrics::FixedBoxMetrics;
use crate::pipeline::{compile, Options};
use crate::svg::emit_svg;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Svg,
    Geom,
    Both,
}

/// Compile a commutative diagram to SVG and/or a geometry dump.
#[derive(Clone, Debug, Parser)]
#[command(name = "cdiagram", version)]
pub struct RunConfig {
    /// Diagram source file.
    pub input: PathBuf,
    /// Output file. With `--format both` the extension is replaced by
    /// `.svg` and `.geom`. Defaults to the input path.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "svg")]
    pub format: Format,
    /// Glyph box metrics file (`default w h d` / `glyph <codepoint> w h d`, in pt).
    #[arg(long)]
    pub metrics: Option<PathBuf>,
    /// Scales the standard column gap and hunit, before the document's own directives.
    #[arg(long, value_name = "F")]
    pub cgap_scale: Option<Factor>,
    /// Scales the standard row gap and vunit.
    #[arg(long, value_name = "F")]
    pub rgap_scale: Option<Factor>,
    /// Turn warnings into errors.
    #[arg(long)]
    pub strict: bool,
    /// Points per SVG pixel.
    #[arg(long, default_value = "1")]
    pub scale: Factor,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_DIAGRAM: i32 = 1;
pub const EXIT_IO: i32 = 2;

impl RunConfig {
    /// Output paths in write order.
    pub fn outputs(&self) -> Vec<(Format, PathBuf)> {
        let base = self.output.clone().unwrap_or_else(|| self.input.clone());
        let with = |ext: &str| base.with_extension(ext);
        match (self.format, &self.output) {
            (Format::Svg, Some(p)) => vec![(Format::Svg, p.clone())],
            (Format::Geom, Some(p)) => vec![(Format::Geom, p.clone())],
            (Format::Svg, None) => vec![(Format::Svg, with("svg"))],
            (Format::Geom, None) => vec![(Format::Geom, with("geom"))],
            (Format::Both, _) => vec![(Format::Svg, with("svg")), (Format::Geom, with("geom"))],
        }
    }
}

fn units(cfg: &RunConfig) -> Result<UnitRegistry, String> {
    let mut u = UnitRegistry::default();
    if let Some(f) = cfg.cgap_scale {
        u = u.cgaps(f).map_err(|e| format!("--cgap-scale: {e}"))?;
    }
    if let Some(f) = cfg.rgap_scale {
        u = u.rgaps(f).map_err(|e| format!("--rgap-scale: {e}"))?;
    }
    Ok(u)
}

/// Runs one compilation, writing diagnostics to `err`. Returns the exit status.
pub fn run(cfg: &RunConfig, err: &mut dyn Write) -> i32 {
    let name = cfg.input.display().to_string();
    let src = match fs::read_to_string(&cfg.input) {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(err, "{name}: {e}");
            return EXIT_IO;
        }
    };
    let metrics = match &cfg.metrics {
        None => FixedBoxMetrics::default(),
        Some(p) => {
            let text = match fs::read_to_string(p) {
                Ok(t) => t,
                Err(e) => {
                    let _ = writeln!(err, "{}: {e}", p.display());
                    return EXIT_IO;
                }
            };
            match FixedBoxMetrics::parse(&text) {
                Ok(m) => m,
                Err(e) => {
                    let _ = writeln!(err, "{}:{}:1: {}", p.display(), e.line, e.message);
                    return EXIT_DIAGRAM;
                }
            }
        }
    };
    let units = match units(cfg) {
        Ok(u) => u,
        Err(e) => {
            let _ = writeln!(err, "{name}: {e}");
            return EXIT_DIAGRAM;
        }
    };
    let out = match compile(&src, &metrics, &Options { units, strict: cfg.strict }) {
        Ok(c) => c,
        Err(failures) => {
            for f in failures {
                let _ = writeln!(err, "{name}:{f}");
            }
            return EXIT_DIAGRAM;
        }
    };
    for w in &out.warnings {
        let _ = writeln!(err, "{name}:{w}");
    }
    for (fmt, path) in cfg.outputs() {
        let bytes = match fmt {
            Format::Svg => emit_svg(&out.scene, cfg.scale),
            _ => emit_geometry(&out.arrows, out.frame.as_ref()),
        };
        if let Err(e) = write_file(&path, &bytes) {
            let _ = writeln!(err, "{}: {e}", path.display());
            return EXIT_IO;
        }
    }
    EXIT_OK
}

fn write_file(path: &Path, bytes: &str) -> std::io::Result<()> {
    fs::write(path, bytes)
}
