//! Font resolution, text measurement, word wrap, and glyph drawing.
//!
//! Family names resolve through a catalog of font files plus an alias
//! table; anything unresolved falls back to the bundled DejaVu Sans
//! faces (the specimens name proprietary fonts that cannot ship).
//! Rasterization is grayscale anti-aliased with hinting and kerning
//! disabled, and per-glyph positions round half-up, so identical inputs
//! produce identical pixels on every platform.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Mutex;

use thiserror::Error;

use crate::model::{Align, Color, FontSpec, TextElement};

use super::raster::Painter;

/// Glyphs are never rasterized above this pixel size; absurd sizes from
/// hostile models would otherwise allocate unbounded bitmaps.
const MAX_GLYPH_PX: u32 = 4096;

static BUNDLED_REGULAR: &[u8] = include_bytes!("../../fonts/DejaVuSans.ttf");
static BUNDLED_BOLD: &[u8] = include_bytes!("../../fonts/DejaVuSans-Bold.ttf");

#[derive(Debug, Error)]
pub enum FontError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to load font {path}: {message}")]
    Load { path: String, message: String },
    #[error("fonts.tsv line {line}: expected family<TAB>file")]
    BadAlias { line: usize },
    #[error("fonts.tsv names unknown file \"{file}\"")]
    UnknownAliasTarget { file: String },
}

type GlyphKey = (usize, char, u32);
type RasterizedGlyph = (fontdue::Metrics, Vec<u8>);

struct Face {
    /// Lowercase file stem, e.g. "dejavusans".
    key: String,
    font: fontdue::Font,
}

/// Directory of font files plus an alias table mapping DSL family names
/// to faces. Always contains the bundled fallback faces.
pub struct FontCatalog {
    faces: Vec<Face>,
    /// Lowercased family name -> face index.
    aliases: HashMap<String, usize>,
    fallback_regular: usize,
    fallback_bold: usize,
    /// (face, char, size) -> rasterized coverage, shared across renders.
    glyph_cache: Mutex<HashMap<GlyphKey, RasterizedGlyph>>,
}

impl fmt::Debug for FontCatalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FontCatalog")
            .field("faces", &self.faces.len())
            .finish()
    }
}

impl FontCatalog {
    /// Catalog with only the bundled DejaVu Sans faces.
    pub fn bundled() -> Self {
        let settings = fontdue::FontSettings::default();
        let regular = fontdue::Font::from_bytes(BUNDLED_REGULAR, settings)
            .expect("bundled regular face loads");
        let bold =
            fontdue::Font::from_bytes(BUNDLED_BOLD, settings).expect("bundled bold face loads");
        let faces = vec![
            Face {
                key: "dejavusans".into(),
                font: regular,
            },
            Face {
                key: "dejavusans-bold".into(),
                font: bold,
            },
        ];
        let mut aliases = HashMap::new();
        aliases.insert("dejavu sans".to_string(), 0);
        aliases.insert("dejavusans".to_string(), 0);
        aliases.insert("dejavusans-bold".to_string(), 1);
        Self {
            faces,
            aliases,
            fallback_regular: 0,
            fallback_bold: 1,
            glyph_cache: Mutex::new(HashMap::new()),
        }
    }

    /// Bundled faces plus every `.ttf`/`.otf` in `dir`, with optional
    /// `fonts.tsv` alias lines of the form `family<TAB>file`.
    pub fn load_dir(dir: &Path) -> Result<Self, FontError> {
        let mut catalog = Self::bundled();
        let entries = std::fs::read_dir(dir).map_err(|source| FontError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        let mut paths: Vec<_> = entries
            .filter_map(|e| e.ok())
            .map(|e| e.path())
            .filter(|p| {
                matches!(
                    p.extension().and_then(|e| e.to_str()).map(|e| e.to_ascii_lowercase()),
                    Some(ref ext) if ext == "ttf" || ext == "otf"
                )
            })
            .collect();
        paths.sort();
        for path in paths {
            let bytes = std::fs::read(&path).map_err(|source| FontError::Io {
                path: path.display().to_string(),
                source,
            })?;
            let font = fontdue::Font::from_bytes(bytes, fontdue::FontSettings::default()).map_err(
                |message| FontError::Load {
                    path: path.display().to_string(),
                    message: message.to_string(),
                },
            )?;
            let key = path
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or_default()
                .to_ascii_lowercase();
            catalog.aliases.insert(key.clone(), catalog.faces.len());
            catalog.faces.push(Face { key, font });
        }

        let tsv = dir.join("fonts.tsv");
        if tsv.exists() {
            let text = std::fs::read_to_string(&tsv).map_err(|source| FontError::Io {
                path: tsv.display().to_string(),
                source,
            })?;
            for (i, line) in text.lines().enumerate() {
                if line.trim().is_empty() || line.starts_with('#') {
                    continue;
                }
                let (family, file) = line
                    .split_once('\t')
                    .ok_or(FontError::BadAlias { line: i + 1 })?;
                let key = Path::new(file.trim())
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or(file.trim())
                    .to_ascii_lowercase();
                let index = catalog
                    .faces
                    .iter()
                    .position(|f| f.key == key)
                    .ok_or_else(|| FontError::UnknownAliasTarget {
                        file: file.trim().into(),
                    })?;
                catalog
                    .aliases
                    .insert(family.trim().to_ascii_lowercase(), index);
            }
        }
        Ok(catalog)
    }

    /// Bundled fallback face for chart annotations.
    pub fn fallback(&self, bold: bool) -> usize {
        if bold {
            self.fallback_bold
        } else {
            self.fallback_regular
        }
    }

    /// Face index for a font spec: exact family (case-insensitive), then
    /// alias table, then the bundled fallback matching the weight.
    pub fn resolve(&self, spec: &FontSpec) -> usize {
        let family = spec.family.to_ascii_lowercase();
        if let Some(&index) = self.aliases.get(&family) {
            return index;
        }
        if spec.weight.is_bold() {
            self.fallback_bold
        } else {
            self.fallback_regular
        }
    }

    /// Whether the face has a real glyph (not .notdef) for `ch`.
    fn has_glyph(&self, face: usize, ch: char) -> bool {
        self.faces[face].font.lookup_glyph_index(ch) != 0
    }

    /// The face that will actually draw `ch`: the resolved face, or the
    /// bundled fallback, or (missing everywhere) the fallback's
    /// replacement glyph. The flag reports that last case.
    fn glyph_face(&self, face: usize, bold: bool, ch: char) -> (usize, bool) {
        if self.has_glyph(face, ch) {
            return (face, false);
        }
        let fallback = if bold {
            self.fallback_bold
        } else {
            self.fallback_regular
        };
        if self.has_glyph(fallback, ch) {
            (fallback, false)
        } else {
            (fallback, true)
        }
    }

    fn metrics(&self, face: usize, ch: char, size: u32) -> fontdue::Metrics {
        self.faces[face].font.metrics(ch, clamp_size(size) as f32)
    }

    fn rasterize(&self, face: usize, ch: char, size: u32) -> RasterizedGlyph {
        let size = clamp_size(size);
        let mut cache = self.glyph_cache.lock().unwrap();
        cache
            .entry((face, ch, size))
            .or_insert_with(|| self.faces[face].font.rasterize(ch, size as f32))
            .clone()
    }

    /// Advance width of `text` in pixels at `size`, summing per-glyph
    /// advances (no kerning), with per-char fallback.
    pub fn measure(&self, face: usize, bold: bool, size: u32, text: &str) -> f32 {
        text.chars()
            .map(|ch| {
                let (actual, _) = self.glyph_face(face, bold, ch);
                self.metrics(actual, ch, size).advance_width
            })
            .sum()
    }
}

fn clamp_size(size: u32) -> u32 {
    size.min(MAX_GLYPH_PX)
}

/// One wrapped line before placement.
#[derive(Debug, Clone, PartialEq)]
pub struct WrappedLine {
    pub text: String,
    /// Measured advance, rounded up to whole pixels.
    pub advance: u32,
}

/// A placed line: `baseline_x` is the left edge of the first glyph,
/// `baseline_y` the baseline. Centered lines may start left of the
/// canvas; drawing clips.
#[derive(Debug, Clone, PartialEq)]
pub struct LineBox {
    pub text: String,
    pub baseline_x: i64,
    pub baseline_y: i64,
    pub advance: u32,
}

/// Greedy first-fit word wrap on whitespace.
///
/// Without a maxwidth the value is a single line. A lone word wider than
/// maxwidth occupies its own line and is reported in the warning list.
pub fn wrap_text(
    value: &str,
    font: &FontSpec,
    maxwidth: Option<u32>,
    catalog: &FontCatalog,
) -> (Vec<WrappedLine>, Vec<String>) {
    let face = catalog.resolve(font);
    let bold = font.weight.is_bold();
    let measure = |text: &str| catalog.measure(face, bold, font.size, text);
    let mut warnings = Vec::new();

    let Some(maxwidth) = maxwidth else {
        let advance = measure(value).ceil() as u32;
        return (
            vec![WrappedLine {
                text: value.to_string(),
                advance,
            }],
            warnings,
        );
    };

    let limit = maxwidth as f32;
    let mut lines: Vec<WrappedLine> = Vec::new();
    let mut current = String::new();
    for word in value.split_whitespace() {
        if current.is_empty() {
            if measure(word) > limit {
                lines.push(WrappedLine {
                    text: word.to_string(),
                    advance: measure(word).ceil() as u32,
                });
                warnings.push(format!("word \"{word}\" is wider than maxwidth {maxwidth}"));
            } else {
                current.push_str(word);
            }
            continue;
        }
        let candidate = format!("{current} {word}");
        if measure(&candidate) <= limit {
            current = candidate;
        } else {
            let advance = measure(&current).ceil() as u32;
            lines.push(WrappedLine {
                text: std::mem::take(&mut current),
                advance,
            });
            if measure(word) > limit {
                lines.push(WrappedLine {
                    text: word.to_string(),
                    advance: measure(word).ceil() as u32,
                });
                warnings.push(format!("word \"{word}\" is wider than maxwidth {maxwidth}"));
            } else {
                current.push_str(word);
            }
        }
    }
    if !current.is_empty() {
        let advance = measure(&current).ceil() as u32;
        lines.push(WrappedLine {
            text: current,
            advance,
        });
    }
    if lines.is_empty() {
        lines.push(WrappedLine {
            text: String::new(),
            advance: 0,
        });
    }
    (lines, warnings)
}

/// Default line pitch when the element gives no `lineheight`.
pub fn default_lineheight(size: u32) -> u32 {
    (size as f32 * 1.2).ceil() as u32
}

/// Anchors wrapped lines: `position.y` is the first line's baseline;
/// align=left puts each line's left edge at `position.x`, align=center
/// its horizontal center.
pub fn place_text(element: &TextElement, lines: &[WrappedLine]) -> Vec<LineBox> {
    let lineheight = element
        .lineheight
        .unwrap_or_else(|| default_lineheight(element.font.size)) as i64;
    lines
        .iter()
        .enumerate()
        .map(|(i, line)| {
            let baseline_y = element.position.y as i64 + i as i64 * lineheight;
            let baseline_x = match element.align {
                Align::Left => element.position.x as i64,
                Align::Center => element.position.x as i64 - (line.advance as i64) / 2,
            };
            LineBox {
                text: line.text.clone(),
                baseline_x,
                baseline_y,
                advance: line.advance,
            }
        })
        .collect()
}

/// Draws one placed line. Glyph x positions accumulate fractional
/// advances and round half-up at each glyph; missing glyphs render the
/// fallback's replacement glyph and produce a warning.
#[allow(clippy::too_many_arguments)]
pub fn draw_line(
    painter: &mut Painter<'_>,
    catalog: &FontCatalog,
    face: usize,
    bold: bool,
    size: u32,
    color: Color,
    line: &LineBox,
    warnings: &mut Vec<String>,
) {
    let mut pen = line.baseline_x as f32;
    for ch in line.text.chars() {
        let (actual_face, missing) = catalog.glyph_face(face, bold, ch);
        if missing {
            warnings.push(format!("no glyph for {ch:?} in any available font"));
        }
        let (metrics, coverage) = catalog.rasterize(actual_face, ch, size);
        let glyph_x = (pen + metrics.xmin as f32 + 0.5).floor() as i64;
        let glyph_top = line.baseline_y - metrics.ymin as i64 - metrics.height as i64;
        for row in 0..metrics.height {
            for col in 0..metrics.width {
                let alpha = coverage[row * metrics.width + col];
                if alpha > 0 {
                    painter.blend_pixel(glyph_x + col as i64, glyph_top + row as i64, color, alpha);
                }
            }
        }
        pen += metrics.advance_width;
    }
}

/// Wrap, place, and draw an element's text in one call.
pub fn draw_text_element(
    painter: &mut Painter<'_>,
    catalog: &FontCatalog,
    element: &TextElement,
    warnings: &mut Vec<String>,
) {
    let (lines, wrap_warnings) =
        wrap_text(&element.value, &element.font, element.maxwidth, catalog);
    for w in wrap_warnings {
        warnings.push(format!("{}: {w}", element.id));
    }
    let face = catalog.resolve(&element.font);
    let bold = element.font.weight.is_bold();
    for line in place_text(element, &lines) {
        draw_line(
            painter,
            catalog,
            face,
            bold,
            element.font.size,
            element.color,
            &line,
            warnings,
        );
    }
}
