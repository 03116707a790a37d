//! Parser for the infographic model syntax.
//!
//! [`parse_model`] turns source text into a validated [`InfographicModel`]
//! or a list of [`Diagnostic`]s. The syntax is a YAML-compatible subset
//! described in `docs/DSL.md`: top-level document keys (`bgcolor`,
//! `bgsize`, `head`, `foot`), numbered element keys (`box1`, `text2`,
//! `piechart1`, ...) with one nesting level of properties, and a second
//! level for section title/subtitle and chart data.

mod canon;
mod tokens;
mod tree;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::model::{
    Account, Align, Background, BarChart, BoxElement, ChartDatum, Color, DataValue, Dimensions,
    Element, ImageElement, InfographicModel, Picturegraph, PieChart, PieStyle, Point, Section,
    SectionKind, TextElement, TextRole,
};

pub use canon::canonicalize;
pub use tokens::{
    parse_color, parse_decimal, parse_dimensions, parse_font, parse_on_off, parse_point, TokenError,
};
use tree::Node;

/// Diagnostic severity: errors fail the parse, warnings do not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

/// A positioned message about the source text or model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    /// 1-based source line; 1 for model-level diagnostics with no anchor.
    pub line: usize,
    pub key_path: String,
    pub message: String,
}

impl Diagnostic {
    fn error(line: usize, key_path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Error,
            line,
            key_path: key_path.into(),
            message: message.into(),
        }
    }

    fn warning(line: usize, key_path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            severity: Severity::Warning,
            line,
            key_path: key_path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{kind} at line {} ({}): {}",
            self.line, self.key_path, self.message
        )
    }
}

/// A non-empty collection of diagnostics carrying at least one error.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<Diagnostic>);

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// A successfully parsed model plus any non-fatal warnings.
#[derive(Debug, Clone)]
pub struct ParsedModel {
    pub model: InfographicModel,
    pub warnings: Vec<Diagnostic>,
}

/// Accepted misspellings of `bgsize` found in published listings. The
/// third one contains a Cyrillic `е`.
const BGSIZE_ALIASES: [&str; 3] = ["bgszize", "bgsizes", "bgsiz\u{0435}"];

const ELEMENT_BASES: [&str; 7] = [
    "box",
    "image",
    "titletext",
    "text",
    "piechart",
    "barchart",
    "picturegraph",
];

fn element_base(key: &str) -> Option<&'static str> {
    for base in ELEMENT_BASES {
        if let Some(rest) = key.strip_prefix(base) {
            if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                return Some(base);
            }
        }
    }
    None
}

/// Whether a node's scalar value is the literal `off` (absence marker).
fn is_off(node: &Node) -> bool {
    node.value.as_deref() == Some("off") && node.children.is_empty()
}

/// Parses source text into a model. All ten published specimen listings
/// parse with zero errors (spelling-alias warnings allowed).
pub fn parse_model(source: &str) -> Result<ParsedModel, Diagnostics> {
    let (roots, mut diagnostics) = tree::build_tree(source);
    let mut interp = Interp {
        diagnostics: &mut diagnostics,
        ids: BTreeMap::new(),
    };

    let mut canvas: Option<Dimensions> = None;
    let mut background: Option<Background> = None;
    let mut background_line = 0usize;
    let mut head: Option<Section> = None;
    let mut foot: Option<Section> = None;
    let mut seen_head = false;
    let mut seen_foot = false;
    let mut body: Vec<Element> = Vec::new();

    for node in &roots {
        match node.key.as_str() {
            "bgcolor" | "bgimage" | "bgpattern" => {
                if let Some(bg) = interp.background_value(node, &node.key) {
                    if background.is_some() {
                        interp.diagnostics.push(Diagnostic::warning(
                            node.line,
                            &node.key,
                            format!("duplicate background (previous on line {background_line}); last one wins"),
                        ));
                    }
                    background = Some(bg);
                    background_line = node.line;
                }
            }
            key if key == "bgsize" || BGSIZE_ALIASES.contains(&key) => {
                if key != "bgsize" {
                    interp.diagnostics.push(Diagnostic::warning(
                        node.line,
                        key,
                        "accepted as an alias of bgsize",
                    ));
                }
                if let Some(token) = interp.scalar(node, key) {
                    match parse_dimensions(&token) {
                        Ok(dims) => {
                            if canvas.is_some() {
                                interp.diagnostics.push(Diagnostic::warning(
                                    node.line,
                                    key,
                                    "duplicate bgsize; last one wins",
                                ));
                            }
                            canvas = Some(dims);
                        }
                        Err(e) => interp.push_token_error(node.line, key, e),
                    }
                }
            }
            "head" => {
                if seen_head {
                    interp.diagnostics.push(Diagnostic::warning(
                        node.line,
                        "head",
                        "duplicate head section; last one wins",
                    ));
                }
                seen_head = true;
                head = interp.section(node, SectionKind::Head);
            }
            "foot" => {
                if seen_foot {
                    interp.diagnostics.push(Diagnostic::warning(
                        node.line,
                        "foot",
                        "duplicate foot section; last one wins",
                    ));
                }
                seen_foot = true;
                foot = interp.section(node, SectionKind::Foot);
            }
            key => match element_base(key) {
                Some(base) => {
                    if let Some(element) = interp.element(node, base) {
                        body.push(element);
                    }
                }
                None => {
                    interp.diagnostics.push(Diagnostic::error(
                        node.line,
                        key,
                        "unknown key at document level",
                    ));
                }
            },
        }
    }

    if canvas.is_none() {
        interp.diagnostics.push(Diagnostic::error(
            1,
            "bgsize",
            "missing mandatory key (canvas size)",
        ));
    }
    let background = background.unwrap_or_else(|| {
        diagnostics.push(Diagnostic::warning(
            1,
            "bgcolor",
            "no background specified; defaulting to white",
        ));
        Background::Color(Color::WHITE)
    });

    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(Diagnostics(diagnostics));
    }

    let model =
        InfographicModel::new(canvas.unwrap(), background, head, foot, body).map_err(|e| {
            let mut all = diagnostics.clone();
            all.push(Diagnostic::error(1, e.field, e.message));
            Diagnostics(all)
        })?;
    Ok(ParsedModel {
        model,
        warnings: diagnostics,
    })
}

/// Totality entry point: arbitrary bytes are decoded lossily and parsed.
pub fn parse_model_bytes(source: &[u8]) -> Result<ParsedModel, Diagnostics> {
    parse_model(&String::from_utf8_lossy(source))
}

struct Interp<'a> {
    diagnostics: &'a mut Vec<Diagnostic>,
    /// Element id -> first defining line, for duplicate detection.
    ids: BTreeMap<String, usize>,
}

impl Interp<'_> {
    fn push_token_error(&mut self, line: usize, path: &str, e: TokenError) {
        self.diagnostics
            .push(Diagnostic::error(line, path, e.to_string()));
    }

    /// Scalar value of a node, or an error when it has children instead.
    fn scalar(&mut self, node: &Node, path: &str) -> Option<String> {
        if !node.children.is_empty() {
            self.diagnostics.push(Diagnostic::error(
                node.line,
                path,
                "expected a value, found a block",
            ));
            return None;
        }
        match &node.value {
            Some(v) => Some(v.clone()),
            None => {
                self.diagnostics
                    .push(Diagnostic::error(node.line, path, "expected a value"));
                None
            }
        }
    }

    fn background_value(&mut self, node: &Node, path: &str) -> Option<Background> {
        if is_off(node) {
            return None;
        }
        let token = self.scalar(node, path)?;
        match node.key.as_str() {
            "bgcolor" => match parse_color(&token) {
                Ok(c) => Some(Background::Color(c)),
                Err(e) => {
                    self.push_token_error(node.line, path, e);
                    None
                }
            },
            "bgimage" => Some(Background::Image(token)),
            "bgpattern" => Some(Background::Pattern(token)),
            _ => unreachable!("caller dispatches on background keys"),
        }
    }

    /// Collects an element node's properties, flagging unknown keys and
    /// duplicate subkeys (last wins, with a warning).
    fn props<'n>(
        &mut self,
        node: &'n Node,
        path: &str,
        allowed: &[&str],
    ) -> BTreeMap<String, &'n Node> {
        let mut map: BTreeMap<String, &Node> = BTreeMap::new();
        for child in &node.children {
            let child_path = format!("{path}.{}", child.key);
            if !allowed.contains(&child.key.as_str()) {
                self.diagnostics
                    .push(Diagnostic::error(child.line, child_path, "unknown key"));
                continue;
            }
            if map.insert(child.key.clone(), child).is_some() {
                self.diagnostics.push(Diagnostic::warning(
                    child.line,
                    child_path,
                    "duplicate key; last one wins",
                ));
            }
        }
        map
    }

    /// Required property lookup. `off` only marks absence on optional
    /// keys, so here it is taken literally (and usually fails the token
    /// grammar downstream).
    fn required<'n>(
        &mut self,
        map: &BTreeMap<String, &'n Node>,
        key: &str,
        path: &str,
        line: usize,
    ) -> Option<&'n Node> {
        match map.get(key) {
            Some(node) => Some(node),
            None => {
                self.diagnostics.push(Diagnostic::error(
                    line,
                    format!("{path}.{key}"),
                    "missing mandatory subkey",
                ));
                None
            }
        }
    }

    fn optional<'n>(map: &BTreeMap<String, &'n Node>, key: &str) -> Option<&'n Node> {
        map.get(key).copied().filter(|n| !is_off(n))
    }

    fn scalar_prop(&mut self, node: &Node, path: &str) -> Option<String> {
        let full = format!("{path}.{}", node.key);
        self.scalar(node, &full)
    }

    fn point_prop(&mut self, node: &Node, path: &str) -> Option<Point> {
        let token = self.scalar_prop(node, path)?;
        match parse_point(&token) {
            Ok(p) => Some(p),
            Err(e) => {
                self.push_token_error(node.line, &format!("{path}.{}", node.key), e);
                None
            }
        }
    }

    fn dimensions_prop(&mut self, node: &Node, path: &str) -> Option<Dimensions> {
        let token = self.scalar_prop(node, path)?;
        match parse_dimensions(&token) {
            Ok(d) => Some(d),
            Err(e) => {
                self.push_token_error(node.line, &format!("{path}.{}", node.key), e);
                None
            }
        }
    }

    fn color_prop(&mut self, node: &Node, path: &str) -> Option<Color> {
        let token = self.scalar_prop(node, path)?;
        match parse_color(&token) {
            Ok(c) => Some(c),
            Err(e) => {
                self.push_token_error(node.line, &format!("{path}.{}", node.key), e);
                None
            }
        }
    }

    fn integer_prop(&mut self, node: &Node, path: &str, min: u32) -> Option<u32> {
        let token = self.scalar_prop(node, path)?;
        match token.trim().parse::<u32>() {
            Ok(n) if n >= min => Some(n),
            _ => {
                self.diagnostics.push(Diagnostic::error(
                    node.line,
                    format!("{path}.{}", node.key),
                    format!("\"{token}\": expected an integer >= {min}"),
                ));
                None
            }
        }
    }

    fn on_off_prop(&mut self, node: &Node, path: &str) -> Option<bool> {
        let token = self.scalar_prop(node, path)?;
        match parse_on_off(&token) {
            Ok(b) => Some(b),
            Err(e) => {
                self.push_token_error(node.line, &format!("{path}.{}", node.key), e);
                None
            }
        }
    }

    /// Background subkeys of an element or section, scanned in source
    /// order; several present means the last one wins with a warning.
    fn background_prop(&mut self, node: &Node, path: &str) -> Option<Background> {
        let mut found: Option<(usize, Background)> = None;
        for child in &node.children {
            if matches!(child.key.as_str(), "bgcolor" | "bgimage" | "bgpattern") {
                let child_path = format!("{path}.{}", child.key);
                if is_off(child) {
                    continue;
                }
                if let Some(bg) = self.background_value(child, &child_path) {
                    if let Some((prev_line, _)) = found {
                        self.diagnostics.push(Diagnostic::warning(
                            child.line,
                            child_path,
                            format!("duplicate background (previous on line {prev_line}); last one wins"),
                        ));
                    }
                    found = Some((child.line, bg));
                }
            }
        }
        found.map(|(_, bg)| bg)
    }

    fn register_id(&mut self, id: &str, line: usize) -> bool {
        if let Some(first) = self.ids.get(id) {
            self.diagnostics.push(Diagnostic::error(
                line,
                id,
                format!("duplicate element id (first defined on line {first})"),
            ));
            false
        } else {
            self.ids.insert(id.to_string(), line);
            true
        }
    }

    fn element(&mut self, node: &Node, base: &str) -> Option<Element> {
        if !self.register_id(&node.key, node.line) {
            return None;
        }
        if node.children.is_empty() {
            self.diagnostics.push(Diagnostic::error(
                node.line,
                &node.key,
                "element has no properties",
            ));
            return None;
        }
        match base {
            "box" => self.box_element(node).map(Element::Box),
            "image" => self.image_element(node).map(Element::Image),
            "text" => self
                .text_element(node, node.key.clone(), TextRole::Body)
                .map(Element::Text),
            "titletext" => self
                .text_element(node, node.key.clone(), TextRole::Title)
                .map(Element::Text),
            "piechart" => self.pie_chart(node).map(Element::Pie),
            "barchart" => self.bar_chart(node).map(Element::Bar),
            "picturegraph" => self.picturegraph(node).map(Element::Picturegraph),
            _ => unreachable!("element_base returns known bases"),
        }
    }

    fn box_element(&mut self, node: &Node) -> Option<BoxElement> {
        let path = node.key.clone();
        let map = self.props(
            node,
            &path,
            &["position", "size", "bgcolor", "bgimage", "bgpattern"],
        );
        let position = self
            .required(&map, "position", &path, node.line)
            .and_then(|n| self.point_prop(n, &path));
        let size = self
            .required(&map, "size", &path, node.line)
            .and_then(|n| self.dimensions_prop(n, &path));
        let background = self.background_prop(node, &path);
        if background.is_none() {
            self.diagnostics.push(Diagnostic::error(
                node.line,
                format!("{path}.bgcolor"),
                "box needs a bgcolor, bgimage, or bgpattern",
            ));
        }
        Some(BoxElement {
            id: path,
            position: position?,
            size: size?,
            background: background?,
        })
    }

    fn image_element(&mut self, node: &Node) -> Option<ImageElement> {
        let path = node.key.clone();
        let map = self.props(node, &path, &["position", "size", "src"]);
        let position = self
            .required(&map, "position", &path, node.line)
            .and_then(|n| self.point_prop(n, &path));
        let size = self
            .required(&map, "size", &path, node.line)
            .and_then(|n| self.dimensions_prop(n, &path));
        let source = self
            .required(&map, "src", &path, node.line)
            .and_then(|n| self.scalar_prop(n, &path));
        match ImageElement::new(path.clone(), position?, size?, source?) {
            Ok(image) => Some(image),
            Err(e) => {
                self.diagnostics.push(Diagnostic::error(
                    node.line,
                    format!("{path}.{}", e.field),
                    e.message,
                ));
                None
            }
        }
    }

    fn text_element(&mut self, node: &Node, id: String, role: TextRole) -> Option<TextElement> {
        let path = id.clone();
        let map = self.props(
            node,
            &path,
            &[
                "value",
                "font",
                "color",
                "position",
                "align",
                "maxwidth",
                "lineheight",
            ],
        );
        let value = self
            .required(&map, "value", &path, node.line)
            .and_then(|n| self.scalar_prop(n, &path));
        let font = self.required(&map, "font", &path, node.line).and_then(|n| {
            let token = self.scalar_prop(n, &path)?;
            match parse_font(&token) {
                Ok(f) => Some(f),
                Err(e) => {
                    self.push_token_error(n.line, &format!("{path}.font"), e);
                    None
                }
            }
        });
        let position = self
            .required(&map, "position", &path, node.line)
            .and_then(|n| self.point_prop(n, &path));
        // Text color is optional: several published listings omit it.
        let color = match Self::optional(&map, "color") {
            Some(n) => self.color_prop(n, &path)?,
            None => Color::BLACK,
        };
        let align = match Self::optional(&map, "align") {
            Some(n) => {
                let token = self.scalar_prop(n, &path)?;
                match token.trim() {
                    "left" => Align::Left,
                    "center" => Align::Center,
                    other => {
                        self.diagnostics.push(Diagnostic::error(
                            n.line,
                            format!("{path}.align"),
                            format!("\"{other}\": expected left or center"),
                        ));
                        return None;
                    }
                }
            }
            None => Align::Left,
        };
        let maxwidth = match Self::optional(&map, "maxwidth") {
            Some(n) => Some(self.integer_prop(n, &path, 1)?),
            None => None,
        };
        let lineheight = match Self::optional(&map, "lineheight") {
            Some(n) => Some(self.integer_prop(n, &path, 1)?),
            None => None,
        };
        match TextElement::new(
            id, role, value?, font?, color, position?, align, maxwidth, lineheight,
        ) {
            Ok(text) => Some(text),
            Err(e) => {
                self.diagnostics.push(Diagnostic::error(
                    node.line,
                    format!("{path}.{}", e.field),
                    e.message,
                ));
                None
            }
        }
    }

    /// Chart data block: ordered `label: value` pairs where a value is a
    /// decimal or an indicator placeholder `{{name}}`.
    fn chart_data(&mut self, node: &Node, path: &str) -> Option<Vec<ChartDatum>> {
        let data_path = format!("{path}.data");
        if node.value.is_some() {
            self.diagnostics.push(Diagnostic::error(
                node.line,
                &data_path,
                "expected a block of label: value pairs",
            ));
            return None;
        }
        if node.children.is_empty() {
            self.diagnostics.push(Diagnostic::error(
                node.line,
                &data_path,
                "data must be non-empty",
            ));
            return None;
        }
        let mut data = Vec::new();
        for child in &node.children {
            let entry_path = format!("{data_path}.{}", child.key);
            let Some(token) = self.scalar(child, &entry_path) else {
                continue;
            };
            match parse_data_value(&token) {
                Ok(value) => data.push(ChartDatum {
                    label: child.key.clone(),
                    value,
                }),
                Err(e) => self.push_token_error(child.line, &entry_path, e),
            }
        }
        if data.is_empty() {
            return None;
        }
        Some(data)
    }

    fn color_list(&mut self, node: &Node, path: &str) -> Option<Vec<Color>> {
        let token = self.scalar_prop(node, path)?;
        let mut colors = Vec::new();
        for part in token.split(',') {
            match parse_color(part.trim()) {
                Ok(c) => colors.push(c),
                Err(e) => {
                    self.push_token_error(node.line, &format!("{path}.colors"), e);
                    return None;
                }
            }
        }
        Some(colors)
    }

    fn pie_chart(&mut self, node: &Node) -> Option<PieChart> {
        let path = node.key.clone();
        let map = self.props(
            node,
            &path,
            &[
                "colors",
                "position",
                "type",
                "size",
                "padding",
                "title",
                "bgcolor",
                "showpercentage",
                "showtitle",
                "showlegend",
                "data",
            ],
        );
        let colors = self
            .required(&map, "colors", &path, node.line)
            .and_then(|n| self.color_list(n, &path));
        let position = self
            .required(&map, "position", &path, node.line)
            .and_then(|n| self.point_prop(n, &path));
        let radius = self
            .required(&map, "size", &path, node.line)
            .and_then(|n| self.integer_prop(n, &path, 1));
        let style = match Self::optional(&map, "type") {
            Some(n) => {
                let token = self.scalar_prop(n, &path)?;
                match token.trim() {
                    "pie" => PieStyle::Pie,
                    "donut" => PieStyle::Donut,
                    other => {
                        self.diagnostics.push(Diagnostic::error(
                            n.line,
                            format!("{path}.type"),
                            format!("\"{other}\": expected pie or donut"),
                        ));
                        return None;
                    }
                }
            }
            None => PieStyle::Pie,
        };
        let padding = match Self::optional(&map, "padding") {
            Some(n) => self.integer_prop(n, &path, 0)?,
            None => 0,
        };
        let title = match Self::optional(&map, "title") {
            Some(n) => self.scalar_prop(n, &path)?,
            None => String::new(),
        };
        let background = match Self::optional(&map, "bgcolor") {
            Some(n) => Some(self.color_prop(n, &path)?),
            None => None,
        };
        let mut switch = |key: &str, default: bool| -> Option<bool> {
            match Self::optional_entry(&map, key) {
                Some(n) if is_off(n) => Some(false),
                Some(n) => self.on_off_prop(n, &path),
                None => Some(default),
            }
        };
        let show_percentage = switch("showpercentage", true)?;
        let show_title = switch("showtitle", true)?;
        let show_legend = switch("showlegend", true)?;
        let data = self
            .required(&map, "data", &path, node.line)
            .and_then(|n| self.chart_data(n, &path));
        match PieChart::new(
            path.clone(),
            position?,
            radius?,
            padding,
            style,
            colors?,
            title,
            background,
            show_percentage,
            show_title,
            show_legend,
            data?,
        ) {
            Ok(pie) => Some(pie),
            Err(e) => {
                self.diagnostics.push(Diagnostic::error(
                    node.line,
                    format!("{path}.{}", e.field),
                    e.message,
                ));
                None
            }
        }
    }

    /// Like [`Self::optional`] but keeps `off` nodes so boolean switches
    /// can distinguish `showtitle: off` from an absent key.
    fn optional_entry<'n>(map: &BTreeMap<String, &'n Node>, key: &str) -> Option<&'n Node> {
        map.get(key).copied()
    }

    fn bar_chart(&mut self, node: &Node) -> Option<BarChart> {
        let path = node.key.clone();
        let map = self.props(
            node,
            &path,
            &[
                "colors",
                "position",
                "size",
                "bgcolor",
                "showvalues",
                "data",
            ],
        );
        let colors = self
            .required(&map, "colors", &path, node.line)
            .and_then(|n| self.color_list(n, &path));
        let position = self
            .required(&map, "position", &path, node.line)
            .and_then(|n| self.point_prop(n, &path));
        let size = self
            .required(&map, "size", &path, node.line)
            .and_then(|n| self.dimensions_prop(n, &path));
        let background = match Self::optional(&map, "bgcolor") {
            Some(n) => Some(self.color_prop(n, &path)?),
            None => None,
        };
        let show_values = match Self::optional_entry(&map, "showvalues") {
            Some(n) if is_off(n) => false,
            Some(n) => self.on_off_prop(n, &path)?,
            None => true,
        };
        let data = self
            .required(&map, "data", &path, node.line)
            .and_then(|n| self.chart_data(n, &path));
        match BarChart::new(
            path.clone(),
            position?,
            size?,
            colors?,
            background,
            show_values,
            data?,
        ) {
            Ok(bar) => Some(bar),
            Err(e) => {
                self.diagnostics.push(Diagnostic::error(
                    node.line,
                    format!("{path}.{}", e.field),
                    e.message,
                ));
                None
            }
        }
    }

    fn picturegraph(&mut self, node: &Node) -> Option<Picturegraph> {
        let path = node.key.clone();
        let map = self.props(
            node,
            &path,
            &[
                "position",
                "src",
                "iconsize",
                "columns",
                "spacing",
                "total",
                "value",
                "fillcolor",
                "emptycolor",
            ],
        );
        let position = self
            .required(&map, "position", &path, node.line)
            .and_then(|n| self.point_prop(n, &path));
        let source = self
            .required(&map, "src", &path, node.line)
            .and_then(|n| self.scalar_prop(n, &path));
        let icon_size = self
            .required(&map, "iconsize", &path, node.line)
            .and_then(|n| self.dimensions_prop(n, &path));
        let columns = self
            .required(&map, "columns", &path, node.line)
            .and_then(|n| self.integer_prop(n, &path, 1));
        let spacing = match Self::optional(&map, "spacing") {
            Some(n) => self.integer_prop(n, &path, 0)?,
            None => 0,
        };
        let total = self
            .required(&map, "total", &path, node.line)
            .and_then(|n| self.integer_prop(n, &path, 1));
        let value = self
            .required(&map, "value", &path, node.line)
            .and_then(|n| {
                let token = self.scalar_prop(n, &path)?;
                match parse_data_value(&token) {
                    Ok(v) => Some(v),
                    Err(e) => {
                        self.push_token_error(n.line, &format!("{path}.value"), e);
                        None
                    }
                }
            });
        let fill_color = self
            .required(&map, "fillcolor", &path, node.line)
            .and_then(|n| self.color_prop(n, &path));
        let empty_color = self
            .required(&map, "emptycolor", &path, node.line)
            .and_then(|n| self.color_prop(n, &path));
        match Picturegraph::new(
            path.clone(),
            position?,
            source?,
            icon_size?,
            columns?,
            spacing,
            total?,
            value?,
            fill_color?,
            empty_color?,
        ) {
            Ok(pg) => Some(pg),
            Err(e) => {
                self.diagnostics.push(Diagnostic::error(
                    node.line,
                    format!("{path}.{}", e.field),
                    e.message,
                ));
                None
            }
        }
    }

    fn section(&mut self, node: &Node, kind: SectionKind) -> Option<Section> {
        if is_off(node) {
            return None;
        }
        let path = match kind {
            SectionKind::Head => "head",
            SectionKind::Foot => "foot",
        };
        if let Some(value) = &node.value {
            self.diagnostics.push(Diagnostic::error(
                node.line,
                path,
                format!("\"{value}\": expected off or an indented block"),
            ));
            return None;
        }
        let mut section = Section::empty(kind);
        for child in &node.children {
            let child_path = format!("{path}.{}", child.key);
            match child.key.as_str() {
                "position" => {
                    if !is_off(child) {
                        section.position = self.point_prop(child, path);
                    }
                }
                "size" => {
                    if !is_off(child) {
                        section.size = self.dimensions_prop(child, path);
                    }
                }
                "bgcolor" | "bgimage" | "bgpattern" => {
                    // Collected below in source order.
                }
                "title" => {
                    section.title = self.section_text(child, &child_path, TextRole::Title);
                }
                "subtitle" => {
                    section.subtitle = self.section_text(child, &child_path, TextRole::Subtitle);
                }
                "text" if kind == SectionKind::Foot => {
                    section.text = self.section_text(child, &child_path, TextRole::Body);
                }
                key => match element_base(key) {
                    Some(base) => {
                        if let Some(element) = self.element(child, base) {
                            section.children.push(element);
                        }
                    }
                    None => {
                        self.diagnostics.push(Diagnostic::error(
                            child.line,
                            child_path,
                            "unknown key in section",
                        ));
                    }
                },
            }
        }
        section.background = self.background_prop(node, path);
        Some(section)
    }

    fn section_text(&mut self, node: &Node, path: &str, role: TextRole) -> Option<TextElement> {
        if is_off(node) {
            return None;
        }
        if node.children.is_empty() {
            self.diagnostics.push(Diagnostic::error(
                node.line,
                path,
                "expected off or an indented block",
            ));
            return None;
        }
        self.text_element(node, path.to_string(), role)
    }
}

/// A chart datum token: a decimal literal or a `{{name}}` placeholder.
fn parse_data_value(token: &str) -> Result<DataValue, TokenError> {
    let trimmed = token.trim();
    if let Some(inner) = trimmed
        .strip_prefix("{{")
        .and_then(|r| r.strip_suffix("}}"))
    {
        let name = inner.trim();
        if is_identifier(name) {
            return Ok(DataValue::Reference(name.to_string()));
        }
        return Err(TokenError(format!(
            "\"{name}\" is not a valid indicator name"
        )));
    }
    parse_decimal(trimmed).map(DataValue::Number)
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_')
}

/// Post-parse lint: geometry outside the canvas, inert lineheight,
/// degenerate pie data, and unresolved placeholders.
pub fn validate(model: &InfographicModel) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let canvas = model.canvas;

    let check_text = |text: &TextElement, out: &mut Vec<Diagnostic>| {
        if text.lineheight.is_some() && text.maxwidth.is_none() {
            out.push(Diagnostic::warning(
                1,
                &text.id,
                "lineheight without maxwidth has no effect",
            ));
        }
        if text.value.contains("{{") {
            out.push(Diagnostic::warning(
                1,
                &text.id,
                "unresolved placeholder; bind with an account before rendering",
            ));
        }
        let first_line_top = text.position.y.saturating_sub(text.font.size);
        let outside_x = text.align == Align::Left && text.position.x >= canvas.width;
        if outside_x || first_line_top >= canvas.height {
            out.push(Diagnostic::warning(1, &text.id, "outside canvas"));
        }
    };

    let check_data = |id: &str, data: &[ChartDatum], out: &mut Vec<Diagnostic>| {
        if data
            .iter()
            .any(|d| matches!(d.value, DataValue::Reference(_)))
        {
            out.push(Diagnostic::warning(
                1,
                id,
                "unresolved placeholder; bind with an account before rendering",
            ));
        }
    };

    for section in [&model.head, &model.foot].into_iter().flatten() {
        for text in [&section.title, &section.subtitle, &section.text]
            .into_iter()
            .flatten()
        {
            check_text(text, &mut out);
        }
    }

    let body_outside = |x0: u32, y0: u32| x0 >= canvas.width || y0 >= canvas.height;
    for element in model.elements() {
        match element {
            Element::Box(b) => {
                if body_outside(b.position.x, b.position.y) {
                    out.push(Diagnostic::warning(1, &b.id, "outside canvas"));
                }
            }
            Element::Image(i) => {
                if body_outside(i.position.x, i.position.y) {
                    out.push(Diagnostic::warning(1, &i.id, "outside canvas"));
                }
            }
            Element::Text(t) => check_text(t, &mut out),
            Element::Pie(p) => {
                let reach = p.radius + p.padding;
                if body_outside(
                    p.position.x.saturating_sub(reach),
                    p.position.y.saturating_sub(reach),
                ) {
                    out.push(Diagnostic::warning(1, &p.id, "outside canvas"));
                }
                if p.title.contains("{{") {
                    out.push(Diagnostic::warning(
                        1,
                        &p.id,
                        "unresolved placeholder in title",
                    ));
                }
                check_data(&p.id, &p.data, &mut out);
                let all_zero = p
                    .data
                    .iter()
                    .all(|d| matches!(d.value, DataValue::Number(n) if n == 0.0));
                if all_zero {
                    out.push(Diagnostic::error(1, &p.id, "pie data sums to zero"));
                }
            }
            Element::Bar(b) => {
                if body_outside(b.position.x, b.position.y) {
                    out.push(Diagnostic::warning(1, &b.id, "outside canvas"));
                }
                check_data(&b.id, &b.data, &mut out);
            }
            Element::Picturegraph(p) => {
                if body_outside(p.position.x, p.position.y) {
                    out.push(Diagnostic::warning(1, &p.id, "outside canvas"));
                }
                if matches!(p.value, DataValue::Reference(_)) {
                    out.push(Diagnostic::warning(
                        1,
                        &p.id,
                        "unresolved placeholder; bind with an account before rendering",
                    ));
                }
            }
        }
    }
    out
}

/// Parses an account file: top-level `values:` and `formulas:` maps in
/// the same key-value syntax as the model files.
pub fn parse_account(source: &str) -> Result<Account, Diagnostics> {
    let (roots, mut diagnostics) = tree::build_tree(source);
    let mut values = BTreeMap::new();
    let mut formulas = BTreeMap::new();
    let mut formula_lines: BTreeMap<String, usize> = BTreeMap::new();

    for node in &roots {
        match node.key.as_str() {
            "values" => {
                for child in &node.children {
                    let path = format!("values.{}", child.key);
                    if !is_identifier(&child.key) {
                        diagnostics.push(Diagnostic::error(
                            child.line,
                            path,
                            "not a valid indicator name",
                        ));
                        continue;
                    }
                    let Some(token) = child.value.clone() else {
                        diagnostics.push(Diagnostic::error(child.line, path, "expected a number"));
                        continue;
                    };
                    // Direct indicator values may be negative.
                    let (sign, magnitude) = match token.trim().strip_prefix('-') {
                        Some(rest) => (-1.0, rest.trim().to_string()),
                        None => (1.0, token.trim().to_string()),
                    };
                    match parse_decimal(&magnitude) {
                        Ok(v) => {
                            values.insert(child.key.clone(), sign * v);
                        }
                        Err(e) => {
                            diagnostics.push(Diagnostic::error(child.line, path, e.to_string()))
                        }
                    }
                }
            }
            "formulas" => {
                for child in &node.children {
                    let path = format!("formulas.{}", child.key);
                    if !is_identifier(&child.key) {
                        diagnostics.push(Diagnostic::error(
                            child.line,
                            path,
                            "not a valid indicator name",
                        ));
                        continue;
                    }
                    match &child.value {
                        Some(expr) => {
                            formulas.insert(child.key.clone(), expr.clone());
                            formula_lines.insert(child.key.clone(), child.line);
                        }
                        None => diagnostics.push(Diagnostic::error(
                            child.line,
                            path,
                            "expected an expression",
                        )),
                    }
                }
            }
            key => diagnostics.push(Diagnostic::error(
                node.line,
                key,
                "unknown key; expected values or formulas",
            )),
        }
    }

    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(Diagnostics(diagnostics));
    }
    Account::new(values, formulas).map_err(|e| {
        let line = formula_lines
            .iter()
            .find(|(name, _)| e.message.contains(name.as_str()))
            .map(|(_, line)| *line)
            .unwrap_or(1);
        diagnostics.push(Diagnostic::error(line, e.field, e.message));
        Diagnostics(diagnostics)
    })
}

#[cfg(test)]
mod tests;
