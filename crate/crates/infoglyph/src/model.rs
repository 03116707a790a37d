//! Domain types shared by the parser, binder, renderer, and analyzer.
//!
//! All types are plain immutable data with validating constructors. A
//! constructor rejects a violated invariant with a [`ModelError`] naming
//! the offending field; once constructed, values are safe to share and
//! send between threads.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Invariant violation raised by a type constructor.
///
/// `field` names the field whose invariant was violated so diagnostics can
/// point at the exact token in the source model.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{field}: {message}")]
pub struct ModelError {
    pub field: &'static str,
    pub message: String,
}

impl ModelError {
    pub fn new(field: &'static str, message: impl Into<String>) -> Self {
        Self {
            field,
            message: message.into(),
        }
    }
}

/// Width and height in whole pixels, both at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dimensions {
    pub width: u32,
    pub height: u32,
}

impl Dimensions {
    pub fn new(width: u32, height: u32) -> Result<Self, ModelError> {
        if width < 1 {
            return Err(ModelError::new("width", "must be >= 1"));
        }
        if height < 1 {
            return Err(ModelError::new("height", "must be >= 1"));
        }
        Ok(Self { width, height })
    }
}

impl fmt::Display for Dimensions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.width, self.height)
    }
}

/// A position on the canvas. The origin is the canvas top-left corner;
/// both coordinates are non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl Point {
    pub fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}", self.x, self.y)
    }
}

/// An RGBA color. Values parsed from the DSL always carry alpha 255;
/// partial alpha only appears internally during compositing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Color {
    pub r: u8,
    pub g: u8,
    pub b: u8,
    pub a: u8,
}

impl Color {
    pub const fn rgb(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b, a: 255 }
    }

    pub const fn rgba(r: u8, g: u8, b: u8, a: u8) -> Self {
        Self { r, g, b, a }
    }

    pub const WHITE: Color = Color::rgb(255, 255, 255);
    pub const BLACK: Color = Color::rgb(0, 0, 0);

    /// Six lowercase hex digits, e.g. `9dd191`. Only defined for opaque
    /// colors, which is all the DSL can express.
    pub fn to_hex(self) -> String {
        format!("{:02x}{:02x}{:02x}", self.r, self.g, self.b)
    }
}

/// Font weight: the DSL accepts `bold` or a numeric weight in hundreds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FontWeight {
    Normal,
    Bold,
    Numeric(u16),
}

impl FontWeight {
    /// Weights of 600 and above select the bold face.
    pub fn is_bold(self) -> bool {
        match self {
            FontWeight::Normal => false,
            FontWeight::Bold => true,
            FontWeight::Numeric(n) => n >= 600,
        }
    }
}

/// A font request: weight, pixel size, and family name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FontSpec {
    pub weight: FontWeight,
    pub size: u32,
    pub family: String,
}

impl FontSpec {
    pub fn new(
        weight: FontWeight,
        size: u32,
        family: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let family = family.into();
        if size < 1 {
            return Err(ModelError::new("size", "must be >= 1"));
        }
        if family.trim().is_empty() {
            return Err(ModelError::new("family", "must be non-empty"));
        }
        Ok(Self {
            weight,
            size,
            family,
        })
    }
}

/// What fills the area behind a canvas, section, or box.
#[derive(Debug, Clone, PartialEq)]
pub enum Background {
    /// Solid color fill.
    Color(Color),
    /// Image stretched to the target rectangle.
    Image(String),
    /// Image tiled at natural size from the target origin.
    Pattern(String),
}

impl Background {
    pub fn source(&self) -> Option<&str> {
        match self {
            Background::Color(_) => None,
            Background::Image(url) | Background::Pattern(url) => Some(url),
        }
    }
}

/// Role of a text element. The renderer treats all three identically;
/// the census distinguishes them taxonomically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TextRole {
    Body,
    Title,
    Subtitle,
}

/// Horizontal anchoring of text lines relative to `position.x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Align {
    #[default]
    Left,
    Center,
}

/// A run of text anchored at a baseline position, optionally wrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct TextElement {
    pub id: String,
    pub role: TextRole,
    pub value: String,
    pub font: FontSpec,
    pub color: Color,
    /// Anchor of the first line's baseline (left edge or center per `align`).
    pub position: Point,
    pub align: Align,
    pub maxwidth: Option<u32>,
    pub lineheight: Option<u32>,
}

impl TextElement {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        role: TextRole,
        value: impl Into<String>,
        font: FontSpec,
        color: Color,
        position: Point,
        align: Align,
        maxwidth: Option<u32>,
        lineheight: Option<u32>,
    ) -> Result<Self, ModelError> {
        if let Some(w) = maxwidth {
            if w < 1 {
                return Err(ModelError::new("maxwidth", "must be >= 1"));
            }
        }
        if let Some(h) = lineheight {
            if h < 1 {
                return Err(ModelError::new("lineheight", "must be >= 1"));
            }
        }
        Ok(Self {
            id: id.into(),
            role,
            value: value.into(),
            font,
            color,
            position,
            align,
            maxwidth,
            lineheight,
        })
    }
}

/// A filled rectangle demarcating an area of the infographic.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxElement {
    pub id: String,
    pub position: Point,
    pub size: Dimensions,
    pub background: Background,
}

/// An image placed at a position and stretched to `size`.
#[derive(Debug, Clone, PartialEq)]
pub struct ImageElement {
    pub id: String,
    pub position: Point,
    pub size: Dimensions,
    pub source: String,
}

impl ImageElement {
    pub fn new(
        id: impl Into<String>,
        position: Point,
        size: Dimensions,
        source: impl Into<String>,
    ) -> Result<Self, ModelError> {
        let source = source.into();
        if source.trim().is_empty() {
            return Err(ModelError::new("src", "must be a non-empty URL or path"));
        }
        Ok(Self {
            id: id.into(),
            position,
            size,
            source,
        })
    }
}

/// A chart datum: either a literal number or an unresolved indicator
/// reference of the form `{{name}}` awaiting the binder.
#[derive(Debug, Clone, PartialEq)]
pub enum DataValue {
    Number(f64),
    Reference(String),
}

impl DataValue {
    pub fn as_number(&self) -> Option<f64> {
        match self {
            DataValue::Number(n) => Some(*n),
            DataValue::Reference(_) => None,
        }
    }
}

/// One labelled chart datum.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartDatum {
    pub label: String,
    pub value: DataValue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PieStyle {
    Pie,
    Donut,
}

/// A pie or donut chart. `position` is the disc center and `radius` the
/// outer radius in pixels (the DSL key is `size`).
#[derive(Debug, Clone, PartialEq)]
pub struct PieChart {
    pub id: String,
    pub position: Point,
    pub radius: u32,
    /// Width of the blank ring between the slices and the optional
    /// background disc, whose radius is `radius + padding`.
    pub padding: u32,
    pub style: PieStyle,
    pub colors: Vec<Color>,
    pub title: String,
    pub background: Option<Color>,
    pub show_percentage: bool,
    pub show_title: bool,
    pub show_legend: bool,
    pub data: Vec<ChartDatum>,
}

impl PieChart {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        position: Point,
        radius: u32,
        padding: u32,
        style: PieStyle,
        colors: Vec<Color>,
        title: impl Into<String>,
        background: Option<Color>,
        show_percentage: bool,
        show_title: bool,
        show_legend: bool,
        data: Vec<ChartDatum>,
    ) -> Result<Self, ModelError> {
        if radius < 1 {
            return Err(ModelError::new("size", "radius must be >= 1"));
        }
        if colors.is_empty() {
            return Err(ModelError::new("colors", "at least one color required"));
        }
        if data.is_empty() {
            return Err(ModelError::new("data", "must be non-empty"));
        }
        validate_chart_data("data", &data)?;
        // References may still bind to nonzero values, so the all-zero
        // check only applies when every datum is a literal.
        let all_literal_zero = data
            .iter()
            .all(|d| matches!(d.value, DataValue::Number(n) if n == 0.0));
        if all_literal_zero {
            return Err(ModelError::new("data", "at least one value must be > 0"));
        }
        Ok(Self {
            id: id.into(),
            position,
            radius,
            padding,
            style,
            colors,
            title: title.into(),
            background,
            show_percentage,
            show_title,
            show_legend,
            data,
        })
    }

    /// Color for slice `i`: colors repeat cyclically.
    pub fn slice_color(&self, i: usize) -> Color {
        self.colors[i % self.colors.len()]
    }
}

/// A vertical bar chart. `position` is the top-left corner of the plot
/// rectangle; bar heights are proportional to each value over the maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct BarChart {
    pub id: String,
    pub position: Point,
    pub size: Dimensions,
    pub colors: Vec<Color>,
    pub background: Option<Color>,
    pub show_values: bool,
    pub data: Vec<ChartDatum>,
}

impl BarChart {
    pub fn new(
        id: impl Into<String>,
        position: Point,
        size: Dimensions,
        colors: Vec<Color>,
        background: Option<Color>,
        show_values: bool,
        data: Vec<ChartDatum>,
    ) -> Result<Self, ModelError> {
        if colors.is_empty() {
            return Err(ModelError::new("colors", "at least one color required"));
        }
        if data.is_empty() {
            return Err(ModelError::new("data", "must be non-empty"));
        }
        validate_chart_data("data", &data)?;
        Ok(Self {
            id: id.into(),
            position,
            size,
            colors,
            background,
            show_values,
            data,
        })
    }

    pub fn bar_color(&self, i: usize) -> Color {
        self.colors[i % self.colors.len()]
    }
}

/// A grid of icon slots that encodes `value` out of `total` by filling
/// icons left to right, the fractional slot partially.
#[derive(Debug, Clone, PartialEq)]
pub struct Picturegraph {
    pub id: String,
    pub position: Point,
    pub icon_source: String,
    pub icon_size: Dimensions,
    pub columns: u32,
    pub spacing: u32,
    pub total: u32,
    pub value: DataValue,
    pub fill_color: Color,
    pub empty_color: Color,
}

impl Picturegraph {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        id: impl Into<String>,
        position: Point,
        icon_source: impl Into<String>,
        icon_size: Dimensions,
        columns: u32,
        spacing: u32,
        total: u32,
        value: DataValue,
        fill_color: Color,
        empty_color: Color,
    ) -> Result<Self, ModelError> {
        let icon_source = icon_source.into();
        if icon_source.trim().is_empty() {
            return Err(ModelError::new("src", "must be a non-empty URL or path"));
        }
        if columns < 1 {
            return Err(ModelError::new("columns", "must be >= 1"));
        }
        if total < 1 {
            return Err(ModelError::new("total", "must be >= 1"));
        }
        if let DataValue::Number(v) = value {
            if !(0.0..=total as f64).contains(&v) {
                return Err(ModelError::new(
                    "value",
                    format!("must be between 0 and total ({total})"),
                ));
            }
        }
        Ok(Self {
            id: id.into(),
            position,
            icon_source,
            icon_size,
            columns,
            spacing,
            total,
            value,
            fill_color,
            empty_color,
        })
    }
}

fn validate_chart_data(field: &'static str, data: &[ChartDatum]) -> Result<(), ModelError> {
    for datum in data {
        if let DataValue::Number(v) = datum.value {
            if !v.is_finite() || v < 0.0 {
                return Err(ModelError::new(
                    field,
                    format!("value for \"{}\" must be >= 0", datum.label),
                ));
            }
        }
    }
    Ok(())
}

/// Any element that can appear in the body or inside a section.
#[derive(Debug, Clone, PartialEq)]
pub enum Element {
    Box(BoxElement),
    Text(TextElement),
    Image(ImageElement),
    Pie(PieChart),
    Bar(BarChart),
    Picturegraph(Picturegraph),
}

impl Element {
    pub fn id(&self) -> &str {
        match self {
            Element::Box(e) => &e.id,
            Element::Text(e) => &e.id,
            Element::Image(e) => &e.id,
            Element::Pie(e) => &e.id,
            Element::Bar(e) => &e.id,
            Element::Picturegraph(e) => &e.id,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectionKind {
    Head,
    Foot,
}

/// The head or foot band of an infographic.
///
/// Child element positions are absolute canvas coordinates; the section
/// rectangle (when present) only scopes the section background fill.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub kind: SectionKind,
    pub position: Option<Point>,
    pub size: Option<Dimensions>,
    pub background: Option<Background>,
    pub title: Option<TextElement>,
    pub subtitle: Option<TextElement>,
    /// Foot sections may carry a plain `text:` entry (role Body).
    pub text: Option<TextElement>,
    pub children: Vec<Element>,
}

impl Section {
    pub fn empty(kind: SectionKind) -> Self {
        Self {
            kind,
            position: None,
            size: None,
            background: None,
            title: None,
            subtitle: None,
            text: None,
            children: Vec::new(),
        }
    }
}

/// A parsed infographic document.
///
/// Body order is source-text order and doubles as the z-order: earlier
/// elements paint first, later elements on top.
#[derive(Debug, Clone, PartialEq)]
pub struct InfographicModel {
    pub canvas: Dimensions,
    pub background: Background,
    pub head: Option<Section>,
    pub foot: Option<Section>,
    pub body: Vec<Element>,
}

impl InfographicModel {
    pub fn new(
        canvas: Dimensions,
        background: Background,
        head: Option<Section>,
        foot: Option<Section>,
        body: Vec<Element>,
    ) -> Result<Self, ModelError> {
        let model = Self {
            canvas,
            background,
            head,
            foot,
            body,
        };
        let mut seen = std::collections::BTreeSet::new();
        for element in model.elements() {
            if !seen.insert(element.id().to_string()) {
                return Err(ModelError::new(
                    "id",
                    format!("duplicate element id \"{}\"", element.id()),
                ));
            }
        }
        Ok(model)
    }

    /// All elements in paint order: head children, body, foot children.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        let head = self.head.iter().flat_map(|s| s.children.iter());
        let foot = self.foot.iter().flat_map(|s| s.children.iter());
        head.chain(self.body.iter()).chain(foot)
    }
}

/// Named indicator values (direct) and formulas (indirect).
///
/// The two maps are disjoint and the formula dependency graph is acyclic;
/// both are checked at construction.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Account {
    pub values: BTreeMap<String, f64>,
    pub formulas: BTreeMap<String, String>,
}

impl Account {
    pub fn new(
        values: BTreeMap<String, f64>,
        formulas: BTreeMap<String, String>,
    ) -> Result<Self, ModelError> {
        for name in formulas.keys() {
            if values.contains_key(name) {
                return Err(ModelError::new(
                    "formulas",
                    format!("\"{name}\" appears in both values and formulas"),
                ));
            }
        }
        let account = Self { values, formulas };
        if let Some(cycle) = account.find_cycle() {
            return Err(ModelError::new(
                "formulas",
                format!("dependency cycle through \"{cycle}\""),
            ));
        }
        Ok(account)
    }

    /// DFS over coarse name references inside formula strings. Full
    /// expression parsing lives in the binder; this scan only needs the
    /// referenced identifiers, so it lexes alphanumeric runs that do not
    /// start with a digit.
    fn find_cycle(&self) -> Option<String> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Visiting,
            Done,
        }
        fn visit(
            account: &Account,
            name: &str,
            marks: &mut BTreeMap<String, Mark>,
        ) -> Option<String> {
            match marks.get(name) {
                Some(Mark::Done) => return None,
                Some(Mark::Visiting) => return Some(name.to_string()),
                None => {}
            }
            marks.insert(name.to_string(), Mark::Visiting);
            if let Some(formula) = account.formulas.get(name) {
                for referenced in referenced_names(formula) {
                    if account.formulas.contains_key(&referenced) {
                        if let Some(cycle) = visit(account, &referenced, marks) {
                            return Some(cycle);
                        }
                    }
                }
            }
            marks.insert(name.to_string(), Mark::Done);
            None
        }
        let mut marks = BTreeMap::new();
        for name in self.formulas.keys() {
            if let Some(cycle) = visit(self, name, &mut marks) {
                return Some(cycle);
            }
        }
        None
    }
}

/// Identifiers referenced by a formula string (coarse lexical scan).
pub(crate) fn referenced_names(formula: &str) -> Vec<String> {
    let mut names = Vec::new();
    let mut current = String::new();
    for ch in formula.chars() {
        if ch.is_alphanumeric() || ch == '_' {
            current.push(ch);
        } else {
            if !current.is_empty() && !current.starts_with(|c: char| c.is_ascii_digit()) {
                names.push(std::mem::take(&mut current));
            }
            current.clear();
        }
    }
    if !current.is_empty() && !current.starts_with(|c: char| c.is_ascii_digit()) {
        names.push(current);
    }
    names
}

/// Component type ids of the infographic taxonomy that are computable
/// from a DSL model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ComponentType {
    HeadSection,
    TitleText,
    SubtitleText,
    HeadLogo,
    BodySection,
    Box,
    BoxTitleText,
    BodyText,
    PieChart,
    BarChart,
    Picturegraph,
    FootSection,
    FootTitleText,
    FootText,
    FootLogo,
}

impl ComponentType {
    pub const ALL: [ComponentType; 15] = [
        ComponentType::HeadSection,
        ComponentType::TitleText,
        ComponentType::SubtitleText,
        ComponentType::HeadLogo,
        ComponentType::BodySection,
        ComponentType::Box,
        ComponentType::BoxTitleText,
        ComponentType::BodyText,
        ComponentType::PieChart,
        ComponentType::BarChart,
        ComponentType::Picturegraph,
        ComponentType::FootSection,
        ComponentType::FootTitleText,
        ComponentType::FootText,
        ComponentType::FootLogo,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ComponentType::HeadSection => "C1",
            ComponentType::TitleText => "C2",
            ComponentType::SubtitleText => "C3",
            ComponentType::HeadLogo => "C5",
            ComponentType::BodySection => "C6",
            ComponentType::Box => "C7",
            ComponentType::BoxTitleText => "C8",
            ComponentType::BodyText => "C9",
            ComponentType::PieChart => "C11",
            ComponentType::BarChart => "C12",
            ComponentType::Picturegraph => "C15",
            ComponentType::FootSection => "C18",
            ComponentType::FootTitleText => "C19",
            ComponentType::FootText => "C20",
            ComponentType::FootLogo => "C21",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComponentType::HeadSection => "Head section",
            ComponentType::TitleText => "Title text",
            ComponentType::SubtitleText => "Subtitle text",
            ComponentType::HeadLogo => "Logo",
            ComponentType::BodySection => "Body section",
            ComponentType::Box => "Box",
            ComponentType::BoxTitleText => "Box title text",
            ComponentType::BodyText => "Body text",
            ComponentType::PieChart => "Pie chart",
            ComponentType::BarChart => "Bar chart",
            ComponentType::Picturegraph => "Picturegraph",
            ComponentType::FootSection => "Foot section",
            ComponentType::FootTitleText => "Foot title text",
            ComponentType::FootText => "Foot text",
            ComponentType::FootLogo => "Logo",
        }
    }
}

/// Per-model component occurrence counts, in the style of the published
/// infographic analysis tables.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Census {
    pub counts: BTreeMap<ComponentType, u32>,
    /// Images placed in the body fall outside the head/foot logo
    /// categories and are reported separately.
    pub body_images: u32,
}

impl Census {
    pub fn count(&self, ty: ComponentType) -> u32 {
        self.counts.get(&ty).copied().unwrap_or(0)
    }

    /// Total component occurrences (the tables' "Sum" row).
    pub fn sum(&self) -> u32 {
        self.counts.values().sum()
    }

    /// Number of component types present at least once (the "Count" row).
    pub fn nonzero_rows(&self) -> u32 {
        self.counts.values().filter(|&&c| c > 0).count() as u32
    }
}

/// Row-major RGBA pixel buffer, the render target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<u8>,
}

impl RasterImage {
    /// Allocates a buffer of `width * height` pixels filled with `fill`.
    pub fn new(width: u32, height: u32, fill: Color) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize * 4);
        for _ in 0..width as usize * height as usize {
            pixels.extend_from_slice(&[fill.r, fill.g, fill.b, fill.a]);
        }
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn from_pixels(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ModelError> {
        if pixels.len() != width as usize * height as usize * 4 {
            return Err(ModelError::new(
                "pixels",
                format!(
                    "length {} != width*height*4 = {}",
                    pixels.len(),
                    width as usize * height as usize * 4
                ),
            ));
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    #[inline]
    pub fn get(&self, x: u32, y: u32) -> Color {
        let i = (y as usize * self.width as usize + x as usize) * 4;
        Color::rgba(
            self.pixels[i],
            self.pixels[i + 1],
            self.pixels[i + 2],
            self.pixels[i + 3],
        )
    }

    #[inline]
    pub fn put(&mut self, x: u32, y: u32, c: Color) {
        let i = (y as usize * self.width as usize + x as usize) * 4;
        self.pixels[i] = c.r;
        self.pixels[i + 1] = c.g;
        self.pixels[i + 2] = c.b;
        self.pixels[i + 3] = c.a;
    }
}
