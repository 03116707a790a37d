//! Deterministic rasterization of a bound model.
//!
//! Paint order: canvas background, head section, body elements in source
//! order, foot section. Every write is clipped to the canvas. Identical
//! inputs (model, cached assets, font catalog) produce identical pixel
//! buffers, and [`encode_png`] produces identical bytes.

mod charts;
mod png;
mod raster;
mod text;

use thiserror::Error;

use crate::assets::{AssetError, AssetStore, DecodedImage, FetchPolicy};
use crate::model::{
    Background, BarChart, Color, Dimensions, Element, InfographicModel, Picturegraph, PieChart,
    PieStyle, Point, RasterImage, Section, SectionKind,
};

pub use charts::{layout_bars, layout_picturegraph, layout_pie, BarRect, IconSlot, Slice};
pub use png::encode_png;
pub use raster::Painter;
pub use text::{
    default_lineheight, place_text, wrap_text, FontCatalog, FontError, LineBox, WrappedLine,
};

/// Scaled icons are capped at this many pixels per side.
const MAX_ICON_SIDE: u32 = 8192;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error(transparent)]
    Asset(#[from] AssetError),
    #[error(
        "element \"{element}\": unbound indicator reference \"{name}\" (bind the model first)"
    )]
    UnboundReference { element: String, name: String },
    #[error("element \"{element}\": pie data sums to zero")]
    ZeroPieSum { element: String },
    #[error("element \"{element}\": bar chart maximum value is zero")]
    ZeroBarMax { element: String },
}

/// A finished render plus non-fatal warnings (missing glyphs, over-long
/// words, clamped icons).
#[derive(Debug)]
pub struct Rendered {
    pub image: RasterImage,
    pub warnings: Vec<String>,
}

pub fn render(
    model: &InfographicModel,
    store: &AssetStore,
    catalog: &FontCatalog,
    policy: FetchPolicy,
) -> Result<Rendered, RenderError> {
    let base = match &model.background {
        Background::Color(c) => *c,
        _ => Color::WHITE,
    };
    let mut image = RasterImage::new(model.canvas.width, model.canvas.height, base);
    let mut warnings = Vec::new();
    let mut ctx = Ctx {
        store,
        catalog,
        policy,
        warnings: &mut warnings,
    };

    {
        let mut painter = Painter::new(&mut image);
        let canvas = model.canvas;
        ctx.paint_background(
            &mut painter,
            &model.background,
            0,
            0,
            canvas.width,
            canvas.height,
        )?;
        if let Some(head) = &model.head {
            ctx.paint_section(&mut painter, head, canvas)?;
        }
        for element in &model.body {
            ctx.paint_element(&mut painter, element)?;
        }
        if let Some(foot) = &model.foot {
            ctx.paint_section(&mut painter, foot, canvas)?;
        }
    }

    Ok(Rendered { image, warnings })
}

struct Ctx<'a> {
    store: &'a AssetStore,
    catalog: &'a FontCatalog,
    policy: FetchPolicy,
    warnings: &'a mut Vec<String>,
}

impl Ctx<'_> {
    fn fetch(&self, url: &str) -> Result<std::sync::Arc<DecodedImage>, RenderError> {
        Ok(self.store.fetch(url, self.policy)?)
    }

    fn paint_background(
        &mut self,
        painter: &mut Painter<'_>,
        background: &Background,
        x: i64,
        y: i64,
        w: u32,
        h: u32,
    ) -> Result<(), RenderError> {
        match background {
            Background::Color(color) => painter.fill_rect(x, y, w, h, *color),
            Background::Image(url) => {
                let image = self.fetch(url)?;
                painter.blit_scaled(&image, x, y, w, h);
            }
            Background::Pattern(url) => {
                let image = self.fetch(url)?;
                painter.tile(&image, x, y, w, h);
            }
        }
        Ok(())
    }

    /// Section backgrounds fill the section rectangle. A head without a
    /// position sits at the canvas top, a foot at the canvas bottom.
    /// Child positions are absolute, so they paint independently.
    fn paint_section(
        &mut self,
        painter: &mut Painter<'_>,
        section: &Section,
        canvas: Dimensions,
    ) -> Result<(), RenderError> {
        if let (Some(background), Some(size)) = (&section.background, section.size) {
            let position = section.position.unwrap_or_else(|| match section.kind {
                SectionKind::Head => Point::new(0, 0),
                SectionKind::Foot => Point::new(0, canvas.height.saturating_sub(size.height)),
            });
            self.paint_background(
                painter,
                background,
                position.x as i64,
                position.y as i64,
                size.width,
                size.height,
            )?;
        }
        for text in [&section.title, &section.subtitle, &section.text]
            .into_iter()
            .flatten()
        {
            text::draw_text_element(painter, self.catalog, text, self.warnings);
        }
        for element in &section.children {
            self.paint_element(painter, element)?;
        }
        Ok(())
    }

    fn paint_element(
        &mut self,
        painter: &mut Painter<'_>,
        element: &Element,
    ) -> Result<(), RenderError> {
        match element {
            Element::Box(e) => self.paint_background(
                painter,
                &e.background,
                e.position.x as i64,
                e.position.y as i64,
                e.size.width,
                e.size.height,
            ),
            Element::Image(e) => {
                let image = self.fetch(&e.source)?;
                painter.blit_scaled(
                    &image,
                    e.position.x as i64,
                    e.position.y as i64,
                    e.size.width,
                    e.size.height,
                );
                Ok(())
            }
            Element::Text(e) => {
                text::draw_text_element(painter, self.catalog, e, self.warnings);
                Ok(())
            }
            Element::Pie(e) => self.paint_pie(painter, e),
            Element::Bar(e) => self.paint_bars(painter, e),
            Element::Picturegraph(e) => self.paint_picturegraph(painter, e),
        }
    }

    fn paint_pie(
        &mut self,
        painter: &mut Painter<'_>,
        chart: &PieChart,
    ) -> Result<(), RenderError> {
        let slices = charts::layout_pie(chart)?;
        let cx = chart.position.x as i64;
        let cy = chart.position.y as i64;
        if let Some(background) = chart.background {
            charts::fill_disc(painter, cx, cy, chart.radius + chart.padding, background);
        }
        charts::fill_slices(
            painter,
            cx,
            cy,
            chart.radius,
            chart.style == PieStyle::Donut,
            &slices,
        );

        if chart.show_percentage {
            let size = (chart.radius / 5).clamp(10, 24);
            for slice in &slices {
                let percent = (slice.fraction * 100.0).round() as i64;
                let label = format!("{percent}%");
                let mid = (slice.start_angle + slice.end_angle) / 2.0 + std::f64::consts::PI / 2.0;
                let lx = cx as f64 + mid.sin() * 0.75 * chart.radius as f64;
                let ly = cy as f64 - mid.cos() * 0.75 * chart.radius as f64;
                self.draw_label(
                    painter,
                    &label,
                    false,
                    size,
                    Color::WHITE,
                    lx.round() as i64,
                    ly.round() as i64 + (size as f64 * 0.35).round() as i64,
                    true,
                );
            }
        }
        if chart.show_title && !chart.title.is_empty() {
            let top = cy - (chart.radius + chart.padding) as i64 - 10;
            let title = chart.title.clone();
            self.draw_label(painter, &title, true, 16, Color::BLACK, cx, top, true);
        }
        if chart.show_legend {
            let swatch = 12u32;
            let x = cx + (chart.radius + chart.padding) as i64 + 12;
            let mut y = cy - chart.radius as i64;
            for slice in &slices {
                painter.fill_rect(x, y, swatch, swatch, slice.color);
                let label = slice.label.clone();
                self.draw_label(
                    painter,
                    &label,
                    false,
                    12,
                    Color::BLACK,
                    x + 18,
                    y + 10,
                    false,
                );
                y += 18;
            }
        }
        Ok(())
    }

    fn paint_bars(
        &mut self,
        painter: &mut Painter<'_>,
        chart: &BarChart,
    ) -> Result<(), RenderError> {
        let bars = charts::layout_bars(chart)?;
        if let Some(background) = chart.background {
            painter.fill_rect(
                chart.position.x as i64,
                chart.position.y as i64,
                chart.size.width,
                chart.size.height,
                background,
            );
        }
        for bar in &bars {
            painter.fill_rect(bar.x, bar.y, bar.width, bar.height, bar.color);
        }
        if chart.show_values {
            for bar in &bars {
                let label = crate::binder::format_value(bar.value, None);
                let cx = bar.x + bar.width as i64 / 2;
                self.draw_label(
                    painter,
                    &label,
                    false,
                    12,
                    Color::BLACK,
                    cx,
                    bar.y - 4,
                    true,
                );
            }
        }
        Ok(())
    }

    fn paint_picturegraph(
        &mut self,
        painter: &mut Painter<'_>,
        chart: &Picturegraph,
    ) -> Result<(), RenderError> {
        let value = match &chart.value {
            crate::model::DataValue::Number(v) => *v,
            crate::model::DataValue::Reference(name) => {
                return Err(RenderError::UnboundReference {
                    element: chart.id.clone(),
                    name: name.clone(),
                })
            }
        };
        let icon = self.fetch(&chart.icon_source)?;
        let (w, h) = (
            chart.icon_size.width.min(MAX_ICON_SIDE),
            chart.icon_size.height.min(MAX_ICON_SIDE),
        );
        if (w, h) != (chart.icon_size.width, chart.icon_size.height) {
            self.warnings.push(format!(
                "{}: icon size clamped to {MAX_ICON_SIDE}px",
                chart.id
            ));
        }
        let scaled = raster::scale_image(&icon, w, h);
        for (i, x, y) in charts::visible_slots(chart, painter.height()) {
            let fill = (value - i as f64).clamp(0.0, 1.0);
            charts::draw_icon_slot(
                painter,
                &scaled,
                x,
                y,
                fill,
                chart.fill_color,
                chart.empty_color,
            );
        }
        Ok(())
    }

    /// Single-line label helper for chart annotations, in the bundled
    /// face. `centered` anchors the horizontal center at `x`, otherwise
    /// the left edge.
    #[allow(clippy::too_many_arguments)]
    fn draw_label(
        &mut self,
        painter: &mut Painter<'_>,
        label: &str,
        bold: bool,
        size: u32,
        color: Color,
        x: i64,
        baseline_y: i64,
        centered: bool,
    ) {
        let face = self.catalog.fallback(bold);
        let advance = self.catalog.measure(face, bold, size, label).ceil() as u32;
        let baseline_x = if centered { x - advance as i64 / 2 } else { x };
        let line = LineBox {
            text: label.to_string(),
            baseline_x,
            baseline_y,
            advance,
        };
        text::draw_line(
            painter,
            self.catalog,
            face,
            bold,
            size,
            color,
            &line,
            self.warnings,
        );
    }
}

#[cfg(test)]
mod tests;
