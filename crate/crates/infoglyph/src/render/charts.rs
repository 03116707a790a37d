//! Chart geometry and rasterization: pie/donut slices, proportional
//! bars, and picturegraph icon grids.

use std::f64::consts::PI;

use crate::assets::DecodedImage;
use crate::model::{BarChart, Color, DataValue, Picturegraph, PieChart};

use super::raster::Painter;
use super::RenderError;

/// One pie slice. Angles are radians measured clockwise from 12 o'clock,
/// with 12 o'clock itself at -PI/2 (so slice 0 starts at -PI/2 and the
/// full circle ends at 3*PI/2).
#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub start_angle: f64,
    pub end_angle: f64,
    pub color: Color,
    pub label: String,
    pub fraction: f64,
}

/// Converts chart data to slices in data order. The value sum must be
/// positive; bound references are required.
pub fn layout_pie(chart: &PieChart) -> Result<Vec<Slice>, RenderError> {
    let values = numeric_data(&chart.id, &chart.data)?;
    let total: f64 = values.iter().map(|(_, v)| v).sum();
    if total <= 0.0 {
        return Err(RenderError::ZeroPieSum {
            element: chart.id.clone(),
        });
    }
    let mut slices = Vec::with_capacity(values.len());
    let mut cumulative = 0.0f64;
    for (i, (label, value)) in values.iter().enumerate() {
        let fraction = value / total;
        let start_angle = -PI / 2.0 + 2.0 * PI * (cumulative / total);
        cumulative += value;
        let end_angle = -PI / 2.0 + 2.0 * PI * (cumulative / total);
        slices.push(Slice {
            start_angle,
            end_angle,
            color: chart.slice_color(i),
            label: label.clone(),
            fraction,
        });
    }
    Ok(slices)
}

/// A laid-out bar: pixel rectangle plus its datum.
#[derive(Debug, Clone, PartialEq)]
pub struct BarRect {
    pub x: i64,
    pub y: i64,
    pub width: u32,
    pub height: u32,
    pub color: Color,
    pub label: String,
    pub value: f64,
}

/// Vertical bars in data order. Bar width is plot_width/(2n-1) with
/// gaps equal to the bar width; bar heights round from value/max of the
/// plot height; bars sit on the plot rectangle's bottom edge.
pub fn layout_bars(chart: &BarChart) -> Result<Vec<BarRect>, RenderError> {
    let values = numeric_data(&chart.id, &chart.data)?;
    let max = values.iter().map(|(_, v)| *v).fold(f64::NAN, f64::max);
    if !max.is_finite() || max <= 0.0 {
        return Err(RenderError::ZeroBarMax {
            element: chart.id.clone(),
        });
    }
    let n = values.len();
    let plot_w = chart.size.width as f64;
    let plot_h = chart.size.height as f64;
    let bar_w = plot_w / (2 * n - 1) as f64;
    let bottom = chart.position.y as i64 + chart.size.height as i64;
    let mut bars = Vec::with_capacity(n);
    for (i, (label, value)) in values.iter().enumerate() {
        let left = (2 * i) as f64 * bar_w;
        let right = (2 * i + 1) as f64 * bar_w;
        let x = chart.position.x as i64 + (left + 0.5).floor() as i64;
        let x_end = chart.position.x as i64 + (right + 0.5).floor() as i64;
        let height = (value / max * plot_h + 0.5).floor() as u32;
        bars.push(BarRect {
            x,
            y: bottom - height as i64,
            width: (x_end - x).max(0) as u32,
            height,
            color: chart.bar_color(i),
            label: label.clone(),
            value: *value,
        });
    }
    Ok(bars)
}

/// One picturegraph slot: pixel origin and the fill fraction in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct IconSlot {
    pub x: i64,
    pub y: i64,
    pub fill: f64,
}

/// Row-major icon grid, `columns` per row, cell pitch icon_size+spacing.
/// Slot i is filled by clamp(value - i, 0, 1).
pub fn layout_picturegraph(pg: &Picturegraph) -> Result<Vec<IconSlot>, RenderError> {
    let value = match &pg.value {
        DataValue::Number(v) => *v,
        DataValue::Reference(name) => {
            return Err(RenderError::UnboundReference {
                element: pg.id.clone(),
                name: name.clone(),
            })
        }
    };
    Ok(slot_positions(pg)
        .map(|(i, x, y)| IconSlot {
            x,
            y,
            fill: slot_fill(value, i),
        })
        .collect())
}

fn slot_fill(value: f64, index: u32) -> f64 {
    (value - index as f64).clamp(0.0, 1.0)
}

fn slot_positions(pg: &Picturegraph) -> impl Iterator<Item = (u32, i64, i64)> + '_ {
    let pitch_x = pg.icon_size.width as i64 + pg.spacing as i64;
    let pitch_y = pg.icon_size.height as i64 + pg.spacing as i64;
    (0..pg.total).map(move |i| {
        let col = (i % pg.columns) as i64;
        let row = (i / pg.columns) as i64;
        (
            i,
            pg.position.x as i64 + col * pitch_x,
            pg.position.y as i64 + row * pitch_y,
        )
    })
}

fn numeric_data(
    id: &str,
    data: &[crate::model::ChartDatum],
) -> Result<Vec<(String, f64)>, RenderError> {
    data.iter()
        .map(|d| match &d.value {
            DataValue::Number(v) => Ok((d.label.clone(), *v)),
            DataValue::Reference(name) => Err(RenderError::UnboundReference {
                element: id.to_string(),
                name: name.clone(),
            }),
        })
        .collect()
}

/// Fixed 2x2 supersampling offsets for disc and slice edges.
const SUBSAMPLES: [(f64, f64); 4] = [(0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75)];

/// Fills a disc with anti-aliased edges.
pub fn fill_disc(painter: &mut Painter<'_>, cx: i64, cy: i64, radius: u32, color: Color) {
    let r = radius as f64;
    let x0 = (cx - radius as i64 - 1).max(0);
    let y0 = (cy - radius as i64 - 1).max(0);
    let x1 = (cx + radius as i64 + 2).min(painter.width() as i64);
    let y1 = (cy + radius as i64 + 2).min(painter.height() as i64);
    for py in y0..y1 {
        for px in x0..x1 {
            let mut hits = 0u32;
            for (ox, oy) in SUBSAMPLES {
                let dx = px as f64 + ox - cx as f64;
                let dy = py as f64 + oy - cy as f64;
                if dx * dx + dy * dy <= r * r {
                    hits += 1;
                }
            }
            if hits > 0 {
                painter.blend_pixel(px, py, color, (hits * 255 / 4) as u8);
            }
        }
    }
}

/// Rasterizes pie slices (full disc) or a donut annulus with inner
/// radius = radius/2. Slice membership is tested per subsample by angle
/// from 12 o'clock, clockwise.
pub fn fill_slices(
    painter: &mut Painter<'_>,
    cx: i64,
    cy: i64,
    radius: u32,
    donut: bool,
    slices: &[Slice],
) {
    let r_outer = radius as f64;
    let r_inner = if donut { radius as f64 / 2.0 } else { 0.0 };
    let x0 = (cx - radius as i64 - 1).max(0);
    let y0 = (cy - radius as i64 - 1).max(0);
    let x1 = (cx + radius as i64 + 2).min(painter.width() as i64);
    let y1 = (cy + radius as i64 + 2).min(painter.height() as i64);

    // Slice bounds shifted to the [0, 2*PI) clockwise-from-top measure.
    let bounds: Vec<(f64, f64)> = slices
        .iter()
        .map(|s| (s.start_angle + PI / 2.0, s.end_angle + PI / 2.0))
        .collect();

    for py in y0..y1 {
        for px in x0..x1 {
            let mut hits = vec![0u32; slices.len()];
            for (ox, oy) in SUBSAMPLES {
                let dx = px as f64 + ox - cx as f64;
                let dy = py as f64 + oy - cy as f64;
                let dist2 = dx * dx + dy * dy;
                if dist2 > r_outer * r_outer || dist2 < r_inner * r_inner {
                    continue;
                }
                // atan2(dx, -dy): 0 at 12 o'clock, increasing clockwise.
                let mut angle = f64::atan2(dx, -dy);
                if angle < 0.0 {
                    angle += 2.0 * PI;
                }
                for (i, (start, end)) in bounds.iter().enumerate() {
                    if angle >= *start && angle < *end {
                        hits[i] += 1;
                        break;
                    }
                }
            }
            for (i, count) in hits.iter().enumerate() {
                if *count > 0 {
                    painter.blend_pixel(px, py, slices[i].color, (count * 255 / 4) as u8);
                }
            }
        }
    }
}

/// Draws one picturegraph icon slot: the icon's alpha mask tinted
/// fill/empty at the column threshold round(fill * width).
pub fn draw_icon_slot(
    painter: &mut Painter<'_>,
    icon: &DecodedImage,
    slot_x: i64,
    slot_y: i64,
    fill: f64,
    fill_color: Color,
    empty_color: Color,
) {
    let threshold = (fill * icon.width as f64 + 0.5).floor() as i64;
    for row in 0..icon.height as i64 {
        for col in 0..icon.width as i64 {
            let i = (row as usize * icon.width as usize + col as usize) * 4;
            let alpha = icon.rgba[i + 3];
            if alpha == 0 {
                continue;
            }
            let tint = if col < threshold {
                fill_color
            } else {
                empty_color
            };
            painter.blend_pixel(slot_x + col, slot_y + row, tint, alpha);
        }
    }
}

/// Lazy slot walk for the renderer: stops after the first row that
/// starts below the canvas, since later rows cannot be visible.
pub fn visible_slots<'a>(
    pg: &'a Picturegraph,
    canvas_height: u32,
) -> impl Iterator<Item = (u32, i64, i64)> + 'a {
    slot_positions(pg).take_while(move |(_, _, y)| *y < canvas_height as i64)
}
