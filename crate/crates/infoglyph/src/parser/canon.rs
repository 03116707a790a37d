//! Canonical serializer: emits a model as source text such that parsing
//! the output reproduces the model structurally. Canonical spelling uses
//! `bgsize`, lowercase hex colors, unquoted positions, double-quoted
//! strings, and elements in z-order.

use crate::model::{
    Align, Background, BarChart, BoxElement, ChartDatum, DataValue, Element, FontSpec, FontWeight,
    ImageElement, InfographicModel, Picturegraph, PieChart, PieStyle, Section, TextElement,
};

pub fn canonicalize(model: &InfographicModel) -> String {
    let mut out = String::new();
    push_background(&mut out, 0, &model.background);
    push_line(&mut out, 0, &format!("bgsize: {}", model.canvas));
    match &model.head {
        Some(section) => push_section(&mut out, "head", section),
        None => push_line(&mut out, 0, "head: off"),
    }
    match &model.foot {
        Some(section) => push_section(&mut out, "foot", section),
        None => push_line(&mut out, 0, "foot: off"),
    }
    for element in &model.body {
        push_element(&mut out, 0, element);
    }
    out
}

fn push_line(out: &mut String, indent: usize, content: &str) {
    for _ in 0..indent {
        out.push_str("  ");
    }
    out.push_str(content);
    out.push('\n');
}

/// Double-quotes a string, escaping backslashes and quotes so the lexer
/// reproduces the exact value.
fn quoted(value: &str) -> String {
    let mut s = String::with_capacity(value.len() + 2);
    s.push('"');
    for ch in value.chars() {
        match ch {
            '\\' => s.push_str("\\\\"),
            '"' => s.push_str("\\\""),
            _ => s.push(ch),
        }
    }
    s.push('"');
    s
}

/// Shortest exact decimal representation (Rust float formatting never
/// uses exponents), so reparsing restores the identical value.
fn number(value: f64) -> String {
    format!("{value}")
}

fn font(spec: &FontSpec) -> String {
    match spec.weight {
        FontWeight::Normal => format!("{}px {}", spec.size, spec.family),
        FontWeight::Bold => format!("bold {}px {}", spec.size, spec.family),
        FontWeight::Numeric(n) => format!("{n} {}px {}", spec.size, spec.family),
    }
}

fn push_background(out: &mut String, indent: usize, background: &Background) {
    match background {
        Background::Color(c) => push_line(out, indent, &format!("bgcolor: {}", c.to_hex())),
        Background::Image(url) => push_line(out, indent, &format!("bgimage: {}", quoted(url))),
        Background::Pattern(url) => push_line(out, indent, &format!("bgpattern: {}", quoted(url))),
    }
}

fn push_section(out: &mut String, key: &str, section: &Section) {
    push_line(out, 0, &format!("{key}:"));
    if let Some(position) = section.position {
        push_line(out, 1, &format!("position: {position}"));
    }
    if let Some(size) = section.size {
        push_line(out, 1, &format!("size: {size}"));
    }
    if let Some(background) = &section.background {
        push_background(out, 1, background);
    }
    if let Some(title) = &section.title {
        push_line(out, 1, "title:");
        push_text_props(out, 2, title);
    }
    if let Some(subtitle) = &section.subtitle {
        push_line(out, 1, "subtitle:");
        push_text_props(out, 2, subtitle);
    }
    if let Some(text) = &section.text {
        push_line(out, 1, "text:");
        push_text_props(out, 2, text);
    }
    for element in &section.children {
        push_element(out, 1, element);
    }
}

fn push_text_props(out: &mut String, indent: usize, text: &TextElement) {
    push_line(out, indent, &format!("value: {}", quoted(&text.value)));
    push_line(out, indent, &format!("font: {}", font(&text.font)));
    push_line(out, indent, &format!("color: {}", text.color.to_hex()));
    push_line(out, indent, &format!("position: {}", text.position));
    if text.align == Align::Center {
        push_line(out, indent, "align: center");
    }
    if let Some(w) = text.maxwidth {
        push_line(out, indent, &format!("maxwidth: {w}"));
    }
    if let Some(h) = text.lineheight {
        push_line(out, indent, &format!("lineheight: {h}"));
    }
}

fn push_element(out: &mut String, indent: usize, element: &Element) {
    match element {
        Element::Box(e) => push_box(out, indent, e),
        Element::Text(e) => {
            push_line(out, indent, &format!("{}:", e.id));
            push_text_props(out, indent + 1, e);
        }
        Element::Image(e) => push_image(out, indent, e),
        Element::Pie(e) => push_pie(out, indent, e),
        Element::Bar(e) => push_bar(out, indent, e),
        Element::Picturegraph(e) => push_picturegraph(out, indent, e),
    }
}

fn push_box(out: &mut String, indent: usize, e: &BoxElement) {
    push_line(out, indent, &format!("{}:", e.id));
    push_line(out, indent + 1, &format!("position: {}", e.position));
    push_line(out, indent + 1, &format!("size: {}", e.size));
    push_background(out, indent + 1, &e.background);
}

fn push_image(out: &mut String, indent: usize, e: &ImageElement) {
    push_line(out, indent, &format!("{}:", e.id));
    push_line(out, indent + 1, &format!("position: {}", e.position));
    push_line(out, indent + 1, &format!("size: {}", e.size));
    push_line(out, indent + 1, &format!("src: {}", quoted(&e.source)));
}

fn push_data(out: &mut String, indent: usize, data: &[ChartDatum]) {
    push_line(out, indent, "data:");
    for datum in data {
        let value = match &datum.value {
            DataValue::Number(n) => quoted(&number(*n)),
            DataValue::Reference(name) => quoted(&format!("{{{{{name}}}}}")),
        };
        push_line(
            out,
            indent + 1,
            &format!("{}: {value}", quoted(&datum.label)),
        );
    }
}

fn on_off(value: bool) -> &'static str {
    if value {
        "on"
    } else {
        "off"
    }
}

fn push_pie(out: &mut String, indent: usize, e: &PieChart) {
    push_line(out, indent, &format!("{}:", e.id));
    push_line(out, indent + 1, &format!("position: {}", e.position));
    push_line(out, indent + 1, &format!("size: {}", e.radius));
    let style = match e.style {
        PieStyle::Pie => "pie",
        PieStyle::Donut => "donut",
    };
    push_line(out, indent + 1, &format!("type: {style}"));
    push_line(out, indent + 1, &format!("padding: {}", e.padding));
    let colors: Vec<String> = e.colors.iter().map(|c| c.to_hex()).collect();
    push_line(out, indent + 1, &format!("colors: {}", colors.join(",")));
    if !e.title.is_empty() {
        push_line(out, indent + 1, &format!("title: {}", quoted(&e.title)));
    }
    if let Some(bg) = e.background {
        push_line(out, indent + 1, &format!("bgcolor: {}", bg.to_hex()));
    }
    push_line(
        out,
        indent + 1,
        &format!("showpercentage: {}", on_off(e.show_percentage)),
    );
    push_line(
        out,
        indent + 1,
        &format!("showtitle: {}", on_off(e.show_title)),
    );
    push_line(
        out,
        indent + 1,
        &format!("showlegend: {}", on_off(e.show_legend)),
    );
    push_data(out, indent + 1, &e.data);
}

fn push_bar(out: &mut String, indent: usize, e: &BarChart) {
    push_line(out, indent, &format!("{}:", e.id));
    push_line(out, indent + 1, &format!("position: {}", e.position));
    push_line(out, indent + 1, &format!("size: {}", e.size));
    let colors: Vec<String> = e.colors.iter().map(|c| c.to_hex()).collect();
    push_line(out, indent + 1, &format!("colors: {}", colors.join(",")));
    if let Some(bg) = e.background {
        push_line(out, indent + 1, &format!("bgcolor: {}", bg.to_hex()));
    }
    push_line(
        out,
        indent + 1,
        &format!("showvalues: {}", on_off(e.show_values)),
    );
    push_data(out, indent + 1, &e.data);
}

fn push_picturegraph(out: &mut String, indent: usize, e: &Picturegraph) {
    push_line(out, indent, &format!("{}:", e.id));
    push_line(out, indent + 1, &format!("position: {}", e.position));
    push_line(out, indent + 1, &format!("src: {}", quoted(&e.icon_source)));
    push_line(out, indent + 1, &format!("iconsize: {}", e.icon_size));
    push_line(out, indent + 1, &format!("columns: {}", e.columns));
    push_line(out, indent + 1, &format!("spacing: {}", e.spacing));
    push_line(out, indent + 1, &format!("total: {}", e.total));
    let value = match &e.value {
        DataValue::Number(n) => number(*n),
        DataValue::Reference(name) => quoted(&format!("{{{{{name}}}}}")),
    };
    push_line(out, indent + 1, &format!("value: {value}"));
    push_line(
        out,
        indent + 1,
        &format!("fillcolor: {}", e.fill_color.to_hex()),
    );
    push_line(
        out,
        indent + 1,
        &format!("emptycolor: {}", e.empty_color.to_hex()),
    );
}
