//! Component-type census of parsed models.
//!
//! Counts occurrences of each component type per model, in the style of
//! the published analysis tables: one row per type id, a Sum row, and a
//! Count row (number of types present). Types the language cannot
//! express (introduction text, tables, grouped/stacked bars, line and
//! map charts, report links) appear as "n/a" rows rather than zeros, and
//! body images fall outside the head/foot logo taxonomy so they get
//! their own extra row.

use std::collections::BTreeMap;

use crate::model::{Census, ComponentType, Element, InfographicModel, Section, SectionKind};

/// Component ids the language has no construct for; rendered as "n/a".
const NOT_COMPUTABLE: [&str; 7] = ["C4", "C10", "C13", "C14", "C16", "C17", "C22"];

pub fn census(model: &InfographicModel) -> Census {
    let mut counts: BTreeMap<ComponentType, u32> = BTreeMap::new();
    for ty in ComponentType::ALL {
        counts.insert(ty, 0);
    }
    let mut body_images = 0u32;

    // The body section always exists.
    counts.insert(ComponentType::BodySection, 1);

    if let Some(head) = &model.head {
        counts.insert(ComponentType::HeadSection, 1);
        counts.insert(ComponentType::TitleText, head.title.is_some() as u32);
        counts.insert(ComponentType::SubtitleText, head.subtitle.is_some() as u32);
        tally_section_children(head, &mut counts, ComponentType::HeadLogo);
    }
    if let Some(foot) = &model.foot {
        counts.insert(ComponentType::FootSection, 1);
        counts.insert(ComponentType::FootTitleText, foot.title.is_some() as u32);
        counts.insert(ComponentType::FootText, foot.text.is_some() as u32);
        tally_section_children(foot, &mut counts, ComponentType::FootLogo);
    }

    for element in &model.body {
        match element {
            Element::Box(_) => bump(&mut counts, ComponentType::Box),
            Element::Text(text) => match text.role {
                crate::model::TextRole::Title => bump(&mut counts, ComponentType::BoxTitleText),
                _ => bump(&mut counts, ComponentType::BodyText),
            },
            Element::Image(_) => body_images += 1,
            Element::Pie(_) => bump(&mut counts, ComponentType::PieChart),
            Element::Bar(_) => bump(&mut counts, ComponentType::BarChart),
            Element::Picturegraph(_) => bump(&mut counts, ComponentType::Picturegraph),
        }
    }

    Census {
        counts,
        body_images,
    }
}

/// Images nested in a section count as that section's logo type; boxes
/// and charts nested there still count toward their global rows.
fn tally_section_children(
    section: &Section,
    counts: &mut BTreeMap<ComponentType, u32>,
    logo: ComponentType,
) {
    debug_assert!(matches!(
        (section.kind, logo),
        (SectionKind::Head, ComponentType::HeadLogo) | (SectionKind::Foot, ComponentType::FootLogo)
    ));
    for element in &section.children {
        match element {
            Element::Image(_) => bump(counts, logo),
            Element::Box(_) => bump(counts, ComponentType::Box),
            Element::Text(_) => {}
            Element::Pie(_) => bump(counts, ComponentType::PieChart),
            Element::Bar(_) => bump(counts, ComponentType::BarChart),
            Element::Picturegraph(_) => bump(counts, ComponentType::Picturegraph),
        }
    }
}

fn bump(counts: &mut BTreeMap<ComponentType, u32>, ty: ComponentType) {
    *counts.entry(ty).or_insert(0) += 1;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableFormat {
    Tsv,
    Csv,
}

impl TableFormat {
    fn separator(self) -> char {
        match self {
            TableFormat::Tsv => '\t',
            TableFormat::Csv => ',',
        }
    }
}

/// Renders censuses as a table: `Id / Name / one column per model`,
/// rows C1..C22 in id order (n/a where not computable), an extra
/// "body images" row, then Sum and Count rows. Column order equals
/// input order.
pub fn census_table(models: &[(String, Census)], format: TableFormat) -> String {
    let sep = format.separator();
    let mut out = String::new();

    let mut header = format!("Id{sep}Name");
    for (name, _) in models {
        header.push(sep);
        header.push_str(name);
    }
    out.push_str(&header);
    out.push('\n');

    // All C ids in numeric order, computable or not.
    let mut rows: Vec<(String, String, Vec<String>)> = Vec::new();
    let computable: BTreeMap<&str, ComponentType> =
        ComponentType::ALL.iter().map(|&ty| (ty.id(), ty)).collect();
    for n in 1..=22u32 {
        let id = format!("C{n}");
        if let Some(&ty) = computable.get(id.as_str()) {
            let cells = models
                .iter()
                .map(|(_, census)| census.count(ty).to_string())
                .collect();
            rows.push((id, ty.name().to_string(), cells));
        } else {
            debug_assert!(NOT_COMPUTABLE.contains(&id.as_str()));
            let cells = models.iter().map(|_| "n/a".to_string()).collect();
            let name = placeholder_name(&id).to_string();
            rows.push((id, name, cells));
        }
    }
    rows.push((
        String::new(),
        "Body images".to_string(),
        models
            .iter()
            .map(|(_, c)| c.body_images.to_string())
            .collect(),
    ));
    rows.push((
        String::new(),
        "Sum".to_string(),
        models.iter().map(|(_, c)| c.sum().to_string()).collect(),
    ));
    rows.push((
        String::new(),
        "Count".to_string(),
        models
            .iter()
            .map(|(_, c)| c.nonzero_rows().to_string())
            .collect(),
    ));

    for (id, name, cells) in rows {
        out.push_str(&id);
        out.push(sep);
        out.push_str(&name);
        for cell in cells {
            out.push(sep);
            out.push_str(&cell);
        }
        out.push('\n');
    }
    out
}

fn placeholder_name(id: &str) -> &'static str {
    match id {
        "C4" => "Introduction text",
        "C10" => "Table",
        "C13" => "Grouped bar chart",
        "C14" => "Stacked bar chart",
        "C16" => "Line chart",
        "C17" => "Map chart",
        "C22" => "Link to full report",
        _ => "",
    }
}
