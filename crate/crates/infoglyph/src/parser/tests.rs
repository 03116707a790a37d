use super::*;
use crate::model::{BoxElement, Dimensions, PieStyle, Point};

fn parse_ok(source: &str) -> ParsedModel {
    match parse_model(source) {
        Ok(parsed) => parsed,
        Err(diags) => panic!("expected successful parse, got:\n{diags}"),
    }
}

fn parse_err(source: &str) -> Diagnostics {
    match parse_model(source) {
        Ok(_) => panic!("expected parse failure"),
        Err(diags) => diags,
    }
}

#[test]
fn head_block_with_alias_canvas_key() {
    let source = "bgcolor: black\nbgszize: 1200x747\nfoot: off\nhead:\n  position: 5x5\n  size: 1190x87\n  bgcolor: 9dd191\n";
    let parsed = parse_ok(source);
    let model = &parsed.model;
    assert_eq!(model.canvas, Dimensions::new(1200, 747).unwrap());
    assert_eq!(model.background, Background::Color(Color::BLACK));
    assert!(model.foot.is_none());
    let head = model.head.as_ref().expect("head present");
    assert_eq!(head.position, Some(Point::new(5, 5)));
    assert_eq!(head.size, Some(Dimensions::new(1190, 87).unwrap()));
    assert_eq!(
        head.background,
        Some(Background::Color(parse_color("9dd191").unwrap()))
    );
    let alias_warnings: Vec<_> = parsed
        .warnings
        .iter()
        .filter(|d| d.message.contains("alias of bgsize"))
        .collect();
    assert_eq!(alias_warnings.len(), 1);
    assert_eq!(alias_warnings[0].line, 2);
}

#[test]
fn all_bgsize_alias_spellings_accepted_with_warning() {
    // bgszize, bgsizes, and the Cyrillic-е bgsizе all alias bgsize.
    for alias in ["bgszize", "bgsizes", "bgsiz\u{0435}"] {
        let parsed = parse_ok(&format!(
            "bgcolor: white\n{alias}: 12x34\nhead: off\nfoot: off\n"
        ));
        assert_eq!(
            parsed.model.canvas,
            Dimensions::new(12, 34).unwrap(),
            "{alias}"
        );
        assert_eq!(
            parsed
                .warnings
                .iter()
                .filter(|d| d.message.contains("alias"))
                .count(),
            1,
            "{alias} should warn once"
        );
    }
    let parsed = parse_ok("bgcolor: white\nbgsize: 12x34\nhead: off\nfoot: off\n");
    assert!(parsed.warnings.is_empty(), "correct spelling must not warn");
}

#[test]
fn minimal_document() {
    let parsed = parse_ok("bgcolor: ffffff\nbgsize: 1x1\nhead: off\nfoot: off\n");
    assert!(parsed.model.body.is_empty());
    assert!(parsed.model.head.is_none());
    assert!(parsed.model.foot.is_none());
    assert!(parsed.warnings.is_empty());
}

#[test]
fn quoted_and_unquoted_positions_parse_identically() {
    let source = "bgsize: 645x834\nhead: off\nfoot: off\nbox1:\n  size: 322x209\n  position: \"0x0\"\n  bgcolor: 38beac\n";
    let parsed = parse_ok(source);
    assert_eq!(parsed.model.body.len(), 1);
    let Element::Box(b) = &parsed.model.body[0] else {
        panic!("expected box")
    };
    assert_eq!(b.position, Point::new(0, 0));
    assert_eq!(b.size, Dimensions::new(322, 209).unwrap());

    let unquoted = source.replace("\"0x0\"", "0x0");
    let reparsed = parse_ok(&unquoted);
    assert_eq!(parsed.model, reparsed.model);
}

#[test]
fn unknown_key_is_an_error_with_path() {
    let diags = parse_err("bgcolor: white\nbgsize: 10x10\nbox1:\n  position: 0x0\n  size: 5x5\n  bgcolor: white\n  wobble: 3\n");
    assert!(diags
        .0
        .iter()
        .any(|d| d.severity == Severity::Error && d.key_path == "box1.wobble"));
}

#[test]
fn duplicate_element_id_is_an_error() {
    let diags = parse_err(
        "bgcolor: white\nbgsize: 10x10\nbox1:\n  position: 0x0\n  size: 5x5\n  bgcolor: white\nbox1:\n  position: 1x1\n  size: 2x2\n  bgcolor: black\n",
    );
    assert!(diags
        .0
        .iter()
        .any(|d| d.message.contains("duplicate element id")));
}

#[test]
fn malformed_tokens_cite_the_grammar() {
    let diags = parse_err(
        "bgcolor: white\nbgsize: 10x10\nbox1:\n  position: 0x0\n  size: zebra\n  bgcolor: white\n",
    );
    assert!(diags
        .0
        .iter()
        .any(|d| d.key_path == "box1.size" && d.message.contains("<int>x<int>")));
}

#[test]
fn missing_mandatory_subkey() {
    let diags = parse_err("bgcolor: white\nbgsize: 10x10\nimage1:\n  position: 0x0\n  size: 5x5\n");
    assert!(diags
        .0
        .iter()
        .any(|d| d.key_path == "image1.src" && d.message.contains("missing")));
}

#[test]
fn off_disables_optional_keys() {
    let source = "bgcolor: white\nbgsize: 100x100\nhead:\n  bgcolor: off\n  title:\n    value: Hi\n    font: 10px X\n    position: 5x5\n  subtitle: off\nfoot: off\ntext1:\n  value: hello\n  font: 10px X\n  position: 1x1\n  maxwidth: off\n";
    let parsed = parse_ok(source);
    let head = parsed.model.head.as_ref().unwrap();
    assert!(head.background.is_none());
    assert!(head.title.is_some());
    assert!(head.subtitle.is_none());
    let Element::Text(t) = &parsed.model.body[0] else {
        panic!()
    };
    assert!(t.maxwidth.is_none());
}

#[test]
fn quoted_off_also_means_absent() {
    let source =
        "bgcolor: white\nbgsize: 100x100\nhead: off\nfoot:\n  size: 100x20\n  text: 'off'\n";
    let parsed = parse_ok(source);
    let foot = parsed.model.foot.as_ref().unwrap();
    assert!(foot.text.is_none());
    assert_eq!(foot.size, Some(Dimensions::new(100, 20).unwrap()));
}

#[test]
fn body_order_is_source_order() {
    let source = "bgcolor: white\nbgsize: 100x100\ntext2:\n  value: b\n  font: 10px X\n  position: 1x1\nbox1:\n  position: 0x0\n  size: 5x5\n  bgcolor: white\ntext1:\n  value: a\n  font: 10px X\n  position: 1x1\n";
    let parsed = parse_ok(source);
    let ids: Vec<&str> = parsed.model.body.iter().map(|e| e.id()).collect();
    assert_eq!(ids, ["text2", "box1", "text1"]);
}

#[test]
fn pie_chart_specimen_shape() {
    let source = "bgsize: 1100x850\nbgcolor: white\nhead: off\nfoot: off\npiechart1:\n  colors: 2ca58d,b737b2,1982c9\n  position: 488x135\n  type: donut\n  size: 80\n  padding: 10\n  title: \"Female/Male ratio 2018\"\n  bgcolor: ffffff\n  showpercentage: off\n  showtitle: off\n  showlegend: off\n  data:\n    \"Scope1\": \"76,25\"\n    \"Scope2\": \"46,33\"\n    \"Scope3\": \"61,31\"\n";
    let parsed = parse_ok(source);
    let Element::Pie(pie) = &parsed.model.body[0] else {
        panic!("expected pie")
    };
    assert_eq!(pie.style, PieStyle::Donut);
    assert_eq!(pie.radius, 80);
    assert_eq!(pie.padding, 10);
    assert_eq!(pie.colors.len(), 3);
    assert!(!pie.show_percentage && !pie.show_title && !pie.show_legend);
    assert_eq!(pie.data.len(), 3);
    assert_eq!(pie.data[0].label, "Scope1");
    assert_eq!(pie.data[0].value, DataValue::Number(76.25));
    assert_eq!(pie.background, Some(Color::WHITE));
}

#[test]
fn chart_placeholder_values_are_references() {
    let source = "bgsize: 100x100\nbgcolor: white\nhead: off\nfoot: off\npiechart1:\n  colors: ffffff\n  position: 50x50\n  size: 10\n  data:\n    \"Scope1\": \"{{scope1}}\"\n";
    let parsed = parse_ok(source);
    let Element::Pie(pie) = &parsed.model.body[0] else {
        panic!()
    };
    assert_eq!(
        pie.data[0].value,
        DataValue::Reference("scope1".to_string())
    );
    assert!(pie.show_percentage && pie.show_title && pie.show_legend);
}

#[test]
fn all_zero_pie_data_is_an_error() {
    let diags = parse_err(
        "bgsize: 100x100\nbgcolor: white\nhead: off\nfoot: off\npiechart1:\n  colors: ffffff\n  position: 50x50\n  size: 10\n  data:\n    \"A\": \"0\"\n    \"B\": \"0\"\n",
    );
    assert!(diags
        .0
        .iter()
        .any(|d| d.message.contains("at least one value")));
}

#[test]
fn duplicate_subkey_last_wins_with_warning() {
    let source = "bgcolor: white\nbgsize: 10x10\nbox1:\n  position: 0x0\n  position: 3x3\n  size: 5x5\n  bgcolor: white\n";
    let parsed = parse_ok(source);
    let Element::Box(b) = &parsed.model.body[0] else {
        panic!()
    };
    assert_eq!(b.position, Point::new(3, 3));
    assert!(parsed
        .warnings
        .iter()
        .any(|d| d.message.contains("last one wins")));
}

#[test]
fn nested_section_elements_belong_to_the_section() {
    let source = "bgcolor: white\nbgsize: 800x1036\nfoot: off\nhead:\n  title:\n    value: T\n    font: 40px sans-serif\n    position: 400x110\n  image1:\n    size: 200x35\n    position: 46x18\n    src: \"file:logo.png\"\nimage2:\n  size: 10x10\n  position: 0x0\n  src: \"file:other.png\"\n";
    let parsed = parse_ok(source);
    let head = parsed.model.head.as_ref().unwrap();
    assert_eq!(head.children.len(), 1);
    assert_eq!(head.children[0].id(), "image1");
    assert_eq!(parsed.model.body.len(), 1);
    assert_eq!(parsed.model.body[0].id(), "image2");
}

#[test]
fn parser_is_total_on_garbage() {
    for source in [
        "",
        ":",
        ":::",
        "\u{0}\u{1}\u{2}",
        "key without colon",
        "a: b\n\tc: d",
        "bgsize: 99999999999999999999999999x1",
        "box1:\nbox1:\nbox1:",
        "head:\n head:\n  head:\nhead: head:",
        "\"unterminated: 1",
    ] {
        let _ = parse_model(source);
    }
    let _ = parse_model_bytes(&[0xff, 0xfe, 0x00, 0x80, b'a', b':', b' ', b'b']);
}

#[test]
fn canonical_form_reparses_to_equal_model() {
    let source = "bgcolor: black\nbgszize: 1200x747\nfoot: off\nhead:\n  position: 5x5\n  size: 1190x87\n  bgcolor: 9dd191\n  title:\n    font: 49px Helvetica Light\n    value: Alcoa Sustainability Performance 2016\n    position: 42x67\n    color: white\n    maxwidth: 1200\n  subtitle: off\nbox1:\n  bgcolor: d1e7c6\n  position: 5x92\n  size: 1190x650\ntext1:\n  font: 15px Helvetica Regular\n  color: 6a766a\n  position: 141x224\n  lineheight: 21\n  maxwidth: 145\n  value: \"19% reduction in carbon dioxide equivalent emissions\"\n";
    let first = parse_ok(source).model;
    let canonical = canonicalize(&first);
    let second = parse_ok(&canonical).model;
    assert_eq!(first, second);
    assert!(canonical.contains("bgsize: 1200x747"));
    assert!(!canonical.contains("bgszize"));
}

#[test]
fn canonical_minimal_model_is_four_lines() {
    let parsed = parse_ok("bgcolor: ffffff\nbgsize: 1x1\nhead: off\nfoot: off\n");
    let canonical = canonicalize(&parsed.model);
    assert_eq!(
        canonical,
        "bgcolor: ffffff\nbgsize: 1x1\nhead: off\nfoot: off\n"
    );
    assert_eq!(canonical.lines().count(), 4);
}

#[test]
fn validate_warns_outside_canvas() {
    let parsed = parse_ok(
        "bgcolor: white\nbgsize: 1200x747\nhead: off\nfoot: off\nbox1:\n  position: 2000x2000\n  size: 10x10\n  bgcolor: white\n",
    );
    let diags = validate(&parsed.model);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].severity, Severity::Warning);
    assert!(diags[0].message.contains("outside canvas"));
}

#[test]
fn validate_flags_bound_zero_pie_as_error() {
    use crate::model::{ChartDatum, PieChart};
    let parsed = parse_ok("bgcolor: white\nbgsize: 100x100\nhead: off\nfoot: off\n");
    let mut model = parsed.model;
    model.body.push(Element::Pie(PieChart {
        id: "piechart1".into(),
        position: Point::new(50, 50),
        radius: 10,
        padding: 0,
        style: PieStyle::Pie,
        colors: vec![Color::WHITE],
        title: String::new(),
        background: None,
        show_percentage: false,
        show_title: false,
        show_legend: false,
        data: vec![
            ChartDatum {
                label: "A".into(),
                value: DataValue::Number(0.0),
            },
            ChartDatum {
                label: "B".into(),
                value: DataValue::Number(0.0),
            },
        ],
    }));
    let errors: Vec<_> = validate(&model)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .collect();
    assert_eq!(errors.len(), 1);
    assert!(errors[0].message.contains("zero"));
}

#[test]
fn validate_warns_on_inert_lineheight_and_placeholders() {
    let parsed = parse_ok(
        "bgcolor: white\nbgsize: 100x100\nhead: off\nfoot: off\ntext1:\n  value: \"waste {{reduction}}\"\n  font: 10px X\n  position: 5x5\n  lineheight: 12\n",
    );
    let diags = validate(&parsed.model);
    assert!(diags.iter().any(|d| d.message.contains("lineheight")));
    assert!(diags.iter().any(|d| d.message.contains("placeholder")));
}

#[test]
fn account_file_parses() {
    let account = parse_account(
        "values:\n  waste2011: 100\n  waste2017: 59\nformulas:\n  reduction: \"(waste2011 - waste2017) / waste2011 * 100\"\n",
    )
    .unwrap();
    assert_eq!(account.values["waste2011"], 100.0);
    assert_eq!(
        account.formulas["reduction"],
        "(waste2011 - waste2017) / waste2011 * 100"
    );
}

#[test]
fn account_rejects_cycles_with_line_info() {
    let err = parse_account("formulas:\n  x: \"y\"\n  y: \"x\"\n").unwrap_err();
    assert!(err.0.iter().any(|d| d.message.contains("cycle")));
}

#[test]
fn account_accepts_negative_values() {
    let account = parse_account("values:\n  delta: -4,5\n").unwrap();
    assert_eq!(account.values["delta"], -4.5);
}

#[test]
fn box_without_background_is_an_error() {
    let diags = parse_err("bgcolor: white\nbgsize: 10x10\nbox1:\n  position: 0x0\n  size: 5x5\n");
    assert!(diags.0.iter().any(|d| d.key_path == "box1.bgcolor"));
}

#[test]
fn escaped_dollar_in_value() {
    let parsed = parse_ok(
        "bgcolor: white\nbgsize: 100x100\nhead: off\nfoot: off\ntext1:\n  value: \"US\\$7.8 billion in purchased goods and services\"\n  font: 15px Helvetica Regular\n  position: 584x606\n",
    );
    let Element::Text(t) = &parsed.model.body[0] else {
        panic!()
    };
    assert!(t.value.starts_with("US$7.8"));
}

#[test]
fn missing_bgsize_is_an_error() {
    let diags = parse_err("bgcolor: white\nhead: off\nfoot: off\n");
    assert!(diags.0.iter().any(|d| d.key_path == "bgsize"));
}

mod roundtrip_properties {
    use super::*;
    use crate::model::{FontSpec, FontWeight};
    use proptest::prelude::*;

    fn color_strategy() -> impl Strategy<Value = Color> {
        (any::<u8>(), any::<u8>(), any::<u8>()).prop_map(|(r, g, b)| Color::rgb(r, g, b))
    }

    fn text_strategy(id: String) -> impl Strategy<Value = TextElement> {
        (
            "[ -~]{0,40}",
            1u32..200,
            color_strategy(),
            (0u32..2000, 0u32..2000),
            any::<bool>(),
            proptest::option::of(1u32..1000),
            proptest::option::of(1u32..100),
        )
            .prop_map(
                move |(value, size, color, (x, y), center, maxwidth, lineheight)| TextElement {
                    id: id.clone(),
                    role: TextRole::Body,
                    value,
                    font: FontSpec {
                        weight: FontWeight::Normal,
                        size,
                        family: "Family Name".to_string(),
                    },
                    color,
                    position: Point::new(x, y),
                    align: if center { Align::Center } else { Align::Left },
                    maxwidth,
                    lineheight,
                },
            )
    }

    fn box_strategy(id: String) -> impl Strategy<Value = BoxElement> {
        (
            (0u32..2000, 0u32..2000),
            (1u32..2000, 1u32..2000),
            color_strategy(),
        )
            .prop_map(move |((x, y), (w, h), color)| BoxElement {
                id: id.clone(),
                position: Point::new(x, y),
                size: Dimensions::new(w, h).unwrap(),
                background: Background::Color(color),
            })
    }

    fn model_strategy() -> impl Strategy<Value = InfographicModel> {
        (
            (1u32..2000, 1u32..2000),
            color_strategy(),
            proptest::collection::vec(any::<bool>(), 0..6),
        )
            .prop_flat_map(|((w, h), bg, kinds)| {
                let elements: Vec<_> = kinds
                    .into_iter()
                    .enumerate()
                    .map(|(i, is_text)| {
                        if is_text {
                            text_strategy(format!("text{i}"))
                                .prop_map(Element::Text)
                                .boxed()
                        } else {
                            box_strategy(format!("box{i}"))
                                .prop_map(Element::Box)
                                .boxed()
                        }
                    })
                    .collect();
                (Just((w, h)), Just(bg), elements)
            })
            .prop_map(|((w, h), bg, body)| {
                InfographicModel::new(
                    Dimensions::new(w, h).unwrap(),
                    Background::Color(bg),
                    None,
                    None,
                    body,
                )
                .unwrap()
            })
    }

    proptest! {
        /// parse(canonicalize(m)) must reproduce m structurally.
        #[test]
        fn canonical_roundtrip(model in model_strategy()) {
            let canonical = canonicalize(&model);
            let reparsed = parse_model(&canonical)
                .unwrap_or_else(|d| panic!("canonical text failed to parse:\n{d}\n---\n{canonical}"));
            prop_assert_eq!(reparsed.model, model);
        }

        /// Any byte soup must produce diagnostics, never a crash.
        #[test]
        fn parser_total_on_arbitrary_input(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
            let _ = parse_model_bytes(&bytes);
        }
    }
}
