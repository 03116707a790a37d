use super::*;
use crate::assets::{AssetStore, FetchPolicy};
use crate::parser::parse_model;

fn offline_store() -> AssetStore {
    let dir = std::env::temp_dir().join("infoglyph-render-tests-cache");
    AssetStore::new(dir)
}

fn render_source(source: &str) -> Rendered {
    let model = parse_model(source).expect("test model parses").model;
    render(
        &model,
        &offline_store(),
        &FontCatalog::bundled(),
        FetchPolicy::Offline,
    )
    .expect("test model renders")
}

#[test]
fn single_white_pixel() {
    let rendered = render_source("bgcolor: ffffff\nbgsize: 1x1\nhead: off\nfoot: off\n");
    assert_eq!(rendered.image.width, 1);
    assert_eq!(rendered.image.height, 1);
    assert_eq!(rendered.image.pixels, vec![255, 255, 255, 255]);
}

#[test]
fn box_fill_pixel_readback() {
    // The first box of the 645x834 specimen: #38beac at (0,0), 322x209.
    let rendered = render_source(
        "bgcolor: ffffff\nbgsize: 645x834\nhead: off\nfoot: off\nbox1:\n  size: 322x209\n  position: 0x0\n  bgcolor: 38beac\n",
    );
    let inside = rendered.image.get(5, 5);
    assert_eq!((inside.r, inside.g, inside.b), (0x38, 0xbe, 0xac));
    let outside = rendered.image.get(322, 5);
    assert_eq!((outside.r, outside.g, outside.b), (255, 255, 255));
    let corner = rendered.image.get(321, 208);
    assert_eq!((corner.r, corner.g, corner.b), (0x38, 0xbe, 0xac));
}

#[test]
fn rendering_twice_is_byte_identical() {
    let source = "bgcolor: ec7124\nbgsize: 300x200\nhead:\n  bgcolor: off\n  title:\n    value: \"2016 RESPONSIBILITY REPORT\"\n    font: bold 20px Zurich Cn BT\n    color: ffffff\n    position: 20x30\n    maxwidth: 260\n  subtitle: off\nfoot: off\nbox1:\n  size: 100x80\n  position: 10x50\n  bgcolor: fdb859\ntext1:\n  font: 12px Verdana\n  color: ffffff\n  position: 60x90\n  value: \"More than\"\n  align: center\npiechart1:\n  colors: 2ca58d,b737b2,1982c9\n  position: 220x120\n  type: donut\n  size: 40\n  padding: 5\n  bgcolor: ffffff\n  showpercentage: on\n  showtitle: off\n  showlegend: off\n  data:\n    \"a\": \"76,25\"\n    \"b\": \"46,33\"\n    \"c\": \"61,31\"\n";
    let first = render_source(source);
    let second = render_source(source);
    assert_eq!(first.image, second.image);
    assert_eq!(encode_png(&first.image), encode_png(&second.image));
}

#[test]
fn later_elements_paint_over_earlier_ones() {
    let rendered = render_source(
        "bgcolor: ffffff\nbgsize: 20x20\nhead: off\nfoot: off\nbox1:\n  position: 0x0\n  size: 20x20\n  bgcolor: ff0000\nbox2:\n  position: 5x5\n  size: 5x5\n  bgcolor: 0000ff\n",
    );
    let under = rendered.image.get(2, 2);
    assert_eq!((under.r, under.g, under.b), (255, 0, 0));
    let over = rendered.image.get(7, 7);
    assert_eq!((over.r, over.g, over.b), (0, 0, 255));
}

#[test]
fn donut_center_shows_background_disc() {
    let rendered = render_source(
        "bgcolor: 000000\nbgsize: 200x200\nhead: off\nfoot: off\npiechart1:\n  colors: ff0000\n  position: 100x100\n  type: donut\n  size: 60\n  padding: 10\n  bgcolor: ffffff\n  showpercentage: off\n  showtitle: off\n  showlegend: off\n  data:\n    \"only\": \"5\"\n",
    );
    // Center of a donut: inner disc is blank, showing the background disc.
    let center = rendered.image.get(100, 100);
    assert_eq!((center.r, center.g, center.b), (255, 255, 255));
    // Mid-annulus at 12 o'clock is slice-colored.
    let ring = rendered.image.get(100, 100 - 45);
    assert_eq!((ring.r, ring.g, ring.b), (255, 0, 0));
    // The padding ring between slices and disc edge stays background.
    let pad = rendered.image.get(100, 100 - 65);
    assert_eq!((pad.r, pad.g, pad.b), (255, 255, 255));
    // Outside the background disc: canvas color.
    let outside = rendered.image.get(100, 100 - 75);
    assert_eq!((outside.r, outside.g, outside.b), (0, 0, 0));
}

#[test]
fn pie_slices_land_in_expected_quadrants() {
    // Two equal slices: first covers the right half (clockwise from 12
    // o'clock), second the left half.
    let rendered = render_source(
        "bgcolor: ffffff\nbgsize: 100x100\nhead: off\nfoot: off\npiechart1:\n  colors: ff0000,0000ff\n  position: 50x50\n  type: pie\n  size: 40\n  showpercentage: off\n  showtitle: off\n  showlegend: off\n  data:\n    \"a\": \"1\"\n    \"b\": \"1\"\n",
    );
    let right = rendered.image.get(70, 50);
    assert_eq!((right.r, right.g, right.b), (255, 0, 0));
    let left = rendered.image.get(30, 50);
    assert_eq!((left.r, left.g, left.b), (0, 0, 255));
}

#[test]
fn bar_chart_pixels_match_layout() {
    let rendered = render_source(
        "bgcolor: ffffff\nbgsize: 200x150\nhead: off\nfoot: off\nbarchart1:\n  colors: ff0000\n  position: 10x20\n  size: 120x90\n  showvalues: off\n  data:\n    \"x\": \"3\"\n    \"y\": \"1\"\n    \"z\": \"2\"\n",
    );
    // Tallest bar occupies the full plot height at its column.
    let top_of_tallest = rendered.image.get(12, 21);
    assert_eq!(
        (top_of_tallest.r, top_of_tallest.g, top_of_tallest.b),
        (255, 0, 0)
    );
    // Second bar (height 30) leaves the top of its column unpainted.
    let above_second = rendered.image.get(60, 60);
    assert_eq!(
        (above_second.r, above_second.g, above_second.b),
        (255, 255, 255)
    );
    let inside_second = rendered.image.get(60, 100);
    assert_eq!(
        (inside_second.r, inside_second.g, inside_second.b),
        (255, 0, 0)
    );
}

#[test]
fn text_renders_dark_pixels_near_anchor() {
    let rendered = render_source(
        "bgcolor: ffffff\nbgsize: 300x100\nhead: off\nfoot: off\ntext1:\n  value: \"Measurable\"\n  font: 30px AnyFamily\n  color: 000000\n  position: 10x60\n",
    );
    let mut dark = 0;
    for y in 20..70u32 {
        for x in 5..250u32 {
            if rendered.image.get(x, y).r < 80 {
                dark += 1;
            }
        }
    }
    assert!(
        dark > 100,
        "expected glyph coverage, found {dark} dark pixels"
    );
}

#[test]
fn offline_missing_asset_is_an_error_naming_the_url() {
    let model = parse_model(
        "bgcolor: ffffff\nbgsize: 10x10\nhead: off\nfoot: off\nimage1:\n  position: 0x0\n  size: 5x5\n  src: \"https://example.invalid/missing.png\"\n",
    )
    .unwrap()
    .model;
    let err = render(
        &model,
        &offline_store(),
        &FontCatalog::bundled(),
        FetchPolicy::Offline,
    )
    .unwrap_err();
    assert!(err.to_string().contains("example.invalid"));
}

#[test]
fn unbound_chart_reference_is_an_error() {
    let model = parse_model(
        "bgcolor: ffffff\nbgsize: 100x100\nhead: off\nfoot: off\npiechart1:\n  colors: ff0000\n  position: 50x50\n  size: 20\n  data:\n    \"a\": \"{{missing}}\"\n",
    )
    .unwrap()
    .model;
    let err = render(
        &model,
        &offline_store(),
        &FontCatalog::bundled(),
        FetchPolicy::Offline,
    )
    .unwrap_err();
    assert!(matches!(err, RenderError::UnboundReference { .. }));
    assert!(err.to_string().contains("piechart1"));
}

#[test]
fn head_and_foot_backgrounds_default_to_canvas_edges() {
    let rendered = render_source(
        "bgcolor: 000000\nbgsize: 100x100\nhead:\n  size: 100x10\n  bgcolor: ff0000\nfoot:\n  size: 100x10\n  bgcolor: 0000ff\n",
    );
    let head = rendered.image.get(50, 5);
    assert_eq!((head.r, head.g, head.b), (255, 0, 0));
    let middle = rendered.image.get(50, 50);
    assert_eq!((middle.r, middle.g, middle.b), (0, 0, 0));
    let foot = rendered.image.get(50, 95);
    assert_eq!((foot.r, foot.g, foot.b), (0, 0, 255));
}

#[test]
fn picturegraph_tints_split_at_fractional_slot() {
    let dir = tempfile::tempdir().unwrap();
    // 4x4 fully opaque icon.
    let icon = crate::model::RasterImage::new(4, 4, crate::model::Color::WHITE);
    std::fs::write(dir.path().join("icon.png"), encode_png(&icon)).unwrap();
    let store = AssetStore::new(dir.path().join("cache")).with_file_base(dir.path());

    let model = parse_model(
        "bgcolor: ffffff\nbgsize: 60x20\nhead: off\nfoot: off\npicturegraph1:\n  position: 0x0\n  src: \"file:icon.png\"\n  iconsize: 4x4\n  columns: 3\n  spacing: 2\n  total: 3\n  value: 1,5\n  fillcolor: ff0000\n  emptycolor: 0000ff\n",
    )
    .unwrap()
    .model;
    let rendered = render(
        &model,
        &store,
        &FontCatalog::bundled(),
        FetchPolicy::Offline,
    )
    .unwrap();
    // Slot 0 (fill 1.0): all red.
    let slot0 = rendered.image.get(1, 1);
    assert_eq!((slot0.r, slot0.g, slot0.b), (255, 0, 0));
    // Slot 1 (fill 0.5): left half red, right half blue.
    let slot1_left = rendered.image.get(6, 1);
    assert_eq!((slot1_left.r, slot1_left.g, slot1_left.b), (255, 0, 0));
    let slot1_right = rendered.image.get(9, 1);
    assert_eq!((slot1_right.r, slot1_right.g, slot1_right.b), (0, 0, 255));
    // Slot 2 (fill 0.0): all blue.
    let slot2 = rendered.image.get(13, 1);
    assert_eq!((slot2.r, slot2.g, slot2.b), (0, 0, 255));
}

#[test]
fn fuzzed_geometry_never_escapes_the_canvas() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(127121);
    let store = offline_store();
    let catalog = FontCatalog::bundled();
    for _ in 0..100 {
        let w = rng.gen_range(1..80);
        let h = rng.gen_range(1..80);
        let mut source = format!("bgcolor: ffffff\nbgsize: {w}x{h}\nhead: off\nfoot: off\n");
        for i in 0..rng.gen_range(0..6) {
            let x = rng.gen_range(0..200_000u32);
            let y = rng.gen_range(0..200_000u32);
            match rng.gen_range(0..3) {
                0 => source.push_str(&format!(
                    "box{i}:\n  position: {x}x{y}\n  size: {}x{}\n  bgcolor: ff0000\n",
                    rng.gen_range(1..100_000),
                    rng.gen_range(1..100_000)
                )),
                1 => source.push_str(&format!(
                    "text{i}:\n  value: \"overflow test text\"\n  font: {}px X\n  position: {x}x{y}\n  maxwidth: {}\n",
                    rng.gen_range(1..300),
                    rng.gen_range(1..500)
                )),
                _ => source.push_str(&format!(
                    "piechart{i}:\n  colors: ff0000\n  position: {x}x{y}\n  size: {}\n  data:\n    \"a\": \"1\"\n",
                    rng.gen_range(1..100_000)
                )),
            }
        }
        let model = parse_model(&source).expect("generated model parses").model;
        let rendered = render(&model, &store, &catalog, FetchPolicy::Offline).expect("renders");
        assert_eq!(rendered.image.pixels.len(), (w * h * 4) as usize);
    }
}
