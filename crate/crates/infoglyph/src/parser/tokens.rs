//! Scalar token grammars: colors, dimensions, positions, fonts, decimals.

use thiserror::Error;

use crate::model::{Color, Dimensions, FontSpec, FontWeight, Point};

/// A scalar token that does not match its grammar.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{0}")]
pub struct TokenError(pub String);

fn err<T>(message: impl Into<String>) -> Result<T, TokenError> {
    Err(TokenError(message.into()))
}

/// The 16 CSS basic color names. The specimens only use `white`, `black`
/// and the shorthand `0`.
const NAMED_COLORS: [(&str, Color); 16] = [
    ("aqua", Color::rgb(0x00, 0xff, 0xff)),
    ("black", Color::rgb(0x00, 0x00, 0x00)),
    ("blue", Color::rgb(0x00, 0x00, 0xff)),
    ("fuchsia", Color::rgb(0xff, 0x00, 0xff)),
    ("gray", Color::rgb(0x80, 0x80, 0x80)),
    ("green", Color::rgb(0x00, 0x80, 0x00)),
    ("lime", Color::rgb(0x00, 0xff, 0x00)),
    ("maroon", Color::rgb(0x80, 0x00, 0x00)),
    ("navy", Color::rgb(0x00, 0x00, 0x80)),
    ("olive", Color::rgb(0x80, 0x80, 0x00)),
    ("purple", Color::rgb(0x80, 0x00, 0x80)),
    ("red", Color::rgb(0xff, 0x00, 0x00)),
    ("silver", Color::rgb(0xc0, 0xc0, 0xc0)),
    ("teal", Color::rgb(0x00, 0x80, 0x80)),
    ("white", Color::rgb(0xff, 0xff, 0xff)),
    ("yellow", Color::rgb(0xff, 0xff, 0x00)),
];

/// Accepts six hex digits without `#`, a CSS basic color name, or the
/// bare digit `0` (specimen shorthand for black).
pub fn parse_color(token: &str) -> Result<Color, TokenError> {
    let token = token.trim();
    if token.is_empty() {
        return err("empty color token");
    }
    if token == "0" {
        return Ok(Color::BLACK);
    }
    if token.len() == 6 && token.bytes().all(|b| b.is_ascii_hexdigit()) {
        let r = u8::from_str_radix(&token[0..2], 16).unwrap();
        let g = u8::from_str_radix(&token[2..4], 16).unwrap();
        let b = u8::from_str_radix(&token[4..6], 16).unwrap();
        return Ok(Color::rgb(r, g, b));
    }
    let lower = token.to_ascii_lowercase();
    for (name, color) in NAMED_COLORS {
        if lower == name {
            return Ok(color);
        }
    }
    err(format!(
        "\"{token}\" is not a color: expected 6 hex digits, a CSS basic color name, or 0"
    ))
}

fn parse_pair(token: &str) -> Result<(i64, i64), TokenError> {
    let token = token.trim().trim_matches(|c| c == '"' || c == '\'');
    let (left, right) = token
        .split_once(['x', 'X'])
        .ok_or_else(|| TokenError(format!("\"{token}\": expected <int>x<int>")))?;
    let parse_int = |part: &str| -> Result<i64, TokenError> {
        part.trim()
            .parse::<i64>()
            .map_err(|_| TokenError(format!("\"{part}\" is not an integer in \"{token}\"")))
    };
    Ok((parse_int(left)?, parse_int(right)?))
}

/// `<w>x<h>`, both at least 1.
pub fn parse_dimensions(token: &str) -> Result<Dimensions, TokenError> {
    let (w, h) = parse_pair(token)?;
    if w < 1 || h < 1 {
        return err(format!("\"{token}\": width and height must be >= 1"));
    }
    if w > u32::MAX as i64 || h > u32::MAX as i64 {
        return err(format!("\"{token}\": dimension out of range"));
    }
    Dimensions::new(w as u32, h as u32).map_err(|e| TokenError(e.to_string()))
}

/// `<x>x<y>`, both non-negative (origin at canvas top-left).
pub fn parse_point(token: &str) -> Result<Point, TokenError> {
    let (x, y) = parse_pair(token)?;
    if x < 0 || y < 0 {
        return err(format!("\"{token}\": coordinates must be >= 0"));
    }
    if x > u32::MAX as i64 || y > u32::MAX as i64 {
        return err(format!("\"{token}\": coordinate out of range"));
    }
    Ok(Point::new(x as u32, y as u32))
}

/// `[<weight>] <size>px <family...>`; weight is `bold` or 100..900 in
/// hundreds; the family is the remainder and may contain spaces.
pub fn parse_font(token: &str) -> Result<FontSpec, TokenError> {
    let mut parts = token.split_whitespace().peekable();
    let first = match parts.peek() {
        Some(p) => *p,
        None => return err("empty font token"),
    };

    let weight = if first.eq_ignore_ascii_case("bold") {
        parts.next();
        FontWeight::Bold
    } else if let Ok(n) = first.parse::<u16>() {
        if (100..=900).contains(&n) && n % 100 == 0 {
            parts.next();
            FontWeight::Numeric(n)
        } else {
            FontWeight::Normal
        }
    } else {
        FontWeight::Normal
    };

    let size_token = parts
        .next()
        .ok_or_else(|| TokenError(format!("\"{token}\": missing <size>px")))?;
    let size = size_token
        .strip_suffix("px")
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| TokenError(format!("\"{size_token}\" is not a pixel size like 15px")))?;

    let family = parts.collect::<Vec<_>>().join(" ");
    if family.is_empty() {
        return err(format!("\"{token}\": missing font family"));
    }
    FontSpec::new(weight, size, family).map_err(|e| TokenError(e.to_string()))
}

/// Digits with at most one `,` or `.` separator; `,` is a decimal comma.
pub fn parse_decimal(token: &str) -> Result<f64, TokenError> {
    let token = token.trim();
    if token.is_empty() {
        return err("empty decimal token");
    }
    let separators = token.chars().filter(|c| *c == ',' || *c == '.').count();
    if separators > 1 {
        return err(format!("\"{token}\": more than one decimal separator"));
    }
    let normalized = token.replace(',', ".");
    if !normalized.chars().all(|c| c.is_ascii_digit() || c == '.') {
        return err(format!("\"{token}\" is not a decimal number"));
    }
    if !normalized.chars().any(|c| c.is_ascii_digit()) {
        return err(format!("\"{token}\" is not a decimal number"));
    }
    normalized
        .parse::<f64>()
        .map_err(|_| TokenError(format!("\"{token}\" is not a decimal number")))
}

/// `on`/`off` switches used by chart display keys.
pub fn parse_on_off(token: &str) -> Result<bool, TokenError> {
    match token.trim() {
        "on" => Ok(true),
        "off" => Ok(false),
        other => err(format!("\"{other}\": expected on or off")),
    }
}
