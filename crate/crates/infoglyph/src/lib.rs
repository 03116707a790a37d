//! Compiler and interpreter for a declarative infographic language.
//!
//! The pipeline has four stages:
//! - **Parse:** [`parser::parse_model`] turns source text into an
//!   [`model::InfographicModel`] with precise diagnostics.
//! - **Bind:** [`binder::bind`] resolves indicator placeholders from an
//!   [`model::Account`] of direct values and indirect formulas.
//! - **Render:** [`render::render`] deterministically rasterizes a bound
//!   model and [`render::encode_png`] emits the bytes.
//! - **Analyze:** [`analyzer::census`] counts component-type occurrences
//!   the way the published infographic analysis tables do.

pub mod analyzer;
pub mod assets;
pub mod binder;
pub mod fixtures;
pub mod model;
pub mod parser;
pub mod render;

pub use model::{Account, Census, Element, InfographicModel, RasterImage};
pub use parser::{parse_account, parse_model, Diagnostic, Diagnostics, ParsedModel, Severity};
