//! Bundled specimen corpus: ten published infographic listings
//! transcribed into the model syntax, with remote image URLs rewritten
//! to local stand-ins so everything parses, renders, and tests offline.
//! Per-file transcription notes live in `fixtures/PROVENANCE.md`.

use std::path::PathBuf;

/// Specimen identifiers in corpus order.
pub const SPECIMEN_NAMES: [&str; 10] = [
    "alcoa",
    "autodesk",
    "cookcounty",
    "crocs",
    "firsthorizon",
    "gsi",
    "lenovo",
    "homedepot",
    "trinseo",
    "vanderbilt",
];

/// Returns the bundled model text for a specimen.
pub fn load_specimen(name: &str) -> Option<&'static str> {
    let text = match name {
        "alcoa" => include_str!("../fixtures/alcoa.yaml"),
        "autodesk" => include_str!("../fixtures/autodesk.yaml"),
        "cookcounty" => include_str!("../fixtures/cookcounty.yaml"),
        "crocs" => include_str!("../fixtures/crocs.yaml"),
        "firsthorizon" => include_str!("../fixtures/firsthorizon.yaml"),
        "gsi" => include_str!("../fixtures/gsi.yaml"),
        "lenovo" => include_str!("../fixtures/lenovo.yaml"),
        "homedepot" => include_str!("../fixtures/homedepot.yaml"),
        "trinseo" => include_str!("../fixtures/trinseo.yaml"),
        "vanderbilt" => include_str!("../fixtures/vanderbilt.yaml"),
        _ => return None,
    };
    Some(text)
}

/// The bundled sample account (direct values plus indirect formulas).
pub fn sample_account() -> &'static str {
    include_str!("../fixtures/account.yaml")
}

/// On-disk fixtures directory; `file:` asset paths in the specimens
/// resolve against this.
pub fn dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}
