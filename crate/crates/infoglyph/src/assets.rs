//! Asset fetching and caching.
//!
//! Remote images referenced by `src`, `bgimage`, `bgpattern`, and
//! picturegraph icons are downloaded once into a cache directory keyed by
//! a digest of the URL. With a warm cache, renders are reproducible
//! offline: the same model and cache always yield the same pixels.
//!
//! Cache layout: `<root>/<cache_key>.<ext>` plus a `manifest.tsv` of
//! `url<TAB>key` lines. `file:` URLs resolve against a configurable base
//! directory and bypass the cache.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AssetError {
    #[error("asset \"{url}\" not in cache and fetch policy is offline")]
    OfflineMiss { url: String },
    #[error("failed to fetch \"{url}\": {message}")]
    Fetch { url: String, message: String },
    #[error("asset \"{url}\" has an unsupported format (PNG and JPEG are supported)")]
    UnsupportedFormat { url: String },
    #[error("failed to decode \"{url}\": {message}")]
    Decode { url: String, message: String },
    #[error("cache i/o for \"{url}\": {source}")]
    Io {
        url: String,
        #[source]
        source: std::io::Error,
    },
}

/// Whether a cache miss may hit the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetchPolicy {
    Offline,
    Online,
}

/// A decoded RGBA image. Multi-frame inputs keep only the first frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedImage {
    pub width: u32,
    pub height: u32,
    pub rgba: Vec<u8>,
}

/// Stable, filesystem-safe digest of a URL: lowercase hex SHA-256.
pub fn cache_key(url: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(url.as_bytes());
    hex::encode(hasher.finalize())
}

/// Disk-backed image cache with an in-memory decode layer.
pub struct AssetStore {
    root: PathBuf,
    /// Base directory for relative `file:` URLs (the model's directory,
    /// typically).
    file_base: PathBuf,
    entries: Mutex<HashMap<String, Arc<DecodedImage>>>,
}

impl AssetStore {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self {
            root: root.into(),
            file_base: PathBuf::from("."),
            entries: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_file_base(mut self, base: impl Into<PathBuf>) -> Self {
        self.file_base = base.into();
        self
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Returns the decoded image for `url`.
    ///
    /// Order of resolution: in-memory entry, disk cache, then (online
    /// only) HTTP GET that populates both. `file:` URLs read straight
    /// from disk.
    pub fn fetch(&self, url: &str, policy: FetchPolicy) -> Result<Arc<DecodedImage>, AssetError> {
        if let Some(entry) = self.entries.lock().unwrap().get(url) {
            return Ok(entry.clone());
        }

        let image = if let Some(path) = url.strip_prefix("file:") {
            let full = self.resolve_file(path);
            let bytes = fs::read(&full).map_err(|source| AssetError::Io {
                url: url.to_string(),
                source,
            })?;
            decode(url, &bytes)?
        } else {
            self.fetch_remote(url, policy)?
        };

        let image = Arc::new(image);
        self.entries
            .lock()
            .unwrap()
            .insert(url.to_string(), image.clone());
        Ok(image)
    }

    fn resolve_file(&self, path: &str) -> PathBuf {
        let path = Path::new(path);
        if path.is_absolute() {
            path.to_path_buf()
        } else {
            self.file_base.join(path)
        }
    }

    fn fetch_remote(&self, url: &str, policy: FetchPolicy) -> Result<DecodedImage, AssetError> {
        let key = cache_key(url);
        for ext in ["png", "jpg"] {
            let path = self.root.join(format!("{key}.{ext}"));
            if path.exists() {
                let bytes = fs::read(&path).map_err(|source| AssetError::Io {
                    url: url.to_string(),
                    source,
                })?;
                return decode(url, &bytes);
            }
        }
        if policy == FetchPolicy::Offline {
            return Err(AssetError::OfflineMiss {
                url: url.to_string(),
            });
        }

        let response = reqwest::blocking::get(url).map_err(|e| AssetError::Fetch {
            url: url.to_string(),
            message: e.to_string(),
        })?;
        if !response.status().is_success() {
            return Err(AssetError::Fetch {
                url: url.to_string(),
                message: format!("HTTP {}", response.status()),
            });
        }
        let bytes = response.bytes().map_err(|e| AssetError::Fetch {
            url: url.to_string(),
            message: e.to_string(),
        })?;

        let ext = sniff_extension(&bytes).ok_or_else(|| AssetError::UnsupportedFormat {
            url: url.to_string(),
        })?;
        let image = decode(url, &bytes)?;

        fs::create_dir_all(&self.root).map_err(|source| AssetError::Io {
            url: url.to_string(),
            source,
        })?;
        let path = self.root.join(format!("{key}.{ext}"));
        fs::write(&path, &bytes).map_err(|source| AssetError::Io {
            url: url.to_string(),
            source,
        })?;
        let manifest_line = format!("{url}\t{key}\n");
        append_manifest(&self.root.join("manifest.tsv"), &manifest_line).map_err(|source| {
            AssetError::Io {
                url: url.to_string(),
                source,
            }
        })?;
        Ok(image)
    }
}

fn append_manifest(path: &Path, line: &str) -> std::io::Result<()> {
    use std::io::Write;
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    file.write_all(line.as_bytes())
}

fn sniff_extension(bytes: &[u8]) -> Option<&'static str> {
    if bytes.starts_with(&[0x89, b'P', b'N', b'G', 0x0d, 0x0a, 0x1a, 0x0a]) {
        Some("png")
    } else if bytes.starts_with(&[0xff, 0xd8, 0xff]) {
        Some("jpg")
    } else {
        None
    }
}

fn decode(url: &str, bytes: &[u8]) -> Result<DecodedImage, AssetError> {
    if sniff_extension(bytes).is_none() {
        return Err(AssetError::UnsupportedFormat {
            url: url.to_string(),
        });
    }
    let decoded = image::load_from_memory(bytes).map_err(|e| AssetError::Decode {
        url: url.to_string(),
        message: e.to_string(),
    })?;
    let rgba = decoded.to_rgba8();
    Ok(DecodedImage {
        width: rgba.width(),
        height: rgba.height(),
        rgba: rgba.into_raw(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{Read, Write};
    use std::net::TcpListener;
    use std::sync::atomic::{AtomicUsize, Ordering};

    /// 1x1 opaque red PNG.
    const TINY_PNG: &[u8] = &[
        0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x48, 0x44,
        0x52, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x01, 0x08, 0x06, 0x00, 0x00, 0x00, 0x1f,
        0x15, 0xc4, 0x89, 0x00, 0x00, 0x00, 0x0d, 0x49, 0x44, 0x41, 0x54, 0x78, 0xda, 0x63, 0xf8,
        0xcf, 0xc0, 0xf0, 0x1f, 0x00, 0x05, 0x00, 0x01, 0xff, 0x56, 0xc7, 0x2f, 0x0d, 0x00, 0x00,
        0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82,
    ];

    #[test]
    fn cache_key_is_deterministic_hex() {
        let a = cache_key("https://example.com/a.png");
        assert_eq!(a, cache_key("https://example.com/a.png"));
        assert_ne!(cache_key("a"), cache_key("b"));
        assert_eq!(a.len(), 64);
        assert!(a
            .chars()
            .all(|c| c.is_ascii_hexdigit() && !c.is_ascii_uppercase()));
    }

    #[test]
    fn file_urls_resolve_against_base() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("logo.png"), TINY_PNG).unwrap();
        let store = AssetStore::new(dir.path().join("cache")).with_file_base(dir.path());
        let image = store.fetch("file:logo.png", FetchPolicy::Offline).unwrap();
        assert_eq!((image.width, image.height), (1, 1));
    }

    #[test]
    fn offline_miss_names_the_url() {
        let dir = tempfile::tempdir().unwrap();
        let store = AssetStore::new(dir.path());
        let err = store
            .fetch("https://nowhere.invalid/x.png", FetchPolicy::Offline)
            .unwrap_err();
        assert!(err.to_string().contains("nowhere.invalid"));
    }

    #[test]
    fn unsupported_format_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("note.txt"), b"not an image").unwrap();
        let store = AssetStore::new(dir.path().join("cache")).with_file_base(dir.path());
        let err = store
            .fetch("file:note.txt", FetchPolicy::Offline)
            .unwrap_err();
        assert!(matches!(err, AssetError::UnsupportedFormat { .. }));
    }

    /// Serves `TINY_PNG` over HTTP, counting requests.
    fn serve_png(hits: &'static AtomicUsize) -> String {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let addr = listener.local_addr().unwrap();
        std::thread::spawn(move || {
            for stream in listener.incoming() {
                let Ok(mut stream) = stream else { break };
                hits.fetch_add(1, Ordering::SeqCst);
                let mut buf = [0u8; 1024];
                let _ = stream.read(&mut buf);
                let header = format!(
                    "HTTP/1.1 200 OK\r\nContent-Type: image/png\r\nContent-Length: {}\r\nConnection: close\r\n\r\n",
                    TINY_PNG.len()
                );
                let _ = stream.write_all(header.as_bytes());
                let _ = stream.write_all(TINY_PNG);
            }
        });
        format!("http://{addr}/logo.png")
    }

    #[test]
    fn second_fetch_touches_no_network() {
        static HITS: AtomicUsize = AtomicUsize::new(0);
        let url = serve_png(&HITS);
        let dir = tempfile::tempdir().unwrap();
        let store = AssetStore::new(dir.path());

        let first = store.fetch(&url, FetchPolicy::Online).unwrap();
        assert_eq!(HITS.load(Ordering::SeqCst), 1);
        let second = store.fetch(&url, FetchPolicy::Online).unwrap();
        assert_eq!(
            HITS.load(Ordering::SeqCst),
            1,
            "second fetch must be served from cache"
        );
        assert_eq!(first, second);

        // A fresh store over the same directory reads the disk cache.
        let rewarmed = AssetStore::new(dir.path());
        let third = rewarmed.fetch(&url, FetchPolicy::Online).unwrap();
        assert_eq!(HITS.load(Ordering::SeqCst), 1);
        assert_eq!(first, third);

        let manifest = std::fs::read_to_string(dir.path().join("manifest.tsv")).unwrap();
        assert!(manifest.contains(&cache_key(&url)));
        assert!(manifest.contains(&url));
    }

    #[test]
    fn offline_hit_after_warm_cache() {
        static HITS: AtomicUsize = AtomicUsize::new(0);
        let url = serve_png(&HITS);
        let dir = tempfile::tempdir().unwrap();
        let store = AssetStore::new(dir.path());
        store.fetch(&url, FetchPolicy::Online).unwrap();

        let offline = AssetStore::new(dir.path());
        let image = offline.fetch(&url, FetchPolicy::Offline).unwrap();
        assert_eq!((image.width, image.height), (1, 1));
    }
}
