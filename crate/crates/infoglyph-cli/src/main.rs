//! Command-line front end for the infographic pipeline.
//!
//! Exit codes: 0 success, 1 usage error, 2 parse/validation error,
//! 3 binding error, 4 asset or file-system error. Diagnostics go to
//! stderr; data outputs go to stdout unless `-o` names a file.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use infoglyph::analyzer::{self, TableFormat};
use infoglyph::assets::{AssetStore, FetchPolicy};
use infoglyph::binder;
use infoglyph::model::InfographicModel;
use infoglyph::parser::{self, Severity};
use infoglyph::render::{self, FontCatalog, RenderError};

const EXIT_USAGE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BIND: u8 = 3;
const EXIT_ASSET: u8 = 4;

#[derive(Parser)]
#[command(
    name = "infoglyph",
    version,
    about = "Parse, bind, render, and analyze infographic models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Render a model to a PNG image.
    Render {
        /// Model file.
        model: PathBuf,
        /// Output PNG path (stdout when absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Account file supplying indicator values for placeholders.
        #[arg(long)]
        data: Option<PathBuf>,
        /// Asset cache directory (INFOGLYPH_ASSETS, default ./assets-cache).
        #[arg(long)]
        assets: Option<PathBuf>,
        /// Font directory with optional fonts.tsv aliases
        /// (INFOGLYPH_FONTS, default: bundled font only).
        #[arg(long)]
        fonts: Option<PathBuf>,
        /// Fail on cache misses instead of fetching over the network.
        #[arg(long)]
        offline: bool,
    },
    /// Parse and lint a model; exit 0 iff there are no errors.
    Validate {
        /// Model file.
        model: PathBuf,
    },
    /// Component census of one or more models, as a table.
    Census {
        /// Model files (one table column each).
        #[arg(required = true)]
        models: Vec<PathBuf>,
        /// Column separator.
        #[arg(long, value_enum, default_value_t = FormatArg::Tsv)]
        format: FormatArg,
        /// Output path (stdout when absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Resolve placeholders from an account and print the canonical
    /// bound model.
    Bind {
        /// Model file.
        model: PathBuf,
        /// Account file.
        #[arg(long)]
        data: PathBuf,
        /// Output path (stdout when absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Tsv,
    Csv,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}

fn run(cli: Cli) -> Result<(), u8> {
    match cli.command {
        Command::Render {
            model,
            output,
            data,
            assets,
            fonts,
            offline,
        } => render_command(
            &model,
            output.as_deref(),
            data.as_deref(),
            assets,
            fonts,
            offline,
        ),
        Command::Validate { model } => validate_command(&model),
        Command::Census {
            models,
            format,
            output,
        } => census_command(&models, format, output.as_deref()),
        Command::Bind {
            model,
            data,
            output,
        } => bind_command(&model, &data, output.as_deref()),
    }
}

fn read_file(path: &Path) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn load_model(path: &Path) -> Result<InfographicModel, u8> {
    let source = read_file(path)?;
    match parser::parse_model(&source) {
        Ok(parsed) => {
            for warning in &parsed.warnings {
                eprintln!("{}: {warning}", path.display());
            }
            Ok(parsed.model)
        }
        Err(diagnostics) => {
            for diagnostic in &diagnostics.0 {
                eprintln!("{}: {diagnostic}", path.display());
            }
            Err(EXIT_PARSE)
        }
    }
}

fn load_account(path: &Path) -> Result<infoglyph::model::Account, u8> {
    let source = read_file(path)?;
    parser::parse_account(&source).map_err(|diagnostics| {
        for diagnostic in &diagnostics.0 {
            eprintln!("{}: {diagnostic}", path.display());
        }
        EXIT_PARSE
    })
}

/// Flags beat environment variables beat defaults.
fn resolve_dir(flag: Option<PathBuf>, env_var: &str, default: Option<&str>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(env_var).map(PathBuf::from))
        .or_else(|| default.map(PathBuf::from))
}

fn write_output(output: Option<&Path>, bytes: &[u8]) -> Result<(), u8> {
    match output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_ASSET
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| {
                    eprintln!("error: cannot write to stdout: {e}");
                    EXIT_ASSET
                })
        }
    }
}

fn render_command(
    model_path: &Path,
    output: Option<&Path>,
    data: Option<&Path>,
    assets: Option<PathBuf>,
    fonts: Option<PathBuf>,
    offline: bool,
) -> Result<(), u8> {
    let mut model = load_model(model_path)?;
    if let Some(account_path) = data {
        let account = load_account(account_path)?;
        model = binder::bind(&model, &account).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_BIND
        })?;
    }

    let cache_dir = resolve_dir(assets, "INFOGLYPH_ASSETS", Some("./assets-cache"))
        .expect("default always present");
    let file_base = model_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let store = AssetStore::new(cache_dir).with_file_base(file_base);

    let catalog = match resolve_dir(fonts, "INFOGLYPH_FONTS", None) {
        Some(dir) => FontCatalog::load_dir(&dir).map_err(|e| {
            eprintln!("error: {e}");
            EXIT_ASSET
        })?,
        None => FontCatalog::bundled(),
    };

    let policy = if offline {
        FetchPolicy::Offline
    } else {
        FetchPolicy::Online
    };
    let rendered = render::render(&model, &store, &catalog, policy).map_err(|e| {
        eprintln!("error: {e}");
        match e {
            RenderError::Asset(_) => EXIT_ASSET,
            RenderError::UnboundReference { .. } => EXIT_BIND,
            RenderError::ZeroPieSum { .. } | RenderError::ZeroBarMax { .. } => EXIT_PARSE,
        }
    })?;
    for warning in &rendered.warnings {
        eprintln!("warning: {warning}");
    }
    write_output(output, &render::encode_png(&rendered.image))
}

fn validate_command(model_path: &Path) -> Result<(), u8> {
    let model = load_model(model_path)?;
    let diagnostics = parser::validate(&model);
    for diagnostic in &diagnostics {
        eprintln!("{}: {diagnostic}", model_path.display());
    }
    if diagnostics.iter().any(|d| d.severity == Severity::Error) {
        return Err(EXIT_PARSE);
    }
    Ok(())
}

fn census_command(
    model_paths: &[PathBuf],
    format: FormatArg,
    output: Option<&Path>,
) -> Result<(), u8> {
    let mut censuses = Vec::new();
    for path in model_paths {
        let model = load_model(path)?;
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("model")
            .to_string();
        censuses.push((name, analyzer::census(&model)));
    }
    let format = match format {
        FormatArg::Tsv => TableFormat::Tsv,
        FormatArg::Csv => TableFormat::Csv,
    };
    let table = analyzer::census_table(&censuses, format);
    write_output(output, table.as_bytes())
}

fn bind_command(model_path: &Path, data_path: &Path, output: Option<&Path>) -> Result<(), u8> {
    let model = load_model(model_path)?;
    let account = load_account(data_path)?;
    let bound = binder::bind(&model, &account).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_BIND
    })?;
    write_output(output, parser::canonicalize(&bound).as_bytes())
}
