//! Named experiment files shipped in the `presets` directory.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{CliError, Result};
use crate::spec::ExperimentSpec;

pub const PRESETS_ENV: &str = "HYSTLAB_PRESETS";

/// First existing directory among `$HYSTLAB_PRESETS`, `./presets` and the
/// directory shipped with the source tree.
pub fn presets_dir() -> Option<PathBuf> {
    let candidates = [
        std::env::var_os(PRESETS_ENV).map(PathBuf::from),
        Some(PathBuf::from("presets")),
        Some(PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/presets"))),
    ];
    candidates.into_iter().flatten().find(|p| p.is_dir())
}

pub fn list() -> Result<Vec<(String, Option<String>)>> {
    let dir = presets_dir().ok_or_else(|| CliError::Spec("no presets directory found".into()))?;
    let mut names: Vec<PathBuf> = fs::read_dir(&dir)
        .map_err(|e| CliError::Spec(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "toml"))
        .collect();
    names.sort();
    names
        .iter()
        .map(|p| {
            let spec = load_file(p)?;
            Ok((stem(p), spec.description))
        })
        .collect()
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn load_file(path: &Path) -> Result<ExperimentSpec> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Spec(format!("cannot read {}: {e}", path.display())))?;
    ExperimentSpec::from_toml(&text).map_err(|e| match e {
        CliError::Spec(msg) => CliError::Spec(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn preset_path(name: &str) -> Option<PathBuf> {
    let p = presets_dir()?.join(format!("{name}.toml"));
    p.is_file().then_some(p)
}

/// A spec file path, or else the name of a preset.
pub fn resolve(arg: &str) -> Result<ExperimentSpec> {
    let path = Path::new(arg);
    if path.is_file() {
        return load_file(path);
    }
    match preset_path(arg) {
        Some(p) => load_file(&p),
        None => Err(CliError::Spec(format!("`{arg}` is neither a spec file nor a preset name"))),
    }
}
