use std::path::{Path, PathBuf};

use sullivan::text::Workspace;

use crate::report::Failure;

/// The catalog in text form, as shipped with the binary.
pub const EMBEDDED: &str = include_str!("../fixtures/catalog.sul");

pub const FIXTURE_ENV: &str = "SULLIVAN_FIXTURES";

pub struct Loaded {
    pub workspace: Workspace,
    /// warnings with the file they came from
    pub warnings: Vec<String>,
}

/// Fixture sources: every `*.sul` file in `$SULLIVAN_FIXTURES`, sorted by
/// name, or the embedded catalog.
fn fixture_sources() -> Result<Vec<(String, String)>, Failure> {
    let Some(dir) = std::env::var_os(FIXTURE_ENV) else {
        return Ok(vec![("<fixtures>".to_string(), EMBEDDED.to_string())]);
    };
    let dir = PathBuf::from(dir);
    let entries = std::fs::read_dir(&dir)
        .map_err(|e| Failure::input(format!("cannot read fixture directory {}: {e}", dir.display())))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sul"))
        .collect();
    paths.sort();
    paths.iter().map(|p| read(p)).collect()
}

fn read(path: &Path) -> Result<(String, String), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    Ok((path.display().to_string(), text))
}

/// Without input files the fixtures are the workspace; with files, only the
/// files unless `with_fixtures` is set.
pub fn workspace(files: &[PathBuf], with_fixtures: bool) -> Result<Loaded, Failure> {
    let mut sources = Vec::new();
    if files.is_empty() || with_fixtures {
        sources.extend(fixture_sources()?);
    }
    for f in files {
        sources.push(read(f)?);
    }
    let mut ws = Workspace::new();
    let mut warnings = Vec::new();
    for (name, text) in sources {
        let before = ws.warnings.len();
        ws.load(&text).map_err(|e| Failure::parse(&name, &e))?;
        warnings.extend(ws.warnings[before..].iter().map(|w| format!("{name}:{w}")));
    }
    Ok(Loaded { workspace: ws, warnings })
}
