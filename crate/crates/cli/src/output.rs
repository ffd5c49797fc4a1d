use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::Context;
use tempfile::NamedTempFile;

/// Default output directory when no `--output` is given.
pub const OUTPUT_DIR_ENV: &str = "NETSTRUCT_OUTPUT_DIR";

pub fn env_dir() -> Option<PathBuf> {
    std::env::var_os(OUTPUT_DIR_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}

/// Directory for multi-file commands: the given one, else the environment
/// default, else the working directory.
pub fn output_dir(given: Option<PathBuf>) -> PathBuf {
    given.or_else(env_dir).unwrap_or_else(|| PathBuf::from("."))
}

/// Where a single report goes.
pub enum Sink {
    Stdout,
    File(PathBuf),
}

/// The given file, else `default_name` inside the environment default
/// directory, else stdout.
pub fn report_sink(given: Option<PathBuf>, default_name: &str) -> Sink {
    match given {
        Some(path) => Sink::File(path),
        None => match env_dir() {
            Some(dir) => Sink::File(dir.join(default_name)),
            None => Sink::Stdout,
        },
    }
}

pub fn emit(sink: &Sink, contents: &str) -> anyhow::Result<()> {
    match sink {
        Sink::Stdout => {
            let mut out = std::io::stdout().lock();
            out.write_all(contents.as_bytes())?;
            out.flush()?;
            Ok(())
        }
        Sink::File(path) => write_files(&[(path.clone(), contents.to_string())]),
    }
}

fn staged(path: &Path, contents: &str) -> anyhow::Result<NamedTempFile> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp =
        NamedTempFile::new_in(&dir).with_context(|| format!("writing in {}", dir.display()))?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    Ok(tmp)
}

/// Writes every file to a temporary sibling first and renames only once all
/// of them are complete, so a failure leaves no partial output.
pub fn write_files(files: &[(PathBuf, String)]) -> anyhow::Result<()> {
    let temps = files
        .iter()
        .map(|(path, contents)| staged(path, contents))
        .collect::<anyhow::Result<Vec<_>>>()?;
    for (tmp, (path, _)) in temps.into_iter().zip(files) {
        tmp.persist(path)
            .with_context(|| format!("writing {}", path.display()))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

/// The requested seed, or a fresh one. Either way it is printed so the run
/// can be repeated.
pub fn effective_seed(seed: Option<u64>) -> u64 {
    use std::hash::{BuildHasher, Hasher};
    let seed = seed.unwrap_or_else(|| {
        std::collections::hash_map::RandomState::new()
            .build_hasher()
            .finish()
    });
    eprintln!("seed: {seed}");
    seed
}
