use std::io::Write;
use std::path::Path;

use metonymy::corpus::{parse_corpus, parse_inline, Corpus, TagSchema};

use crate::error::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Reads a corpus file. A file without any `#doc` line is one document
/// named after the file stem.
pub fn read_corpus(path: &Path, schema: &TagSchema) -> Result<Corpus, CliError> {
    let text = read_text(path)?;
    let has_header = text.lines().any(|l| l.trim_start().starts_with("#doc"));
    if has_header {
        parse_corpus(&text, schema).map_err(|e| CliError::invalid_in(path, e))
    } else {
        let id = path.file_stem().map_or_else(|| "doc".to_string(), |s| s.to_string_lossy().into_owned());
        let doc = parse_inline(&id, &text, schema).map_err(|e| CliError::invalid_in(path, e))?;
        Ok(Corpus::new(vec![doc], schema.clone()))
    }
}

/// Writes `text` to `path` through a temporary file in the same directory,
/// so a failed run never leaves a partial file.
pub fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Writes to `path` when given, else to stdout.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_atomic(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io(Path::new("<stdout>"), e))
        }
    }
}
