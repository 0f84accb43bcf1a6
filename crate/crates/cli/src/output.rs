//! Artifact writing confined to one output directory.

use std::path::{Component, Path, PathBuf};

use crate::CliError;

#[derive(Debug, Clone)]
pub struct OutDir {
    root: PathBuf,
}

impl OutDir {
    pub fn create(root: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(root)
            .map_err(|e| CliError::Usage(format!("cannot create output directory {}: {e}", root.display())))?;
        Ok(Self {
            root: root.to_path_buf(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Path of a relative artifact name; absolute names and `..` are refused.
    pub fn path(&self, name: &str) -> Result<PathBuf, CliError> {
        let rel = Path::new(name);
        if !rel.components().all(|c| matches!(c, Component::Normal(_))) {
            return Err(CliError::Usage(format!("artifact name `{name}` escapes the output directory")));
        }
        Ok(self.root.join(rel))
    }

    pub fn write(&self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.path(name)?;
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        std::fs::write(&path, bytes)?;
        log::info!("wrote {}", path.display());
        Ok(path)
    }

    pub fn write_json<T: serde::Serialize>(&self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}
