//! Outputs are staged in memory and written together, so a failed command
//! leaves nothing behind.

use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Default)]
pub struct Outputs {
    files: Vec<(String, String)>,
}

impl Outputs {
    pub fn add(&mut self, name: &str, contents: impl Into<String>) {
        self.files.push((name.to_string(), contents.into()));
    }

    pub fn json(&mut self, name: &str, value: &serde_json::Value) {
        let mut text = serde_json::to_string_pretty(value).expect("JSON values always serialize");
        text.push('\n');
        self.add(name, text);
    }

    pub fn commit(self, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::input(format!("cannot create {}: {e}", dir.display())))?;
        let mut written = Vec::new();
        for (name, contents) in self.files {
            let path = dir.join(name);
            std::fs::write(&path, contents)
                .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display())))?;
            written.push(path);
        }
        Ok(written)
    }
}
