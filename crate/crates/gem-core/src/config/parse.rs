use crate::error::{GemError, Result};

/// One `key = value` assignment and where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub source: String,
    pub line: usize,
}

impl Entry {
    pub fn location(&self) -> String {
        if self.line == 0 {
            format!("`{}` ({})", self.key, self.source)
        } else {
            format!("`{}` ({}:{})", self.key, self.source, self.line)
        }
    }
}

/// Assignments from a single source (preset, file or command line).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfigLayer {
    pub source: String,
    pub entries: Vec<Entry>,
}

fn valid_key(key: &str) -> bool {
    let mut parts = 0;
    for seg in key.split('.') {
        if seg.is_empty() || !seg.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit() || b == b'_') {
            return false;
        }
        parts += 1;
    }
    parts >= 2
}

fn err(source: &str, line: usize, reason: impl Into<String>) -> GemError {
    GemError::Config { location: format!("{source}:{line}"), reason: reason.into() }
}

impl ConfigLayer {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are ignored.
    pub fn parse(source: &str, text: &str) -> Result<Self> {
        let mut layer = ConfigLayer { source: source.to_string(), entries: Vec::new() };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(source, line, format!("expected `key = value`, found `{content}`")))?;
            layer.push(key.trim(), value.trim(), line)?;
        }
        Ok(layer)
    }

    /// Builds a layer from `key=value` strings, as given to `--set`.
    pub fn from_assignments(source: &str, assignments: &[String]) -> Result<Self> {
        let mut layer = ConfigLayer { source: source.to_string(), entries: Vec::new() };
        for a in assignments {
            let (key, value) = a
                .split_once('=')
                .ok_or_else(|| GemError::Config { location: source.to_string(), reason: format!("expected key=value, found `{a}`") })?;
            layer.push(key.trim(), value.trim(), 0)?;
        }
        Ok(layer)
    }

    fn push(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        if !valid_key(key) {
            return Err(err(&self.source, line, format!("malformed key `{key}`")));
        }
        if value.is_empty() {
            return Err(err(&self.source, line, format!("`{key}` has no value")));
        }
        if let Some(prev) = self.entries.iter().find(|e| e.key == key) {
            return Err(err(&self.source, line, format!("`{key}` already set on line {}", prev.line)));
        }
        self.entries.push(Entry { key: key.to_string(), value: value.to_string(), source: self.source.clone(), line });
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_blank_lines_and_whitespace() {
        let l = ConfigLayer::parse("t", "# head\n\n  medium.g =  2.5   # trailing\nline.shape=delta\n").unwrap();
        assert_eq!(l.entries.len(), 2);
        assert_eq!(l.get("medium.g").unwrap().value, "2.5");
        assert_eq!(l.get("medium.g").unwrap().line, 3);
        assert_eq!(l.get("line.shape").unwrap().value, "delta");
    }

    #[test]
    fn malformed_lines_name_the_location() {
        let e = ConfigLayer::parse("cfg", "medium.g = 1\nnonsense\n").unwrap_err();
        assert_eq!(e.to_string(), "cfg:2: expected `key = value`, found `nonsense`");
        assert!(ConfigLayer::parse("cfg", "Medium.G = 1").is_err());
        assert!(ConfigLayer::parse("cfg", "medium = 1").is_err());
        assert!(ConfigLayer::parse("cfg", "medium.g =").is_err());
        assert!(ConfigLayer::parse("cfg", "medium.g = 1\nmedium.g = 2").is_err());
    }

    #[test]
    fn set_assignments() {
        let l = ConfigLayer::from_assignments("--set", &["grid.n_z=11".into(), "pulse.center = -3".into()]).unwrap();
        assert_eq!(l.get("pulse.center").unwrap().value, "-3");
        assert!(ConfigLayer::from_assignments("--set", &["grid.n_z".into()]).is_err());
    }
}
