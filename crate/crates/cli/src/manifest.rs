//! Run manifests: line-oriented `key<TAB>value` files written next to each
//! output. The recorded `arg` lines replay the run.

use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};

use hetwalk::{Error, Result};
use sha2::{Digest, Sha256};

pub const TOOL: &str = concat!("hetwalk ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Default, Clone, PartialEq)]
pub struct Manifest {
    pub entries: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(command: &str, args: &[String]) -> Self {
        let mut m = Manifest::default();
        m.push("tool", TOOL);
        m.push("command", command);
        for a in args {
            m.push("arg", a);
        }
        m
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        let value = value.to_string();
        debug_assert!(!key.contains(['\t', '\n']) && !value.contains('\n'));
        self.entries.push((key.to_owned(), value));
    }

    /// Records a file path and its digest.
    pub fn push_file(&mut self, key: &str, path: &Path) -> Result<()> {
        self.push(key, path.display());
        self.push(&format!("{key}.sha256"), sha256_file(path)?);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn get_all<'a>(&'a self, key: &'a str) -> impl Iterator<Item = &'a str> {
        self.entries.iter().filter(move |(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}\t{v}");
        }
        out
    }

    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut m = Manifest::default();
        for (i, line) in text.lines().enumerate() {
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('\t')
                .ok_or_else(|| format!("line {}: expected key<TAB>value", i + 1))?;
            m.entries.push((k.to_owned(), v.to_owned()));
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render()).map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.to_owned(),
            source: e,
        })?;
        Manifest::parse(&text).map_err(|msg| Error::Parse {
            path: path.to_owned(),
            line: 0,
            message: msg,
        })
    }
}

/// Manifest location for an output file.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest");
    PathBuf::from(s)
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let io_err = |e| Error::Io {
        path: path.to_owned(),
        source: e,
    };
    let mut file = fs::File::open(path).map_err(io_err)?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(io_err)?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hasher.finalize().iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut m = Manifest::new("walk", &["--edges".into(), "a b.tsv".into()]);
        m.push("p", 0.5);
        let back = Manifest::parse(&m.render()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.get_all("arg").collect::<Vec<_>>(), ["--edges", "a b.tsv"]);
        assert_eq!(back.get("p"), Some("0.5"));
    }

    #[test]
    fn digest_of_known_input() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("abc");
        fs::write(&path, "abc").unwrap();
        assert_eq!(
            sha256_file(&path).unwrap(),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn manifest_sits_next_to_output() {
        assert_eq!(manifest_path(Path::new("out/walks.txt")), Path::new("out/walks.txt.manifest"));
    }
}
