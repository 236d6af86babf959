//! Stored polynomials, manifests, and the on-disk evaluation cache.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::fraction::TFraction;
use crate::grading::{FormDegree, Grading};
use crate::poly::text::render_lines;
use crate::ZPoly;

pub const CACHE_ENV: &str = "SEPTIMIC_CACHE";

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Canonical file text: a `# s=` header followed by one term per line.
pub fn fraction_text(f: &TFraction) -> String {
    format!("# s={}\n{}", f.s(), render_lines(f.num()))
}

pub fn parse_fraction_text(text: &str) -> Result<TFraction> {
    let mut s = None;
    let mut body = String::with_capacity(text.len());
    for line in text.lines() {
        if let Some(rest) = line.trim().strip_prefix('#') {
            if let Some(v) = rest.trim().strip_prefix("s=") {
                s = Some(v.trim().parse::<u32>().map_err(|e| Error::Manifest(format!("bad s header: {e}")))?);
            }
            continue;
        }
        body.push_str(line);
        body.push(' ');
    }
    let s = s.ok_or_else(|| Error::Manifest("missing `# s=` header".into()))?;
    let num: ZPoly = body.parse()?;
    Ok(TFraction::new(num, s))
}

/// Content-addressed store of evaluated constructions.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        DiskCache { dir: dir.into() }
    }

    /// Directory from `SEPTIMIC_CACHE`, defaulting to `.cache`.
    pub fn from_env() -> Self {
        Self::new(std::env::var_os(CACHE_ENV).map_or_else(|| PathBuf::from(".cache"), PathBuf::from))
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(expanded: &str, d: FormDegree) -> String {
        sha256_hex(&format!("d={d};{expanded}"))
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.poly"))
    }

    /// Unreadable or corrupt entries count as misses.
    pub fn get(&self, key: &str) -> Option<TFraction> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        parse_fraction_text(&text).ok()
    }

    pub fn put(&self, key: &str, f: &TFraction) -> Result<()> {
        let path = self.path(key);
        fs::create_dir_all(path.parent().unwrap())?;
        // Write then rename so a concurrent reader never sees a partial file.
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, fraction_text(f))?;
        fs::rename(tmp, path)?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub degree: i64,
    pub weight: i64,
    pub order: i64,
    pub denominator_exponent: u32,
    pub terms: usize,
    pub construction: String,
    pub hash: String,
    pub path: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub form_degree: u32,
    #[serde(default, rename = "entry")]
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn new(d: FormDegree) -> Self {
        Manifest { form_degree: d.get(), entries: Vec::new() }
    }

    pub fn get(&self, name: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let m: Manifest = toml::from_str(text).map_err(|e| Error::Manifest(e.to_string()))?;
        for e in &m.entries {
            if e.order != m.form_degree as i64 * e.degree - 2 * e.weight {
                return Err(Error::Manifest(format!("{}: inconsistent grading", e.name)));
            }
        }
        Ok(m)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_text(&fs::read_to_string(path)?)
    }

    /// Builds the entry for `f` and writes its polynomial under `dir`.
    pub fn persist(&mut self, dir: &Path, name: &str, f: &TFraction, g: Grading, construction: &str) -> Result<()> {
        let text = fraction_text(f);
        let rel = format!("polys/{name}.poly");
        let path = dir.join(&rel);
        fs::create_dir_all(path.parent().unwrap())?;
        fs::write(&path, &text)?;
        self.entries.push(ManifestEntry {
            name: name.to_string(),
            degree: g.degree,
            weight: g.weight,
            order: g.order,
            denominator_exponent: f.s(),
            terms: f.num().len(),
            construction: construction.to_string(),
            hash: sha256_hex(&text),
            path: rel,
        });
        Ok(())
    }

    /// Reads a stored polynomial; a hash mismatch is fatal.
    pub fn load(&self, dir: &Path, name: &str) -> Result<TFraction> {
        let e = self.get(name).ok_or_else(|| Error::UnknownName(name.to_string()))?;
        let text = fs::read_to_string(dir.join(&e.path))?;
        let actual = sha256_hex(&text);
        if actual != e.hash {
            return Err(Error::HashMismatch { name: name.to_string(), expected: e.hash.clone(), actual });
        }
        parse_fraction_text(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fraction_text_round_trip() {
        let f = TFraction::new("3*z2^2 + z4".parse().unwrap(), 2);
        assert_eq!(fraction_text(&f), "# s=2\n3*z2^2\n+ z4\n");
        assert_eq!(parse_fraction_text(&fraction_text(&f)).unwrap(), f);
    }

    #[test]
    fn persist_load_and_tamper() {
        let dir = tempfile::tempdir().unwrap();
        let d = FormDegree::SEPTIC;
        let f = TFraction::new("3*z2^2 + z4".parse().unwrap(), 2);
        let mut m = Manifest::new(d);
        m.persist(dir.path(), "dv_1", &f, Grading::new(2, 4, d), "[t,t]^4").unwrap();
        let text = m.to_text();
        let back = Manifest::from_text(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_text(), text);
        assert_eq!(back.load(dir.path(), "dv_1").unwrap(), f);
        fs::write(dir.path().join("polys/dv_1.poly"), "# s=2\nz4\n").unwrap();
        assert!(matches!(back.load(dir.path(), "dv_1"), Err(Error::HashMismatch { .. })));
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = DiskCache::new(dir.path());
        let key = DiskCache::key("[t,t]^4", FormDegree::SEPTIC);
        assert!(cache.get(&key).is_none());
        let f = TFraction::new("3*z2^2 + z4".parse().unwrap(), 2);
        cache.put(&key, &f).unwrap();
        assert_eq!(cache.get(&key), Some(f));
    }
}
