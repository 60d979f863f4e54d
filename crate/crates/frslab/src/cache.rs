//! On-disk count cache. One file per `(scheme, p, r, n)` named
//! `<hash>.p<p>.r<r>.n<n>`, holding the decimal count and the method tag.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use frslab_core::count::{CountRecord, Method};
use frslab_core::scheme::SchemeHash;
use num_bigint::BigUint;

pub const ENV_VAR: &str = "FRSLAB_CACHE";
pub const DEFAULT_DIR: &str = ".frslab-cache";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// `flag`, else `$FRSLAB_CACHE`, else `./.frslab-cache`.
    pub fn resolve(flag: Option<&Path>) -> Self {
        match (flag, std::env::var_os(ENV_VAR)) {
            (Some(d), _) => Cache::new(d),
            (None, Some(d)) if !d.is_empty() => Cache::new(d),
            _ => Cache::new(DEFAULT_DIR),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, scheme: &SchemeHash, p: u64, r: u32, n: u32) -> PathBuf {
        self.dir.join(format!("{scheme}.p{p}.r{r}.n{n}"))
    }

    pub fn get(&self, scheme: &SchemeHash, p: u64, r: u32, n: u32) -> io::Result<Option<CountRecord>> {
        let text = match fs::read_to_string(self.path(scheme, p, r, n)) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e),
        };
        let mut lines = text.lines();
        let bad = || io::Error::new(io::ErrorKind::InvalidData, "malformed cache entry");
        let count: BigUint = lines.next().and_then(|l| l.parse().ok()).ok_or_else(bad)?;
        let method: Method = lines.next().and_then(|l| l.parse().ok()).ok_or_else(bad)?;
        if lines.next().is_some() {
            return Err(bad());
        }
        Ok(Some(CountRecord { scheme: *scheme, p, r, n, count, method, elapsed: None }))
    }

    /// Write through a temporary file in the same directory, then rename.
    pub fn put(&self, rec: &CountRecord) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        write!(tmp, "{}\n{}\n", rec.count, rec.method)?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(&rec.scheme, rec.p, rec.r, rec.n)).map_err(|e| e.error)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use frslab_core::corpus;
    use frslab_core::scheme::scheme_hash;

    #[test]
    fn put_then_get() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path().join("nested"));
        let h = scheme_hash(&corpus::cone());
        assert_eq!(cache.get(&h, 3, 1, 2).unwrap(), None);
        let rec = CountRecord { scheme: h, p: 3, r: 1, n: 2, count: BigUint::from(81u32), method: Method::Lifted, elapsed: None };
        cache.put(&rec).unwrap();
        assert_eq!(cache.get(&h, 3, 1, 2).unwrap(), Some(rec.clone()));
        let name = cache.path(&h, 3, 1, 2).file_name().unwrap().to_string_lossy().into_owned();
        assert!(name.ends_with(".p3.r1.n2") && name.len() == 64 + 9);
        assert_eq!(std::fs::read_to_string(cache.path(&h, 3, 1, 2)).unwrap(), "81\nlifted\n");
        std::fs::write(cache.path(&h, 3, 1, 2), "x\n").unwrap();
        assert!(cache.get(&h, 3, 1, 2).is_err());
    }

    #[test]
    fn flag_wins() {
        assert_eq!(Cache::resolve(Some(Path::new("/tmp/a"))).dir(), Path::new("/tmp/a"));
    }
}
