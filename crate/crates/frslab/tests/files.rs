//! Shipped corpus files, cache round trips and file canonicalization.
//! Set `FRSLAB_BLESS=1` to regenerate the corpus directory.

use std::path::PathBuf;

use frslab::cache::Cache;
use frslab::schemefile::{canonicalize, parse_scheme, write_scheme};
use frslab_core::constructions::cia_hat;
use frslab_core::corpus;
use frslab_core::count::{count_lifted, CountConfig, CountRecord, Method};
use frslab_core::scheme::scheme_hash;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

#[test]
fn corpus_files_are_canonical() {
    let bless = std::env::var_os("FRSLAB_BLESS").is_some();
    let mut schemes = corpus::all();
    schemes.push(cia_hat(&corpus::hat_base()).unwrap().hat);
    for x in schemes {
        let path = corpus_dir().join(format!("{}.toml", x.name));
        let text = write_scheme(&x);
        if bless {
            std::fs::write(&path, &text).unwrap();
        }
        let on_disk = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(on_disk, text, "{}", path.display());
        assert_eq!(parse_scheme(&on_disk).unwrap(), x);
        assert_eq!(canonicalize(&on_disk).unwrap(), on_disk);
    }
}

#[test]
fn hashes_are_distinct_and_stable() {
    let hashes: Vec<_> = corpus::all().iter().map(scheme_hash).collect();
    for (i, h) in hashes.iter().enumerate() {
        assert!(!hashes[..i].contains(h));
    }
    assert_eq!(hashes, corpus::all().iter().map(scheme_hash).collect::<Vec<_>>());
}

#[test]
fn cache_round_trip_over_corpus_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::new(dir.path());
    let cfg = CountConfig::default();
    for x in corpus::all() {
        let h = scheme_hash(&x);
        for (p, r, n) in [(2, 1, 3), (3, 1, 2), (5, 1, 2), (2, 2, 2), (3, 2, 1)] {
            let count = count_lifted(&x, p, n, r, &cfg).unwrap();
            let rec = CountRecord { scheme: h, p, r, n, count: count.clone(), method: Method::Lifted, elapsed: None };
            cache.put(&rec).unwrap();
            let back = cache.get(&h, p, r, n).unwrap().unwrap();
            assert_eq!(back, rec);
            assert_eq!(back.count, count_lifted(&x, p, n, r, &cfg).unwrap());
        }
    }
}
