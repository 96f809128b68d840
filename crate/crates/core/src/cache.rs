//! On-disk cache of bit-channel bounds keyed by `(channel, n, mu)`.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::dmc::DiscreteChannel;
use crate::polarize::{construct_bounds, BitChannelBounds};
use crate::Result;

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "WIRETAP_CACHE_DIR";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsCache {
    dir: PathBuf,
}

/// Hex SHA-256 of the canonical JSON of `(channel, n, mu)`.
pub fn cache_key(w: &DiscreteChannel, n: u32, mu: usize) -> Result<String> {
    let json = serde_json::to_vec(&(w, n, mu))?;
    Ok(hex::encode(Sha256::digest(&json)))
}

impl BoundsCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        BoundsCache { dir: dir.into() }
    }

    /// Cache at `$WIRETAP_CACHE_DIR`, if set and non-empty.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(BoundsCache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, w: &DiscreteChannel, n: u32, mu: usize) -> Result<PathBuf> {
        Ok(self.dir.join(format!("bounds-{}.json", cache_key(w, n, mu)?)))
    }

    /// Cached bounds when a matching, readable entry exists.
    pub fn load(&self, w: &DiscreteChannel, n: u32, mu: usize) -> Result<Option<BitChannelBounds>> {
        let path = self.path_for(w, n, mu)?;
        let Ok(bytes) = fs::read(&path) else { return Ok(None) };
        match serde_json::from_slice::<BitChannelBounds>(&bytes) {
            Ok(b) if b.channel == *w && b.n == n && b.mu == mu && b.len() == 1 << n => Ok(Some(b)),
            _ => Ok(None),
        }
    }

    pub fn store(&self, bounds: &BitChannelBounds) -> Result<PathBuf> {
        fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&bounds.channel, bounds.n, bounds.mu)?;
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(bounds)?)?;
        fs::rename(&tmp, &path)?;
        Ok(path)
    }

    pub fn get_or_construct(&self, w: &DiscreteChannel, n: u32, mu: usize) -> Result<BitChannelBounds> {
        if let Some(b) = self.load(w, n, mu)? {
            return Ok(b);
        }
        let b = construct_bounds(w, n, mu)?;
        self.store(&b)?;
        Ok(b)
    }
}

/// Bounds through the environment cache when configured, else computed directly.
pub fn bounds(w: &DiscreteChannel, n: u32, mu: usize) -> Result<BitChannelBounds> {
    match BoundsCache::from_env() {
        Some(c) => c.get_or_construct(w, n, mu),
        None => construct_bounds(w, n, mu),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_keying() {
        let dir = std::env::temp_dir().join(format!("wiretap-cache-test-{}", std::process::id()));
        let cache = BoundsCache::new(&dir);
        let w = DiscreteChannel::bsc(0.1).unwrap();
        assert!(cache.load(&w, 4, 8).unwrap().is_none());
        let built = cache.get_or_construct(&w, 4, 8).unwrap();
        assert_eq!(cache.load(&w, 4, 8).unwrap(), Some(built.clone()));
        assert_ne!(cache_key(&w, 4, 8).unwrap(), cache_key(&w, 4, 16).unwrap());
        assert_ne!(cache_key(&w, 4, 8).unwrap(), cache_key(&DiscreteChannel::bsc(0.2).unwrap(), 4, 8).unwrap());
        let text: serde_json::Value = serde_json::from_slice(&fs::read(cache.path_for(&w, 4, 8).unwrap()).unwrap()).unwrap();
        for key in ["channel", "n", "mu", "lower", "upper"] {
            assert!(text.get(key).is_some(), "{key}");
        }
        fs::write(cache.path_for(&w, 4, 8).unwrap(), b"not json").unwrap();
        assert!(cache.load(&w, 4, 8).unwrap().is_none());
        fs::remove_dir_all(&dir).unwrap();
    }
}
