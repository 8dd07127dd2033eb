//! Stable content fingerprints (FNV-1a, 64-bit).
//!
//! Used to tie feature rows to the vocabulary they were built against and
//! documents to the preprocessing config that produced them. `std`'s
//! `DefaultHasher` is not stable across releases, so the hash is pinned.

const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

#[derive(Debug, Clone)]
pub struct Fingerprint {
    hash: u64,
}

impl Fingerprint {
    pub fn new() -> Self {
        Fingerprint { hash: FNV_OFFSET }
    }

    pub fn write(&mut self, bytes: &[u8]) -> &mut Self {
        for &b in bytes {
            self.hash ^= u64::from(b);
            self.hash = self.hash.wrapping_mul(FNV_PRIME);
        }
        self
    }

    pub fn write_str(&mut self, s: &str) -> &mut Self {
        // Length-prefix so ("ab","c") and ("a","bc") differ.
        self.write(&(s.len() as u64).to_le_bytes());
        self.write(s.as_bytes())
    }

    pub fn write_u64(&mut self, v: u64) -> &mut Self {
        self.write(&v.to_le_bytes())
    }

    pub fn finish(&self) -> u64 {
        self.hash
    }
}

impl Default for Fingerprint {
    fn default() -> Self {
        Self::new()
    }
}

/// Fingerprint of one string, e.g. a raw commit message.
pub fn of_str(s: &str) -> u64 {
    Fingerprint::new().write(s.as_bytes()).finish()
}

/// Render as a fixed-width hex string for JSON output.
pub fn to_hex(fp: u64) -> String {
    format!("{fp:016x}")
}
