//! Versioned schema envelope shared by every persisted JSON artifact.

use crate::error::{Error, Result};

pub const SCHEMA: &str = "zarex/1";

pub fn expect(found: &str) -> Result<()> {
    if found == SCHEMA {
        Ok(())
    } else {
        Err(Error::BadParams(format!(
            "unsupported schema {found:?}, this build reads {SCHEMA:?}"
        )))
    }
}

/// Hex SHA-256 of a canonical JSON rendering; used as content id for
/// patterns and matrices in records and cache keys.
pub fn content_hash(canonical_json: &str) -> String {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(canonical_json.as_bytes());
    let out = h.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}
