//! Binary index files.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic      8 bytes  "EVGIDX\0\0"
//! version    u32
//! dimension  u32
//! count      u64
//! count × { unit_id u64, dimension × f64 }
//! crc32      u32      over every preceding byte
//! ```

use super::VectorIndex;
use crate::corpus::UnitId;
use crate::embed::EmbeddingVector;

pub const MAGIC: &[u8; 8] = b"EVGIDX\0\0";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 8 + 4 + 4 + 8;

#[derive(Debug, thiserror::Error)]
pub enum IndexError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("unsupported index version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("index checksum mismatch (file truncated or corrupted)")]
    ChecksumMismatch,
    #[error("malformed index: {0}")]
    InvalidFormat(String),
}

impl VectorIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        let record_len = 8 + 8 * self.dimension;
        let mut out = Vec::with_capacity(HEADER_LEN + self.entries.len() * record_len + 4);
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
        out.extend_from_slice(&(self.dimension as u32).to_le_bytes());
        out.extend_from_slice(&(self.entries.len() as u64).to_le_bytes());
        for (id, vector) in &self.entries {
            out.extend_from_slice(&id.0.to_le_bytes());
            for x in vector.components() {
                out.extend_from_slice(&x.to_le_bytes());
            }
        }
        let crc = crc32fast::hash(&out);
        out.extend_from_slice(&crc.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, IndexError> {
        if bytes.len() < MAGIC.len() + 4 {
            return Err(IndexError::ChecksumMismatch);
        }
        if &bytes[..8] != MAGIC {
            return Err(IndexError::InvalidFormat("not an index file".into()));
        }
        let version = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(IndexError::VersionMismatch {
                found: version,
                expected: FORMAT_VERSION,
            });
        }
        if bytes.len() < HEADER_LEN + 4 {
            return Err(IndexError::ChecksumMismatch);
        }
        let (body, trailer) = bytes.split_at(bytes.len() - 4);
        if crc32fast::hash(body) != u32::from_le_bytes(trailer.try_into().unwrap()) {
            return Err(IndexError::ChecksumMismatch);
        }

        let dimension = u32::from_le_bytes(body[12..16].try_into().unwrap()) as usize;
        let count = u64::from_le_bytes(body[16..24].try_into().unwrap());
        let record_len = 8 + 8 * dimension;
        let expected = (count as u128) * (record_len as u128) + HEADER_LEN as u128;
        if expected != body.len() as u128 {
            return Err(IndexError::InvalidFormat(format!(
                "{count} records of dimension {dimension} do not fill {} bytes",
                body.len()
            )));
        }

        let mut entries = Vec::with_capacity(count as usize);
        for record in body[HEADER_LEN..].chunks_exact(record_len) {
            let id = UnitId(u64::from_le_bytes(record[..8].try_into().unwrap()));
            if entries.last().is_some_and(|(prev, _): &(UnitId, _)| *prev >= id) {
                return Err(IndexError::InvalidFormat(format!(
                    "unit id {id} out of order"
                )));
            }
            let components = record[8..]
                .chunks_exact(8)
                .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                .collect();
            entries.push((id, EmbeddingVector::from_components(components)));
        }
        Ok(VectorIndex::from_parts(dimension, entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Corpus;
    use crate::embed::HashingEmbedder;

    fn sample() -> VectorIndex {
        let mut c = Corpus::new();
        c.ingest_records("t", &["habeas corpus", "due process", "civil rights"])
            .unwrap();
        VectorIndex::build(&c, &HashingEmbedder::new(32).unwrap()).unwrap()
    }

    #[test]
    fn round_trip_through_file() {
        let idx = sample();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.idx");
        idx.save(&path).unwrap();
        let back = VectorIndex::load(&path).unwrap();
        assert_eq!(back, idx);
        assert_eq!(back.dimension(), 32);
    }

    #[test]
    fn wrong_version_rejected() {
        let mut bytes = sample().to_bytes();
        bytes[8..12].copy_from_slice(&7u32.to_le_bytes());
        assert!(matches!(
            VectorIndex::from_bytes(&bytes),
            Err(IndexError::VersionMismatch { found: 7, expected: 1 })
        ));
    }

    #[test]
    fn truncated_file_fails_checksum() {
        let bytes = sample().to_bytes();
        for cut in [bytes.len() - 1, bytes.len() - 9, 30, 13] {
            assert!(matches!(
                VectorIndex::from_bytes(&bytes[..cut]),
                Err(IndexError::ChecksumMismatch)
            ));
        }
    }

    #[test]
    fn flipped_bit_fails_checksum() {
        let mut bytes = sample().to_bytes();
        bytes[40] ^= 1;
        assert!(matches!(VectorIndex::from_bytes(&bytes), Err(IndexError::ChecksumMismatch)));
    }

    #[test]
    fn foreign_file_rejected() {
        assert!(matches!(
            VectorIndex::from_bytes(b"PK\x03\x04 definitely a zip file"),
            Err(IndexError::InvalidFormat(_))
        ));
    }

    #[test]
    fn missing_file_is_io_error() {
        let err = VectorIndex::load(std::path::Path::new("/nonexistent/evgate.idx")).unwrap_err();
        assert!(matches!(err, IndexError::Io(_)));
    }
}
