//! Binary index container (see `docs/index-format.md`).
//!
//! ```text
//! magic            8 bytes  "CRAGIDX\0"
//! format_version   u32 LE
//! dim              u32 LE
//! count            u64 LE
//! count × {
//!   id_len u32 LE, id (UTF-8)
//!   meta_len u32 LE, meta (JSON)
//!   truncated u8
//!   dim × f64 LE
//! }
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{ChunkMeta, IndexError, IndexedChunk, VectorIndex};
use crate::embedding::EmbeddingVector;

pub const MAGIC: &[u8; 8] = b"CRAGIDX\0";
pub const FORMAT_VERSION: u32 = 1;

impl VectorIndex {
    pub fn save(&self, path: &Path) -> Result<(), IndexError> {
        let tmp = path.with_extension("tmp");
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            self.write_to(&mut w)?;
            w.flush()?;
            w.get_ref().sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<(), IndexError> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.dim as u32).to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        for slot in 0..self.len() {
            let id = self.ids[slot].as_bytes();
            w.write_all(&(id.len() as u32).to_le_bytes())?;
            w.write_all(id)?;
            let meta = serde_json::to_vec(&self.metas[slot]).expect("meta serializes");
            w.write_all(&(meta.len() as u32).to_le_bytes())?;
            w.write_all(&meta)?;
            w.write_all(&[u8::from(self.truncated[slot])])?;
            for v in self.row(slot) {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Loads an index, refusing unknown versions. If `expected_dim` is given
    /// the file must match it.
    pub fn load(path: &Path, expected_dim: Option<usize>) -> Result<Self, IndexError> {
        let mut r = BufReader::new(File::open(path)?);
        Self::read_from(&mut r, expected_dim)
    }

    pub fn read_from<R: Read>(r: &mut R, expected_dim: Option<usize>) -> Result<Self, IndexError> {
        let mut magic = [0u8; 8];
        read_exact(r, &mut magic, "header")?;
        if &magic != MAGIC {
            return Err(IndexError::Version("bad magic header; not an index file".into()));
        }
        let version = read_u32(r, "version")?;
        if version != FORMAT_VERSION {
            return Err(IndexError::Version(format!(
                "format_version {version} is not supported (expected {FORMAT_VERSION})"
            )));
        }
        let dim = read_u32(r, "dim")? as usize;
        if let Some(expected) = expected_dim {
            if expected != dim {
                return Err(IndexError::DimMismatch { expected, actual: dim });
            }
        }
        let count = read_u64(r, "count")?;
        let mut ix = VectorIndex::new(dim);
        let mut buf = [0u8; 8];
        for n in 0..count {
            let id_len = read_u32(r, "id length")? as usize;
            let mut id = vec![0u8; id_len];
            read_exact(r, &mut id, "id")?;
            let id = String::from_utf8(id).map_err(|_| IndexError::Corrupt(format!("chunk {n}: id is not UTF-8")))?;
            let meta_len = read_u32(r, "meta length")? as usize;
            let mut meta = vec![0u8; meta_len];
            read_exact(r, &mut meta, "meta")?;
            let meta: ChunkMeta =
                serde_json::from_slice(&meta).map_err(|e| IndexError::Corrupt(format!("chunk {n}: meta: {e}")))?;
            let mut flag = [0u8; 1];
            read_exact(r, &mut flag, "truncated flag")?;
            let mut values = Vec::with_capacity(dim);
            for _ in 0..dim {
                read_exact(r, &mut buf, "vector")?;
                values.push(f64::from_le_bytes(buf));
            }
            let vector =
                EmbeddingVector::from_unit(values).map_err(|e| IndexError::Corrupt(format!("chunk {n}: {e}")))?;
            ix.upsert(IndexedChunk { record_id: id, vector, meta, truncated: flag[0] != 0 })?;
        }
        if ix.len() as u64 != count {
            return Err(IndexError::Corrupt("duplicate record ids".into()));
        }
        let mut probe = [0u8; 1];
        if r.read(&mut probe)? != 0 {
            return Err(IndexError::Corrupt("trailing bytes after last chunk".into()));
        }
        Ok(ix)
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<(), IndexError> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => IndexError::Corrupt(format!("truncated while reading {what}")),
        _ => IndexError::Io(e),
    })
}

fn read_u32<R: Read>(r: &mut R, what: &str) -> Result<u32, IndexError> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R, what: &str) -> Result<u64, IndexError> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b, what)?;
    Ok(u64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use chrono::{TimeZone, Utc};

    use super::*;
    use crate::index::Filter;
    use crate::ingest::StakeholderGroup;

    fn sample(n: usize, dim: usize) -> VectorIndex {
        let mut ix = VectorIndex::new(dim);
        for i in 0..n {
            let values: Vec<f64> = (0..dim).map(|j| ((i * 31 + j * 7) % 13) as f64 - 6.0 + 0.5).collect();
            ix.upsert(IndexedChunk {
                record_id: format!("id{i}"),
                vector: EmbeddingVector::normalized(values).unwrap(),
                meta: ChunkMeta {
                    initiative_id: "X".into(),
                    topic: "t".into(),
                    stakeholder_group: StakeholderGroup::ALL[i % 8],
                    country: "PL".into(),
                    language: "pl".into(),
                    submitted_at: Utc.with_ymd_and_hms(2024, 1, 1, 0, 0, 0).unwrap(),
                },
                truncated: i % 5 == 0,
            })
            .unwrap();
        }
        ix
    }

    fn bytes(ix: &VectorIndex) -> Vec<u8> {
        let mut out = Vec::new();
        ix.write_to(&mut out).unwrap();
        out
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let ix = sample(40, 12);
        let b = bytes(&ix);
        let back = VectorIndex::read_from(&mut b.as_slice(), Some(12)).unwrap();
        assert_eq!(bytes(&back), b);
        let q = back.get("id3").unwrap().vector;
        assert_eq!(ix.top_k(&q, 10, &Filter::default()).unwrap(), back.top_k(&q, 10, &Filter::default()).unwrap());
    }

    #[test]
    fn empty_index_loads() {
        let b = bytes(&VectorIndex::new(8));
        let back = VectorIndex::read_from(&mut b.as_slice(), None).unwrap();
        assert!(back.is_empty());
        assert_eq!(back.dim(), 8);
    }

    #[test]
    fn wrong_magic_is_version_error() {
        let mut b = bytes(&sample(2, 8));
        b[0] = b'X';
        assert!(matches!(VectorIndex::read_from(&mut b.as_slice(), None), Err(IndexError::Version(_))));
    }

    #[test]
    fn unknown_version_refused() {
        let mut b = bytes(&sample(2, 8));
        b[8..12].copy_from_slice(&99u32.to_le_bytes());
        match VectorIndex::read_from(&mut b.as_slice(), None) {
            Err(IndexError::Version(msg)) => assert!(msg.contains("99")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dim_mismatch_refused() {
        let b = bytes(&sample(2, 8));
        assert!(matches!(
            VectorIndex::read_from(&mut b.as_slice(), Some(16)),
            Err(IndexError::DimMismatch { expected: 16, actual: 8 })
        ));
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let b = bytes(&sample(3, 8));
        let cut = &b[..b.len() - 5];
        assert!(matches!(VectorIndex::read_from(&mut &cut[..], None), Err(IndexError::Corrupt(_))));
    }

    #[test]
    fn save_and_load_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ix.bin");
        let ix = sample(10, 8);
        ix.save(&path).unwrap();
        let back = VectorIndex::load(&path, Some(8)).unwrap();
        assert_eq!(bytes(&back), bytes(&ix));
    }
}
