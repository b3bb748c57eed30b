//! Versioned index snapshots.
//!
//! A snapshot stores the canonical inputs of an index, not its nodes, and
//! the index is rebuilt on load. Layout, little-endian throughout:
//!
//! ```text
//! "SYNC1" | version u16 | kind u8 | cost model 4 x u32
//! | alpha flag u8, alpha f64 | selected count u32, ids u32...
//! | dictionary TSV (u64 length + bytes) | rules TSV (u64 length + bytes)
//! | checksum u64 (first 8 bytes of SHA-256 over everything before)
//! ```

use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};
use syncomplete::{
    build_et, build_ht_with_selection, build_tt, dictionary, parse_rules, CostModel, Index,
    RuleSet, ScoredString, StructureKind,
};
use thiserror::Error;

pub const MAGIC: &[u8; 5] = b"SYNC1";
pub const VERSION: u16 = 1;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("not a snapshot (bad magic)")]
    BadMagic,
    #[error("unsupported snapshot version {0}")]
    UnsupportedVersion(u16),
    #[error("snapshot checksum mismatch: stored {stored:016x}, computed {computed:016x}")]
    Checksum { stored: u64, computed: u64 },
    #[error("snapshot truncated")]
    Truncated,
    #[error("snapshot field is corrupt: {0}")]
    Corrupt(&'static str),
    #[error(transparent)]
    Index(#[from] syncomplete::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Everything needed to rebuild an index.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub kind: StructureKind,
    pub model: CostModel,
    pub alpha: Option<f64>,
    /// Expanded rule ids; only used for hybrid tries.
    pub selected: Vec<u32>,
    pub dict: Vec<ScoredString>,
    pub rules: RuleSet,
}

impl Snapshot {
    pub fn of(
        index: &Index,
        dict: &[ScoredString],
        model: &CostModel,
    ) -> Result<Self, SnapshotError> {
        let (alpha, selected) = match index {
            Index::Ht(h) => (h.report().alpha, h.selected().to_vec()),
            _ => (None, Vec::new()),
        };
        Ok(Snapshot {
            kind: index.kind(),
            model: *model,
            alpha,
            selected,
            dict: dictionary::normalize(dict)?,
            rules: index.rules().clone(),
        })
    }

    pub fn build(&self) -> Result<Index, SnapshotError> {
        Ok(match self.kind {
            StructureKind::Tt => Index::Tt(build_tt(&self.dict, &self.rules)?),
            StructureKind::Et => Index::Et(build_et(&self.dict, &self.rules)?),
            StructureKind::Ht => Index::Ht(build_ht_with_selection(
                &self.dict,
                &self.rules,
                &self.selected,
                &self.model,
            )?),
        })
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.push(match self.kind {
            StructureKind::Tt => 0,
            StructureKind::Et => 1,
            StructureKind::Ht => 2,
        });
        for v in [
            self.model.node_header_bytes,
            self.model.per_child_ref_bytes,
            self.model.per_link_bytes,
            self.model.score_bytes,
        ] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.push(u8::from(self.alpha.is_some()));
        out.extend_from_slice(&self.alpha.unwrap_or(0.0).to_le_bytes());
        out.extend_from_slice(&(self.selected.len() as u32).to_le_bytes());
        for id in &self.selected {
            out.extend_from_slice(&id.to_le_bytes());
        }
        for block in [dictionary::to_tsv(&self.dict), self.rules.to_tsv()] {
            out.extend_from_slice(&(block.len() as u64).to_le_bytes());
            out.extend_from_slice(block.as_bytes());
        }
        let sum = checksum(&out);
        out.extend_from_slice(&sum.to_le_bytes());
        out
    }

    pub fn decode(bytes: &[u8]) -> Result<Self, SnapshotError> {
        if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
            return Err(SnapshotError::BadMagic);
        }
        if bytes.len() < MAGIC.len() + 2 + 8 {
            return Err(SnapshotError::Truncated);
        }
        let (body, tail) = bytes.split_at(bytes.len() - 8);
        let stored = u64::from_le_bytes(tail.try_into().unwrap());
        let computed = checksum(body);
        if stored != computed {
            return Err(SnapshotError::Checksum { stored, computed });
        }
        let mut r = Reader {
            bytes: body,
            at: MAGIC.len(),
        };
        let version = u16::from_le_bytes(r.take()?);
        if version != VERSION {
            return Err(SnapshotError::UnsupportedVersion(version));
        }
        let kind = match r.take::<1>()?[0] {
            0 => StructureKind::Tt,
            1 => StructureKind::Et,
            2 => StructureKind::Ht,
            _ => return Err(SnapshotError::Corrupt("structure kind")),
        };
        let mut field = || r.take().map(u32::from_le_bytes);
        let model = CostModel {
            node_header_bytes: field()?,
            per_child_ref_bytes: field()?,
            per_link_bytes: field()?,
            score_bytes: field()?,
        };
        if !model.is_valid() {
            return Err(SnapshotError::Corrupt("cost model"));
        }
        let has_alpha = r.take::<1>()?[0] != 0;
        let alpha = f64::from_le_bytes(r.take()?);
        let count = u32::from_le_bytes(r.take()?) as usize;
        let mut selected = Vec::with_capacity(count.min(body.len() / 4));
        for _ in 0..count {
            selected.push(u32::from_le_bytes(r.take()?));
        }
        let dict_text = r.block()?;
        let rules_text = r.block()?;
        if r.at != body.len() {
            return Err(SnapshotError::Corrupt("trailing bytes"));
        }
        Ok(Snapshot {
            kind,
            model,
            alpha: has_alpha.then_some(alpha),
            selected,
            dict: dictionary::parse_dictionary(dict_text)?,
            rules: parse_rules(rules_text)?,
        })
    }

    pub fn save(&self, path: &Path) -> Result<(), SnapshotError> {
        fs::write(path, self.encode()).map_err(|source| SnapshotError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: &Path) -> Result<Self, SnapshotError> {
        let bytes = fs::read(path).map_err(|source| SnapshotError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::decode(&bytes)
    }
}

fn checksum(bytes: &[u8]) -> u64 {
    let digest = Sha256::digest(bytes);
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> Result<[u8; N], SnapshotError> {
        let end = self.at.checked_add(N).ok_or(SnapshotError::Truncated)?;
        let chunk = self
            .bytes
            .get(self.at..end)
            .ok_or(SnapshotError::Truncated)?;
        self.at = end;
        Ok(chunk.try_into().unwrap())
    }

    fn block(&mut self) -> Result<&'a str, SnapshotError> {
        let len = u64::from_le_bytes(self.take()?) as usize;
        let end = self.at.checked_add(len).ok_or(SnapshotError::Truncated)?;
        let chunk = self
            .bytes
            .get(self.at..end)
            .ok_or(SnapshotError::Truncated)?;
        self.at = end;
        std::str::from_utf8(chunk).map_err(|_| SnapshotError::Corrupt("text block is not UTF-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use syncomplete::{build_ht, HtOptions};

    fn abc() -> (Vec<ScoredString>, RuleSet) {
        (
            vec![ScoredString::new("abc", 5), ScoredString::new("cde", 2)],
            parse_rules("bc\tmn\nc\tmp").unwrap(),
        )
    }

    #[test]
    fn round_trip_each_kind() {
        let (dict, rules) = abc();
        let model = CostModel::default();
        let indexes = [
            Index::Tt(build_tt(&dict, &rules).unwrap()),
            Index::Et(build_et(&dict, &rules).unwrap()),
            Index::Ht(build_ht(&dict, &rules, 0.5, &HtOptions::default()).unwrap()),
        ];
        for index in indexes {
            let snap = Snapshot::of(&index, &dict, &model).unwrap();
            let back = Snapshot::decode(&snap.encode()).unwrap();
            assert_eq!(back, snap);
            let rebuilt = back.build().unwrap();
            assert_eq!(rebuilt.size_bytes(&model), index.size_bytes(&model));
            for q in ["", "abmp", "amn", "mp", "x"] {
                assert_eq!(rebuilt.topk(q, 5), index.topk(q, 5));
            }
        }
    }

    #[test]
    fn corruption_is_detected() {
        let (dict, rules) = abc();
        let index = Index::Tt(build_tt(&dict, &rules).unwrap());
        let bytes = Snapshot::of(&index, &dict, &CostModel::default())
            .unwrap()
            .encode();
        let mut flipped = bytes.clone();
        flipped[20] ^= 1;
        assert!(matches!(
            Snapshot::decode(&flipped),
            Err(SnapshotError::Checksum { .. })
        ));
        assert!(matches!(
            Snapshot::decode(b"NOPE!"),
            Err(SnapshotError::BadMagic)
        ));
        assert!(matches!(
            Snapshot::decode(&bytes[..8]),
            Err(SnapshotError::Truncated)
        ));
    }
}
