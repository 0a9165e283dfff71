// SPDX-License-Identifier: Apache-2.0

//! Model bundle file.
//!
//! ```text
//! magic    8 bytes   "LINKREC\0"
//! version  u32 LE
//! count    u32 LE    number of sections
//! section  repeated:
//!   tag      4 ASCII bytes
//!   version  u32 LE
//!   length   u64 LE
//!   payload  `length` bytes, bincode (little-endian, fixed-width integers)
//! ```
//!
//! Sections: `META` (project, α, threshold, validation F1, corpus path),
//! `CONF` (training configuration), `TVEC` (textual vectorizers), `TLRN`
//! (textual learner), `NENC` (tabular encoder), `NENS` (non-textual
//! ensemble). Readers skip unknown tags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{Channels, HybridModel, NonTextualChannel, TextualChannel};
use crate::error::{Error, Result};

pub const BUNDLE_MAGIC: &[u8; 8] = b"LINKREC\0";
pub const BUNDLE_VERSION: u32 = 1;
const SECTION_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Meta {
    project: String,
    alpha: f64,
    threshold: f64,
    validation_f1: f64,
    corpus_path: Option<PathBuf>,
}

fn encode<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    bincode::serialize(value).map_err(|e| Error::Bundle(e.to_string()))
}

fn decode<T: DeserializeOwned>(tag: &str, bytes: &[u8]) -> Result<T> {
    bincode::deserialize(bytes).map_err(|e| Error::Bundle(format!("section {tag}: {e}")))
}

struct Reader<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .at
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Bundle(format!("truncated at byte {}", self.at)))?;
        let out = &self.bytes[self.at..end];
        self.at = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

impl HybridModel {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let meta = Meta {
            project: self.project.clone(),
            alpha: self.alpha,
            threshold: self.threshold,
            validation_f1: self.validation_f1,
            corpus_path: self.corpus_path.clone(),
        };
        let sections: [(&[u8; 4], Vec<u8>); 6] = [
            (b"META", encode(&meta)?),
            (b"CONF", encode(&self.config)?),
            (b"TVEC", encode(&self.channels.textual.vectorizer)?),
            (b"TLRN", encode(&self.channels.textual.learner)?),
            (b"NENC", encode(&self.channels.nontextual.encoder)?),
            (b"NENS", encode(&self.channels.nontextual.ensemble)?),
        ];
        let mut out = Vec::new();
        out.extend_from_slice(BUNDLE_MAGIC);
        out.extend_from_slice(&BUNDLE_VERSION.to_le_bytes());
        out.extend_from_slice(&(sections.len() as u32).to_le_bytes());
        for (tag, payload) in &sections {
            out.extend_from_slice(*tag);
            out.extend_from_slice(&SECTION_VERSION.to_le_bytes());
            out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
            out.extend_from_slice(payload);
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<HybridModel> {
        let mut r = Reader { bytes, at: 0 };
        if r.take(8).ok() != Some(BUNDLE_MAGIC.as_slice()) {
            return Err(Error::Bundle("not a model bundle".into()));
        }
        let version = r.u32()?;
        if version != BUNDLE_VERSION {
            return Err(Error::Bundle(format!("unsupported bundle version {version}")));
        }
        let count = r.u32()?;
        let mut sections: BTreeMap<String, &[u8]> = BTreeMap::new();
        for _ in 0..count {
            let tag = String::from_utf8_lossy(r.take(4)?).into_owned();
            let section_version = r.u32()?;
            let len = usize::try_from(r.u64()?).map_err(|_| Error::Bundle("section too large".into()))?;
            let payload = r.take(len)?;
            if section_version != SECTION_VERSION {
                return Err(Error::Bundle(format!(
                    "section {tag} has unsupported version {section_version}"
                )));
            }
            if sections.insert(tag.clone(), payload).is_some() {
                return Err(Error::Bundle(format!("duplicate section {tag}")));
            }
        }
        if r.at != bytes.len() {
            return Err(Error::Bundle("trailing bytes after last section".into()));
        }
        let get = |tag: &str| {
            sections
                .get(tag)
                .copied()
                .ok_or_else(|| Error::Bundle(format!("missing section {tag}")))
        };
        let meta: Meta = decode("META", get("META")?)?;
        Ok(HybridModel {
            project: meta.project,
            alpha: meta.alpha,
            threshold: meta.threshold,
            validation_f1: meta.validation_f1,
            corpus_path: meta.corpus_path,
            config: decode("CONF", get("CONF")?)?,
            channels: Channels {
                textual: TextualChannel {
                    vectorizer: decode("TVEC", get("TVEC")?)?,
                    learner: decode("TLRN", get("TLRN")?)?,
                },
                nontextual: NonTextualChannel {
                    encoder: decode("NENC", get("NENC")?)?,
                    ensemble: decode("NENS", get("NENS")?)?,
                },
            },
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_bytes()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<HybridModel> {
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        HybridModel::from_bytes(&bytes).map_err(|e| match e {
            Error::Bundle(m) => Error::Bundle(format!("{}: {m}", path.display())),
            other => other,
        })
    }
}
