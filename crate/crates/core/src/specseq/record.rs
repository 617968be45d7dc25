use serde::{Deserialize, Serialize};

use super::{shift, SpectralSequence, Variant};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryRecord {
    pub s: i32,
    pub t: i32,
    pub basis: Vec<String>,
}

/// A nonzero `d_r` block; entries are field element indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialRecord {
    pub source: [i32; 2],
    pub target: [i32; 2],
    pub matrix: Vec<Vec<u64>>,
}

/// Serializable view of one page restricted to the user window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageRecord {
    pub r: u32,
    pub variant: Variant,
    pub entries: Vec<EntryRecord>,
    pub differentials: Vec<DifferentialRecord>,
}

impl PageRecord {
    pub fn from_sequence(ss: &SpectralSequence, r: u32) -> Result<Self> {
        let page = ss.page(r).ok_or_else(|| Error::PageMismatch(format!("page {r} not computed")))?;
        let mut entries = Vec::new();
        for (b, e) in ss.certified(r) {
            if e.dim() > 0 {
                entries.push(EntryRecord {
                    s: b.s,
                    t: b.t,
                    basis: e.labels().into_iter().map(|m| ss.ring().format_monomial(m)).collect(),
                });
            }
        }
        let mut differentials = Vec::new();
        for (&b, m) in &page.differentials {
            if m.is_zero() || !ss.window().contains(b) {
                continue;
            }
            let target = b + shift(r);
            differentials.push(DifferentialRecord {
                source: [b.s, b.t],
                target: [target.s, target.t],
                matrix: (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.index()).collect()).collect(),
            });
        }
        Ok(PageRecord {
            r,
            variant: ss.variant(),
            entries,
            differentials,
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
