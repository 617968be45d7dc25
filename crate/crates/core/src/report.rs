//! Serializable results of a run.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::FieldDescriptor;
use crate::groups::{ExtensionDatum, GroupFamily};
use crate::picard::{AbelianGroup, PicardComputation, ZeroLineTerm};
use crate::specseq::{PageRecord, SpectralSequence, Variant, Window, DEFAULT_MARGIN};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub faithfulness: bool,
    pub pages_cached: Vec<u32>,
}

/// The JSON document written for one `(group, field)` job.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub group: String,
    pub field: String,
    pub picard: AbelianGroup,
    pub zero_line: Vec<ZeroLineTerm>,
    pub certificates: Certificates,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl RunResult {
    pub fn new(pic: &PicardComputation, cert: &FaithfulnessCertificate) -> Self {
        let mut notes = vec!["0-line groups are computed for the given finite field; \
                              units quotients in the charts depend on the field"
            .to_string()];
        if pic.extrapolated {
            notes.push("quotient cohomology presentation used beyond its tabulated range".into());
        }
        RunResult {
            group: pic.group.to_string(),
            field: pic.field.to_string(),
            picard: pic.picard.clone(),
            zero_line: pic.zero_line.clone(),
            certificates: Certificates {
                faithfulness: cert.contractible,
                pages_cached: cert.pages.clone(),
            },
            notes,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Result of running the Tate variant until its window vanishes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaithfulnessCertificate {
    pub group: String,
    pub field: String,
    pub window: Window,
    pub contractible: bool,
    /// `E_{r+1} = 0` on the window after `d_r`.
    pub last_differential: Option<u32>,
    pub pages: Vec<u32>,
    /// Certified nonzero entries `(s, t, dim)` of the last page.
    pub survivors: Vec<(i32, i32, usize)>,
}

/// Runs the Tate variant and returns the certificate together with the page records.
pub fn certify_faithfulness(
    g: GroupFamily,
    field: FieldDescriptor,
    window: Window,
) -> Result<(FaithfulnessCertificate, Vec<PageRecord>)> {
    certify_datum(g.extension_datum(field)?, window)
}

pub fn certify_datum(datum: ExtensionDatum, window: Window) -> Result<(FaithfulnessCertificate, Vec<PageRecord>)> {
    let group = datum.whole.to_string();
    let field = datum.quotient_cohomology.ground().to_string();
    let mut ss = SpectralSequence::new(datum, Variant::Tate, window)?;
    let last = DEFAULT_MARGIN + 1;
    let mut done = None;
    for r in 2..=last {
        ss.run_to(r)?;
        if ss.is_contractible(r) {
            done = Some(r);
            break;
        }
    }
    let r = done.unwrap_or(last);
    let records = (2..=r).map(|k| ss.record(k)).collect::<Result<Vec<_>>>()?;
    let survivors = ss
        .certified(r)
        .filter(|(_, e)| e.dim() > 0)
        .map(|(b, e)| (b.s, b.t, e.dim()))
        .collect();
    if done.is_none() && !ss.window_certified(r) {
        return Err(Error::WindowTooSmall(format!("Tate E{r} is not certified on {window}")));
    }
    Ok((
        FaithfulnessCertificate {
            group,
            field,
            window,
            contractible: done.is_some(),
            last_differential: done.map(|r| r - 1),
            pages: (2..=r).collect(),
            survivors,
        },
        records,
    ))
}
