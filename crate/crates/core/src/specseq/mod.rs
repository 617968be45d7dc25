//! Multiplicative spectral sequences over an extension `H → G → Q`.
//!
//! Pages live in bidegrees `(s, t)` with `d_r : (s, t) → (s + r, t + r - 1)`.

mod derivation;
mod page;
mod record;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Bidegree, TateRing};
use crate::error::{Error, Result};
use crate::groups::{ExtensionDatum, GroupFamily};
use crate::linalg::Matrix;

pub use derivation::Derivation;
pub use page::{Entry, Subspace};
pub use record::{DifferentialRecord, EntryRecord, PageRecord};

/// Highest page whose differentials are computed by default.
pub const DEFAULT_MARGIN: u32 = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Homotopy fixed points of the connective coefficients.
    Hs,
    Hfpss,
    Tate,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hs" => Ok(Variant::Hs),
            "hfpss" => Ok(Variant::Hfpss),
            "tate" => Ok(Variant::Tate),
            other => Err(Error::Parse(format!("unknown variant `{other}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Hs => "hs",
            Variant::Hfpss => "hfpss",
            Variant::Tate => "tate",
        })
    }
}

/// A rectangle of bidegrees, inclusive on both ends.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub s: (i32, i32),
    pub t: (i32, i32),
}

impl Default for Window {
    fn default() -> Self {
        Window {
            s: (-12, 12),
            t: (-12, 12),
        }
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `s0:s1,t0:t1`.
    fn from_str(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("window `{text}` is not of the form s0:s1,t0:t1"));
        let (s, t) = text.split_once(',').ok_or_else(bad)?;
        let range = |r: &str| -> Result<(i32, i32)> {
            let (a, b) = r.split_once(':').ok_or_else(bad)?;
            let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            if a > b {
                return Err(bad());
            }
            Ok((a, b))
        };
        Ok(Window {
            s: range(s)?,
            t: range(t)?,
        })
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{},{}:{}", self.s.0, self.s.1, self.t.0, self.t.1)
    }
}

impl Window {
    pub fn contains(&self, b: Bidegree) -> bool {
        (self.s.0..=self.s.1).contains(&b.s) && (self.t.0..=self.t.1).contains(&b.t)
    }

    /// Grows the window so that pages up to `E_{margin+1}` are exact on `self`.
    pub fn padded(&self, margin: u32) -> Window {
        self.grown((2..=margin).map(shift).fold(Bidegree::ZERO, |a, d| a + d))
    }

    pub fn grown(&self, by: Bidegree) -> Window {
        let (ds, dt) = (by.s, by.t);
        Window {
            s: (self.s.0 - ds, self.s.1 + ds),
            t: (self.t.0 - dt, self.t.1 + dt),
        }
    }

    pub fn bidegrees(&self) -> impl Iterator<Item = Bidegree> + '_ {
        (self.s.0..=self.s.1).flat_map(move |s| (self.t.0..=self.t.1).map(move |t| Bidegree::new(s, t)))
    }
}

pub fn shift(r: u32) -> Bidegree {
    Bidegree::new(r as i32, r as i32 - 1)
}

/// One page `E_r` together with the differentials `d_r` once they are known.
#[derive(Clone, Debug)]
pub struct Page {
    pub r: u32,
    pub entries: BTreeMap<Bidegree, Entry>,
    /// `d_r` out of each bidegree where both ends are known, in rep coordinates.
    pub differentials: BTreeMap<Bidegree, Matrix>,
    pub inferred: bool,
}

/// How `d_r` was obtained when a page was turned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DifferentialSource {
    Seeds,
    Inferred,
    Zero,
}

#[derive(Clone, Debug)]
pub struct SpectralSequence {
    datum: ExtensionDatum,
    variant: Variant,
    ring: TateRing,
    window: Window,
    compute: Window,
    pages: Vec<Page>,
    empty: Entry,
    pub check_boundaries: bool,
}

impl SpectralSequence {
    pub fn new(datum: ExtensionDatum, variant: Variant, window: Window) -> Result<Self> {
        Self::with_margin(datum, variant, window, DEFAULT_MARGIN)
    }

    pub fn with_margin(datum: ExtensionDatum, variant: Variant, window: Window, margin: u32) -> Result<Self> {
        if margin < 2 {
            return Err(Error::WindowTooSmall("margin must be at least 2".into()));
        }
        datum.check_seeds()?;
        let ring = match variant {
            Variant::Hs | Variant::Hfpss => TateRing::plain(datum.hfpss_ring()?),
            Variant::Tate => datum.tate_ring()?,
        };
        let mut compute = window.padded(margin);
        if variant == Variant::Tate {
            let extra = (2..=margin)
                .filter(|&r| datum.seeds.iter().all(|s| s.page != r))
                .map(shift)
                .fold(Bidegree::ZERO, |a, d| a + d);
            compute = compute.grown(extra);
        }
        let mut ss = SpectralSequence {
            datum,
            variant,
            ring,
            window,
            compute,
            pages: Vec::new(),
            empty: Entry::empty(),
            check_boundaries: true,
        };
        let field = ss.ring.ground();
        let mut entries = BTreeMap::new();
        for b in compute.bidegrees() {
            let entry = if ss.known_zero(b) {
                Entry::empty()
            } else {
                Entry::e2(field, ss.ring.basis(b)?, true)
            };
            entries.insert(b, entry);
        }
        ss.pages.push(Page {
            r: 2,
            entries,
            differentials: BTreeMap::new(),
            inferred: false,
        });
        Ok(ss)
    }

    pub fn datum(&self) -> &ExtensionDatum {
        &self.datum
    }

    pub fn group(&self) -> GroupFamily {
        self.datum.whole
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn ring(&self) -> &TateRing {
        &self.ring
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn compute_window(&self) -> Window {
        self.compute
    }

    /// Regions that vanish for structural reasons, whatever the window.
    pub fn known_zero(&self, b: Bidegree) -> bool {
        match self.variant {
            Variant::Hs => b.s < 0 || b.t > 0,
            Variant::Hfpss => b.s < 0,
            Variant::Tate => false,
        }
    }

    /// The last computed page number.
    pub fn last_page(&self) -> u32 {
        self.pages.last().map_or(2, |p| p.r)
    }

    pub fn page(&self, r: u32) -> Option<&Page> {
        self.pages.iter().find(|p| p.r == r)
    }

    /// `E_r` at `b`, or `None` outside the computed region.
    pub fn entry(&self, r: u32, b: Bidegree) -> Option<&Entry> {
        let page = self.page(r)?;
        match page.entries.get(&b) {
            Some(e) => Some(e),
            None if self.known_zero(b) => Some(&self.empty),
            None => None,
        }
    }

    fn valid_entry(&self, r: u32, b: Bidegree) -> Option<&Entry> {
        self.entry(r, b).filter(|e| e.valid)
    }

    /// Dimension of `E_r` at `b` when it is certified.
    pub fn dim(&self, r: u32, b: Bidegree) -> Option<usize> {
        self.valid_entry(r, b).map(Entry::dim)
    }

    /// `d_r` out of `b`, if known.
    pub fn differential(&self, r: u32, b: Bidegree) -> Option<&Matrix> {
        self.page(r)?.differentials.get(&b)
    }

    /// Computes pages until `E_r` exists.
    pub fn run_to(&mut self, r: u32) -> Result<()> {
        while self.last_page() < r {
            self.turn()?;
        }
        Ok(())
    }

    fn seeded_differentials(&self, r: u32) -> Result<Option<BTreeMap<Bidegree, Matrix>>> {
        let mut derivation = Derivation::new(&self.ring, r, &self.datum.seeds)?;
        if derivation.is_zero() {
            return Ok(None);
        }
        let field = self.ring.ground();
        let delta = shift(r);
        let page = self.page(r).expect("current page");
        let mut out = BTreeMap::new();
        for (&b, src) in &page.entries {
            if !src.valid {
                continue;
            }
            let Some(tgt) = self.valid_entry(r, b + delta) else {
                continue;
            };
            let truncated = self.known_zero(b + delta);
            let ill = |detail: String| Error::IllDefinedDifferential {
                r,
                s: b.s,
                t: b.t,
                detail,
            };
            let mut image_of = |v: &[crate::gf::FieldElement]| -> Result<Vec<crate::gf::FieldElement>> {
                let d = derivation.apply(&src.element(field, v))?;
                if truncated {
                    return Ok(Vec::new());
                }
                tgt.vector(field, &d)
                    .ok_or_else(|| ill(format!("image {} leaves the E2 basis", self.ring.format_element(&d))))
            };
            let mut columns = Vec::with_capacity(src.dim());
            for rep in &src.reps {
                let image = image_of(rep)?;
                let class = tgt
                    .class_of(&image)
                    .ok_or_else(|| ill("image of a cycle is not a cycle".into()))?;
                columns.push(class);
            }
            if self.check_boundaries {
                for w in &src.boundaries.rows {
                    let image = image_of(w)?;
                    if !tgt.boundaries.contains(&image) {
                        return Err(ill("a boundary maps outside the boundaries".into()));
                    }
                }
            }
            out.insert(b, Matrix::from_columns(field, tgt.dim(), &columns));
        }
        Ok(Some(out))
    }

    /// Every known neighbour pair gets a zero map.
    fn zero_differentials(&self, r: u32) -> BTreeMap<Bidegree, Matrix> {
        let field = self.ring.ground();
        let page = self.page(r).expect("current page");
        page.entries
            .iter()
            .filter(|(_, e)| e.valid)
            .filter_map(|(&b, src)| {
                let tgt = self.valid_entry(r, b + shift(r))?;
                Some((b, Matrix::zeros(field, tgt.dim(), src.dim())))
            })
            .collect()
    }

    /// Infers `d_r` when each nonzero class has exactly one nonzero neighbour of the same
    /// dimension, as happens when the abutment is known to vanish. Blocks are identities
    /// in rep coordinates.
    pub fn infer_killing_differential(&self, r: u32) -> Result<BTreeMap<Bidegree, Matrix>> {
        let field = self.ring.ground();
        let delta = shift(r);
        let mut out = self.zero_differentials(r);
        let page = self.page(r).ok_or(Error::PageMismatch(format!("page {r} not computed")))?;
        let state = |b: Bidegree| self.valid_entry(r, b).map(Entry::dim);
        for (&b, src) in &page.entries {
            if !src.valid || src.dim() == 0 {
                continue;
            }
            let (up, down) = (state(b + delta), state(b - delta));
            if up.unwrap_or(0) > 0 && down.unwrap_or(0) > 0 {
                return Err(Error::AmbiguousPairing {
                    s: b.s,
                    t: b.t,
                    detail: format!("nonzero on both sides of d{r}"),
                });
            }
            let Some(n) = up.filter(|&n| n > 0) else {
                continue;
            };
            let partner_down = state(b + delta + delta);
            if down.is_none() || partner_down.is_none() {
                out.remove(&b);
                continue;
            }
            if partner_down != Some(0) {
                return Err(Error::AmbiguousPairing {
                    s: b.s + delta.s,
                    t: b.t + delta.t,
                    detail: format!("nonzero on both sides of d{r}"),
                });
            }
            if n != src.dim() {
                return Err(Error::AmbiguousPairing {
                    s: b.s,
                    t: b.t,
                    detail: format!("dimensions {} and {n} cannot cancel", src.dim()),
                });
            }
            out.insert(b, Matrix::identity(field, n));
        }
        Ok(out)
    }

    /// Computes `d_r` on the last page and forms `E_{r+1}`.
    pub fn turn(&mut self) -> Result<DifferentialSource> {
        let r = self.last_page();
        let (maps, source) = match self.seeded_differentials(r)? {
            Some(m) => (m, DifferentialSource::Seeds),
            None if self.variant == Variant::Tate && !self.is_zero_page(r) => {
                (self.infer_killing_differential(r)?, DifferentialSource::Inferred)
            }
            None => (self.zero_differentials(r), DifferentialSource::Zero),
        };
        let delta = shift(r);
        for (&b, d) in &maps {
            if let Some(next) = maps.get(&(b + delta)) {
                if !next.mul(d)?.is_zero() {
                    return Err(Error::DSquaredNonZero { r, s: b.s, t: b.t });
                }
            }
        }
        let field = self.ring.ground();
        let page = self.page(r).expect("current page");
        let mut entries = BTreeMap::new();
        for (&b, src) in &page.entries {
            if self.known_zero(b) {
                entries.insert(b, Entry::empty());
                continue;
            }
            let outgoing = maps.get(&b);
            let incoming = maps.get(&(b - delta));
            let cycles = match outgoing {
                Some(d) => src.boundaries.join(field, d.kernel().iter().map(|k| src.lift(field, k)).collect()),
                None => src.cycles.clone(),
            };
            let boundaries = match (incoming, self.valid_entry(r, b - delta)) {
                (Some(d), Some(_)) => {
                    let images = (0..d.cols()).map(|j| src.lift(field, &d.column(j))).collect();
                    src.boundaries.join(field, images)
                }
                _ => src.boundaries.clone(),
            };
            let incoming_known = incoming.is_some() || self.known_zero(b - delta);
            let valid = src.valid && outgoing.is_some() && incoming_known;
            entries.insert(b, Entry::new(field, src.basis.clone(), cycles, boundaries, valid));
        }
        let page = self.pages.last_mut().expect("current page");
        page.differentials = maps;
        page.inferred = source == DifferentialSource::Inferred;
        self.pages.push(Page {
            r: r + 1,
            entries,
            differentials: BTreeMap::new(),
            inferred: false,
        });
        Ok(source)
    }

    fn is_zero_page(&self, r: u32) -> bool {
        self.page(r)
            .is_none_or(|p| p.entries.values().all(|e| !e.valid || e.dim() == 0))
    }

    /// Bidegrees of the user window where `E_r` is certified.
    pub fn certified(&self, r: u32) -> impl Iterator<Item = (Bidegree, &Entry)> + '_ {
        self.window.bidegrees().filter_map(move |b| self.valid_entry(r, b).map(|e| (b, e)))
    }

    /// Whether every bidegree of the user window is certified on `E_r`.
    pub fn window_certified(&self, r: u32) -> bool {
        self.window.bidegrees().all(|b| self.valid_entry(r, b).is_some())
    }

    /// The shift in `t` by the periodicity unit of the coefficients.
    pub fn periodicity_shift(&self) -> Bidegree {
        let t = match self.datum.whole {
            GroupFamily::Quaternion { .. } => 4,
            _ => 2,
        };
        Bidegree::new(0, -t)
    }

    /// Dimensions on `E_r` agree along the coefficient periodicity wherever both are certified.
    pub fn check_periodicity(&self, r: u32) -> bool {
        let p = self.periodicity_shift();
        self.certified(r)
            .all(|(b, e)| self.dim(r, b + p).is_none_or(|d| d == e.dim()))
    }

    /// `d_{r'} = 0` on certified entries of the window for all computed `r' ≥ r`.
    pub fn is_collapsed(&self, r: u32) -> bool {
        self.window_certified(r)
            && self
                .pages
                .iter()
                .filter(|p| p.r >= r)
                .all(|p| self.window.bidegrees().all(|b| p.differentials.get(&b).is_none_or(Matrix::is_zero)))
    }

    /// `E_r` vanishes on the whole window and is compatible with periodicity.
    pub fn is_contractible(&self, r: u32) -> bool {
        self.window_certified(r) && self.certified(r).all(|(_, e)| e.dim() == 0) && self.check_periodicity(r)
    }

    /// `Σ_{s+t=n} dim E_r^{s,t}` over the window, if every term is certified.
    pub fn total_dimension(&self, r: u32, n: i32) -> Option<usize> {
        let mut sum = 0;
        for s in self.window.s.0..=self.window.s.1 {
            let b = Bidegree::new(s, n - s);
            if !self.window.contains(b) {
                continue;
            }
            sum += self.dim(r, b)?;
        }
        Some(sum)
    }

    pub fn record(&self, r: u32) -> Result<PageRecord> {
        PageRecord::from_sequence(self, r)
    }
}
