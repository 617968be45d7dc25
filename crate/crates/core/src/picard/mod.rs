//! The Picard spectral sequence and the assembly of `T(G)` from its 0-line.

mod abelian;
mod semilinear;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Bidegree;
use crate::error::{Error, Result};
use crate::gf::FieldDescriptor;
use crate::groups::GroupFamily;
use crate::linalg::Matrix;
use crate::specseq::{shift, SpectralSequence, Variant, Window};

pub use abelian::AbelianGroup;
pub use semilinear::{semilinear_cokernel_dim, semilinear_kernel, SemilinearMap};

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PicEntryKind {
    /// A copy of an Ω entry: a vector space over the ground field.
    VectorSpace { dim: usize, p: u32 },
    Finite { group: AbelianGroup },
    /// `k^×` itself, at `(0, 1)`.
    Units { group: AbelianGroup },
    /// `k^× / (k^×)^exponent`.
    UnitsQuotient { exponent: u64, group: AbelianGroup },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicEntry {
    #[serde(flatten)]
    pub kind: PicEntryKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

impl PicEntry {
    fn finite(group: AbelianGroup) -> Self {
        PicEntry {
            kind: PicEntryKind::Finite { group },
            labels: Vec::new(),
        }
    }

    pub fn exponent(&self) -> u64 {
        match &self.kind {
            PicEntryKind::VectorSpace { dim: 0, .. } => 1,
            PicEntryKind::VectorSpace { p, .. } => *p as u64,
            PicEntryKind::Finite { group } | PicEntryKind::Units { group } | PicEntryKind::UnitsQuotient { group, .. } => {
                group.exponent()
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.exponent() == 1
    }
}

/// A page of the Picard spectral sequence, in bidegrees `(s, t)` with `t ≥ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicPage {
    pub r: u32,
    #[serde(with = "entry_list")]
    pub entries: BTreeMap<(i32, i32), PicEntry>,
    pub window: Window,
}

mod entry_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::PicEntry;

    #[derive(Serialize, Deserialize)]
    struct Item {
        s: i32,
        t: i32,
        #[serde(flatten)]
        entry: PicEntry,
    }

    pub fn serialize<S: Serializer>(m: &BTreeMap<(i32, i32), PicEntry>, ser: S) -> Result<S::Ok, S::Error> {
        let items: Vec<Item> = m
            .iter()
            .map(|(&(s, t), e)| Item {
                s,
                t,
                entry: e.clone(),
            })
            .collect();
        items.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<BTreeMap<(i32, i32), PicEntry>, D::Error> {
        let items = Vec::<Item>::deserialize(de)?;
        Ok(items.into_iter().map(|i| ((i.s, i.t), i.entry)).collect())
    }
}

impl PicPage {
    pub fn get(&self, s: i32, t: i32) -> Option<&PicEntry> {
        self.entries.get(&(s, t))
    }
}

fn require_datum(g: GroupFamily) -> Result<()> {
    if g.has_extension_datum() {
        return Ok(());
    }
    let why = match g {
        GroupFamily::Cyclic { .. } => "n ≥ 2 required".to_string(),
        other => format!("{other} is neither cyclic of order ≥ p² nor quaternion"),
    };
    Err(Error::Unsupported(why))
}

/// `H^s(Q; k^×)` with trivial action.
///
/// `|k^×| = p^m - 1` is prime to `|Q|`, so only `s = 0` is nonzero.
pub fn units_cohomology(quotient: GroupFamily, field: FieldDescriptor, s: i32) -> Result<AbelianGroup> {
    let units = field.order() - 1;
    if s < 0 {
        return Ok(AbelianGroup::trivial());
    }
    if s == 0 {
        return Ok(AbelianGroup::cyclic(units));
    }
    let q_order = match quotient {
        GroupFamily::Cyclic { p, n } => (p as u64).pow(n),
        GroupFamily::ElementaryAbelian { p, n } => (p as u64).pow(n),
        GroupFamily::Dihedral { nu } | GroupFamily::Quaternion { nu } => 1u64 << nu,
        GroupFamily::Torus { .. } => return Err(Error::Unsupported("infinite quotient".into())),
    };
    let g = gcd(q_order, units);
    Ok(match quotient {
        GroupFamily::Cyclic { .. } => AbelianGroup::cyclic(g),
        _ if g == 1 => AbelianGroup::trivial(),
        _ => return Err(Error::Unsupported(format!("H^{s}({quotient}; k^×) with non-coprime orders"))),
    })
}

fn pic_of_subgroup(p: u32) -> AbelianGroup {
    if p == 2 {
        AbelianGroup::trivial()
    } else {
        AbelianGroup::cyclic(2)
    }
}

/// The Picard page `E_r` built from the Ω page `E_r` of the homotopy fixed point run.
pub fn pic_page(ss: &SpectralSequence, r: u32) -> Result<PicPage> {
    let datum = ss.datum();
    let field = ss.ring().ground();
    let p = field.characteristic();
    let window = ss.window();
    let quotient = datum.quotient_q;
    let mut entries = BTreeMap::new();
    for s in window.s.0.max(0)..=window.s.1 {
        for t in window.t.0.max(0)..=window.t.1 {
            let entry = match t {
                0 if s == 0 => PicEntry::finite(pic_of_subgroup(p)),
                0 => PicEntry::finite(AbelianGroup::trivial()),
                1 if s == 0 => PicEntry {
                    kind: PicEntryKind::Units {
                        group: units_cohomology(quotient, field, 0)?,
                    },
                    labels: Vec::new(),
                },
                1 => {
                    let group = units_cohomology(quotient, field, s)?;
                    match quotient {
                        GroupFamily::Cyclic { p, n } if s % 2 == 0 => PicEntry {
                            kind: PicEntryKind::UnitsQuotient {
                                exponent: (p as u64).pow(n),
                                group,
                            },
                            labels: Vec::new(),
                        },
                        _ => PicEntry::finite(group),
                    }
                }
                _ => {
                    let b = Bidegree::new(s, t - 1);
                    let Some(e) = ss.entry(r, b).filter(|e| e.valid) else {
                        continue;
                    };
                    PicEntry {
                        kind: PicEntryKind::VectorSpace { dim: e.dim(), p },
                        labels: e.labels().into_iter().map(|m| ss.ring().format_monomial(m)).collect(),
                    }
                }
            };
            entries.insert((s, t), entry);
        }
    }
    Ok(PicPage { r, entries, window })
}

/// `E_r` of the Picard spectral sequence, with 0-line entries below `r` replaced by
/// the kernels of their unstable differentials. `ss` must have turned page `r - 1`.
pub fn pic_page_with_zero_line(ss: &SpectralSequence, r: u32) -> Result<PicPage> {
    let mut page = pic_page(ss, r)?;
    for s in 2..r as i32 {
        if !page.entries.contains_key(&(s, s)) {
            continue;
        }
        let empty = ss.entry(s as u32, Bidegree::new(s, s - 1)).is_none_or(|e| e.dim() == 0);
        let group = if empty {
            AbelianGroup::trivial()
        } else {
            semilinear_kernel(&unstable_differential(ss, s as u32)?)
        };
        page.entries.insert((s, s), PicEntry::finite(group));
    }
    Ok(page)
}

/// `E_2` of the Picard spectral sequence.
pub fn build_pic_e2(g: GroupFamily, field: FieldDescriptor, window: Window) -> Result<PicPage> {
    require_datum(g)?;
    let ss = SpectralSequence::with_margin(g.extension_datum(field)?, Variant::Hfpss, window, 2)?;
    pic_page(&ss, 2)
}

/// Copies Ω blocks `d_r^{s,t-1}` to `d_r^{s,t}` where `t - s > 0` or `t ≥ r + 1`.
pub fn import_stable(ss: &SpectralSequence, r: u32, pic: &PicPage) -> Result<BTreeMap<(i32, i32), Matrix>> {
    let page = ss
        .page(r)
        .ok_or_else(|| Error::PageMismatch(format!("Ω page {r} not computed")))?;
    let mut out = BTreeMap::new();
    for (&(s, t), entry) in &pic.entries {
        if t < 2 || !(t - s > 0 || t > r as i32) {
            continue;
        }
        let b = Bidegree::new(s, t - 1);
        let Some(m) = page.differentials.get(&b) else {
            continue;
        };
        let omega = ss.entry(r, b).expect("differential source exists");
        let labels: Vec<String> = omega.labels().into_iter().map(|m| ss.ring().format_monomial(m)).collect();
        if pic.r == r && labels != entry.labels {
            return Err(Error::PageMismatch(format!("labels differ at ({s}, {t})")));
        }
        out.insert((s, t), m.clone());
    }
    Ok(out)
}

/// `d_r^{rr}(x) = d_r^{r,r-1}(Ω)(x) + x²` for `p = 2`; the linear block alone for odd `p`.
pub fn unstable_differential(ss: &SpectralSequence, r: u32) -> Result<SemilinearMap> {
    let field = ss.ring().ground();
    let rr = r as i32;
    let source = Bidegree::new(rr, rr - 1);
    let target = source + shift(r);
    let outside = |b: Bidegree| Error::OutsideWindow { r, s: b.s, t: b.t };
    let src = ss.entry(r, source).filter(|e| e.valid).ok_or_else(|| outside(source))?;
    let tgt = ss.entry(r, target).filter(|e| e.valid).ok_or_else(|| outside(target))?;
    let linear = ss.differential(r, source).ok_or_else(|| outside(target))?;
    let mut map = SemilinearMap::from_linear(linear);
    if field.characteristic() == 2 {
        for (j, rep) in src.reps.iter().enumerate() {
            let x = src.element(field, rep);
            let square = ss.ring().multiply(&x, &x)?;
            let ill = || Error::IllDefinedDifferential {
                r,
                s: source.s,
                t: source.t,
                detail: "square of a class is not a cycle".into(),
            };
            let v = tgt.vector(field, &square).ok_or_else(ill)?;
            let coords = tgt.class_of(&v).ok_or_else(ill)?;
            for (i, c) in coords.into_iter().enumerate() {
                map.add(i, j, c, 1);
            }
        }
    }
    Ok(map)
}

/// Whether every homomorphism from `source` into `target` is zero.
pub fn torsion_obstruction_zero(source: &AbelianGroup, target: &PicEntry) -> bool {
    source.is_finite() && gcd(source.exponent(), target.exponent()) == 1
}

/// The unique group with the given filtration quotients and an element of order `unit_order`.
pub fn assemble_zero_line(quotients: &[AbelianGroup], unit_order: u64) -> Result<AbelianGroup> {
    let mut order = 1u64;
    for q in quotients {
        order *= q
            .order()
            .ok_or_else(|| Error::Unsupported("infinite entry on the 0-line".into()))?;
    }
    let nontrivial: Vec<AbelianGroup> = quotients.iter().filter(|q| !q.is_trivial()).cloned().collect();
    let candidates: Vec<AbelianGroup> = AbelianGroup::all_of_order(order)
        .into_iter()
        .filter(|g| g.has_element_of_order(unit_order) && g.admits_filtration(&nontrivial))
        .collect();
    match candidates.len() {
        1 => Ok(candidates.into_iter().next().expect("one candidate")),
        0 => Err(Error::NoExtension(format!(
            "quotients {:?} with an element of order {unit_order}",
            nontrivial.iter().map(ToString::to_string).collect::<Vec<_>>()
        ))),
        _ => Err(Error::AmbiguousExtension(candidates)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroLineTerm {
    pub s: i32,
    pub group: AbelianGroup,
}

/// Everything the pipeline learned about `T(G)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicardComputation {
    pub group: GroupFamily,
    pub field: FieldDescriptor,
    pub picard: AbelianGroup,
    pub zero_line: Vec<ZeroLineTerm>,
    pub unit_order: u64,
    /// Ω entries of the last page vanish in filtrations `s ≥ vanishing_above` across the window.
    pub vanishing_above: i32,
    pub extrapolated: bool,
}

/// The Tate periodicity of `G`, which is the order of the unit class on the 0-line.
pub fn unit_order(g: GroupFamily) -> Result<u64> {
    Ok(g.periodicity()?.period.max(2) as u64)
}

pub fn compute_picard(g: GroupFamily, field: FieldDescriptor, window: Window) -> Result<PicardComputation> {
    require_datum(g)?;
    let datum = g.extension_datum(field)?;
    let extrapolated = datum.extrapolated;
    let mut ss = SpectralSequence::new(datum, Variant::Hfpss, window)?;
    let last = crate::specseq::DEFAULT_MARGIN + 1;
    ss.run_to(last)?;
    if !ss.window_certified(last) {
        return Err(Error::WindowTooSmall("Ω page is not certified on the window".into()));
    }
    let vanishing_above = ss
        .certified(last)
        .filter(|(_, e)| e.dim() > 0)
        .map(|(b, _)| b.s + 1)
        .max()
        .unwrap_or(0);
    let top = (window.s.1 / 2).min(last as i32 - 1);
    if vanishing_above > top + 1 {
        return Err(Error::WindowTooSmall(format!(
            "0-line classes may survive in filtration {vanishing_above}, beyond the reach of the window"
        )));
    }
    let p = field.characteristic();
    let e2 = pic_page(&ss, 2)?;
    let mut zero_line = Vec::new();
    let bottom = pic_of_subgroup(p);
    for r in 2..=last {
        let target = (r as i32, r as i32 - 1);
        if let Some(t) = e2.get(target.0, target.1) {
            if !torsion_obstruction_zero(&bottom, t) {
                return Err(Error::Unsupported(format!("differential d{r} out of (0, 0) is not forced to vanish")));
            }
        }
    }
    zero_line.push(ZeroLineTerm { s: 0, group: bottom });
    zero_line.push(ZeroLineTerm {
        s: 1,
        group: units_cohomology(ss.datum().quotient_q, field, 1)?,
    });
    for s in 2..=top {
        let r = s as u32;
        let src = ss
            .entry(r, Bidegree::new(s, s - 1))
            .filter(|e| e.valid)
            .ok_or(Error::OutsideWindow { r, s, t: s })?;
        let group = if src.dim() == 0 {
            AbelianGroup::trivial()
        } else {
            semilinear_kernel(&unstable_differential(&ss, r)?)
        };
        zero_line.push(ZeroLineTerm { s, group });
    }
    let unit = unit_order(g)?;
    let quotients: Vec<AbelianGroup> = zero_line.iter().map(|z| z.group.clone()).collect();
    let picard = assemble_zero_line(&quotients, unit)?;
    Ok(PicardComputation {
        group: g,
        field,
        picard,
        zero_line: zero_line.into_iter().filter(|z| !z.group.is_trivial()).collect(),
        unit_order: unit,
        vanishing_above,
        extrapolated,
    })
}

/// `T(G)` over `field`, computed on the default window.
pub fn compute_picard_group(g: GroupFamily, field: FieldDescriptor) -> Result<AbelianGroup> {
    Ok(compute_picard(g, field, Window::default())?.picard)
}
