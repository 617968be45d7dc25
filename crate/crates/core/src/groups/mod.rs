//! The catalog of group families: cohomology presentations, Tate rings,
//! extension data with seed differentials, and periodicity.

mod cech;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::{Bidegree, Element, GeneratorSpec, Monomial, RingPresentation, TateRing};
use crate::error::{Error, Result};
use crate::gf::FieldDescriptor;

pub use cech::{cech_e2, cohen_macaulay, polynomial_dim, tensor_exterior, tensor_free, CechPage, CohenMacaulay};

/// Bumped whenever catalog data (presentations or seeds) changes; part of cache keys.
pub const CATALOG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupFamily {
    Cyclic { p: u32, n: u32 },
    ElementaryAbelian { p: u32, n: u32 },
    /// Dihedral group of order `2^nu`.
    Dihedral { nu: u32 },
    /// Generalized quaternion group of order `2^nu`.
    Quaternion { nu: u32 },
    /// Auxiliary torus of the given rank, used only for Čech pages.
    Torus { rank: u32 },
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut rest = q;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1).then_some((p as u32, n))
}

fn two_power(q: u64) -> Option<u32> {
    (q.is_power_of_two() && q >= 2).then(|| q.trailing_zeros())
}

impl FromStr for GroupFamily {
    type Err = Error;

    /// Accepts `C8`, `C_3^2`, `Q8`, `Q16`, `D8`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = |why: &str| Error::InvalidGroup(s.to_string(), why.to_string());
        let num = |x: &str| x.parse::<u64>().map_err(|_| bad("expected a number"));
        if let Some(rest) = s.strip_prefix("C_") {
            let (p, n) = rest.split_once('^').ok_or_else(|| bad("expected C_p^n"))?;
            let (p, n) = (num(p)?, num(n)?);
            if !is_prime(p) || n == 0 {
                return Err(bad("need a prime p and n ≥ 1"));
            }
            return Ok(GroupFamily::ElementaryAbelian {
                p: p as u32,
                n: n as u32,
            });
        }
        if let Some(rest) = s.strip_prefix('C') {
            let (p, n) = prime_power(num(rest)?).ok_or_else(|| bad("order must be a prime power"))?;
            return Ok(GroupFamily::Cyclic { p, n });
        }
        if let Some(rest) = s.strip_prefix('Q') {
            let nu = two_power(num(rest)?).ok_or_else(|| bad("order must be a power of 2"))?;
            if nu < 3 {
                return Err(bad("quaternion groups have order ≥ 8"));
            }
            return Ok(GroupFamily::Quaternion { nu });
        }
        if let Some(rest) = s.strip_prefix('D') {
            let nu = two_power(num(rest)?).ok_or_else(|| bad("order must be a power of 2"))?;
            if nu < 3 {
                return Err(bad("dihedral 2-groups have order ≥ 8"));
            }
            return Ok(GroupFamily::Dihedral { nu });
        }
        if let Some(rest) = s.strip_prefix("T^") {
            let rank = num(rest)? as u32;
            if rank == 0 {
                return Err(bad("rank must be ≥ 1"));
            }
            return Ok(GroupFamily::Torus { rank });
        }
        Err(bad("unknown family"))
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupFamily::Cyclic { p, n } => write!(f, "C{}", (p as u64).pow(n)),
            GroupFamily::ElementaryAbelian { p, n } => write!(f, "C_{p}^{n}"),
            GroupFamily::Dihedral { nu } => write!(f, "D{}", 1u64 << nu),
            GroupFamily::Quaternion { nu } => write!(f, "Q{}", 1u64 << nu),
            GroupFamily::Torus { rank } => write!(f, "T^{rank}"),
        }
    }
}

const LETTERS: [&str; 8] = ["x", "y", "z", "w", "v", "s", "r", "q"];

/// One Koszul-signed monomial parsed from catalog text.
fn mono(ring: &RingPresentation, s: &str) -> Result<Monomial> {
    ring.parse_monomial(s)
}

/// A seed `d_r(g^k) = target` in the combined ring of an extension datum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedDifferential {
    pub page: u32,
    pub source: Monomial,
    pub target: Element,
}

impl SeedDifferential {
    /// The generator index and power `k` of the source `g^k`.
    pub fn generator_power(&self) -> Option<(usize, i32)> {
        let nonzero: Vec<(usize, i32)> = self.source.exps.iter().copied().enumerate().filter(|&(_, e)| e != 0).collect();
        match nonzero.as_slice() {
            [(i, k)] if *k > 0 && !self.source.dual => Some((*i, *k)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicityDatum {
    pub period: u32,
    pub periodic_unit: String,
}

/// A group `G` with normal subgroup `H = C_p` and quotient `Q`, plus seeds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionDatum {
    pub whole: GroupFamily,
    pub sub_h: GroupFamily,
    pub quotient_q: GroupFamily,
    pub quotient_cohomology: RingPresentation,
    pub quotient_tate: TateRing,
    pub coefficient_fixed: RingPresentation,
    pub coefficient_tate: RingPresentation,
    pub seeds: Vec<SeedDifferential>,
    /// Set when the quotient is D8, whose presentation is used beyond its stated range.
    pub extrapolated: bool,
}

impl ExtensionDatum {
    /// `H^*(Q) ⊗ π_*(k^{tH})`, the ring all seeds live in.
    pub fn hfpss_ring(&self) -> Result<RingPresentation> {
        self.quotient_cohomology.tensor(&self.coefficient_tate)
    }

    /// `Ĥ^*(Q) ⊗ π_*(k^{tH})`.
    pub fn tate_ring(&self) -> Result<TateRing> {
        self.quotient_tate.tensor(&self.coefficient_tate)
    }

    /// Index of the coefficient generator `t1`.
    pub fn t1_index(&self) -> usize {
        self.quotient_cohomology.ngens()
    }

    /// Validates seed bidegrees and shapes.
    pub fn check_seeds(&self) -> Result<()> {
        let ring = self.hfpss_ring()?;
        for seed in &self.seeds {
            let label = format!("d{}({})", seed.page, ring.format_monomial(&seed.source));
            if seed.generator_power().is_none() {
                return Err(Error::SeedBidegree(format!("{label}: source must be a power of one generator")));
            }
            let r = seed.page as i32;
            let expected = ring.degree(&seed.source) + Bidegree::new(r, r - 1);
            for (m, _) in seed.target.terms() {
                if ring.degree(m) != expected {
                    return Err(Error::SeedBidegree(label));
                }
            }
            if ring.normal_form(&seed.target)? != seed.target {
                return Err(Error::SeedBidegree(format!("{label}: target not in normal form")));
            }
        }
        Ok(())
    }

    /// Adds a seed given in catalog notation; used by tests and the corrupted-seed check.
    pub fn with_seed(mut self, page: u32, source: &str, target: &str) -> Result<Self> {
        let ring = self.hfpss_ring()?;
        self.seeds.push(SeedDifferential {
            page,
            source: ring.parse_monomial(source)?,
            target: ring.parse_element(target)?,
        });
        self.check_seeds()?;
        Ok(self)
    }
}

impl GroupFamily {
    pub fn prime(&self) -> Option<u32> {
        match *self {
            GroupFamily::Cyclic { p, .. } | GroupFamily::ElementaryAbelian { p, .. } => Some(p),
            GroupFamily::Dihedral { .. } | GroupFamily::Quaternion { .. } => Some(2),
            GroupFamily::Torus { .. } => None,
        }
    }

    fn check_field(&self, field: FieldDescriptor) -> Result<()> {
        match self.prime() {
            Some(p) if p != field.characteristic() => Err(Error::CharacteristicMismatch {
                group: self.to_string(),
                expected: p,
                actual: field.characteristic(),
            }),
            _ => Ok(()),
        }
    }

    fn normalized(self) -> GroupFamily {
        match self {
            GroupFamily::ElementaryAbelian { p, n: 1 } => GroupFamily::Cyclic { p, n: 1 },
            other => other,
        }
    }

    fn generators(&self) -> Vec<GeneratorSpec> {
        match self.normalized() {
            GroupFamily::Cyclic { p: 2, n: 1 } => vec![GeneratorSpec::even("x1", 1, 0)],
            GroupFamily::Cyclic { .. } => vec![GeneratorSpec::odd("x1", 1, 0), GeneratorSpec::even("x2", 2, 0)],
            GroupFamily::ElementaryAbelian { p: 2, n } => (0..n as usize)
                .map(|i| GeneratorSpec::even(&format!("{}1", LETTERS[i]), 1, 0))
                .collect(),
            GroupFamily::ElementaryAbelian { n, .. } => (0..n as usize)
                .flat_map(|i| {
                    [
                        GeneratorSpec::odd(&format!("{}1", LETTERS[i]), 1, 0),
                        GeneratorSpec::even(&format!("{}2", LETTERS[i]), 2, 0),
                    ]
                })
                .collect(),
            GroupFamily::Dihedral { .. } => vec![
                GeneratorSpec::even("x1", 1, 0),
                GeneratorSpec::even("u1", 1, 0),
                GeneratorSpec::even("z2", 2, 0),
            ],
            GroupFamily::Quaternion { .. } => vec![
                GeneratorSpec::even("x2", 1, 0),
                GeneratorSpec::even("x1", 1, 0),
                GeneratorSpec::even("e4", 4, 0),
            ],
            GroupFamily::Torus { rank } => (0..rank as usize)
                .map(|i| GeneratorSpec::even(&format!("{}2", LETTERS[i]), 2, 0))
                .collect(),
        }
    }

    fn rules(&self) -> Vec<(&'static str, &'static str)> {
        match self.normalized() {
            GroupFamily::Dihedral { .. } => vec![("x1^2", "u1 x1")],
            GroupFamily::Quaternion { nu: 3 } => vec![("x2^2", "x1^2 + x2 x1"), ("x1^3", "0")],
            GroupFamily::Quaternion { .. } => vec![("x2 x1", "0"), ("x2^3", "x1^3"), ("x1^4", "0")],
            _ => Vec::new(),
        }
    }

    /// `H^*(G; k)` as a presentation with generators in bidegree `(d, 0)`.
    pub fn cohomology_ring(&self, field: FieldDescriptor) -> Result<RingPresentation> {
        self.check_field(field)?;
        if let GroupFamily::ElementaryAbelian { n, .. } = self {
            if *n as usize > LETTERS.len() {
                return Err(Error::InvalidGroup(self.to_string(), "rank too large".into()));
            }
        }
        RingPresentation::parse(field, self.generators(), &self.rules())
    }

    /// `Ĥ^*(G; k)`: Laurent in the periodic case, with a dual part otherwise.
    pub fn tate_ring(&self, field: FieldDescriptor) -> Result<TateRing> {
        let ring = self.cohomology_ring(field)?;
        match self.normalized() {
            GroupFamily::Torus { .. } => Err(Error::Unsupported(format!("{self} is not a finite group"))),
            GroupFamily::ElementaryAbelian { .. } | GroupFamily::Dihedral { .. } => {
                let names: Vec<String> = ring.generators().iter().map(|g| g.name.clone()).collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                TateRing::with_dual(ring, &refs, Bidegree::new(-1, 0))
            }
            _ => {
                let unit = self.periodicity()?.periodic_unit;
                Ok(TateRing::plain(ring.invert_generator(&unit)?))
            }
        }
    }

    pub fn periodicity(&self) -> Result<PeriodicityDatum> {
        let (period, unit) = match self.normalized() {
            GroupFamily::Cyclic { p: 2, n: 1 } => (1, "x1"),
            GroupFamily::Cyclic { .. } => (2, "x2"),
            GroupFamily::Quaternion { .. } => (4, "e4"),
            _ => return Err(Error::NotPeriodic(self.to_string())),
        };
        Ok(PeriodicityDatum {
            period,
            periodic_unit: unit.to_string(),
        })
    }

    /// Whether the family carries an extension datum for the spectral sequences.
    pub fn has_extension_datum(&self) -> bool {
        matches!(
            self.normalized(),
            GroupFamily::Cyclic { n: 2.., .. } | GroupFamily::Quaternion { .. }
        )
    }

    pub fn extension_datum(&self, field: FieldDescriptor) -> Result<ExtensionDatum> {
        self.check_field(field)?;
        let p = self.prime().unwrap_or(0);
        let quotient = match self.normalized() {
            GroupFamily::Cyclic { p, n } if n >= 2 => GroupFamily::Cyclic { p, n: n - 1 },
            GroupFamily::Quaternion { nu: 3 } => GroupFamily::ElementaryAbelian { p: 2, n: 2 },
            GroupFamily::Quaternion { nu } => GroupFamily::Dihedral { nu: nu - 1 },
            _ => return Err(Error::NoExtensionDatum(self.to_string())),
        };
        let coefficient_fixed = if p == 2 {
            RingPresentation::free(field, vec![GeneratorSpec::even("t1", 0, -1)])?
        } else {
            RingPresentation::free(field, vec![GeneratorSpec::odd("t1", 0, -1), GeneratorSpec::even("t2", 0, -2)])?
        };
        let coefficient_tate = coefficient_fixed.invert_generator(if p == 2 { "t1" } else { "t2" })?;
        let seed_text: Vec<(u32, &str, &str)> = match (self.normalized(), quotient) {
            (GroupFamily::Cyclic { p: 2, n: 2 }, _) => vec![(2, "t1", "x1^2")],
            (GroupFamily::Cyclic { .. }, _) => vec![(2, "t1", "x2")],
            (GroupFamily::Quaternion { nu: 3 }, _) => vec![(2, "t1", "x1^2 + x1 y1 + y1^2"), (3, "t1^2", "x1^2 y1 + x1 y1^2")],
            _ => vec![(2, "t1", "u1^2 + z2"), (3, "t1^2", "u1 z2")],
        };
        let mut datum = ExtensionDatum {
            whole: *self,
            sub_h: GroupFamily::Cyclic { p, n: 1 },
            quotient_q: quotient,
            quotient_cohomology: quotient.cohomology_ring(field)?,
            quotient_tate: quotient.tate_ring(field)?,
            coefficient_fixed,
            coefficient_tate,
            seeds: Vec::new(),
            extrapolated: quotient == GroupFamily::Dihedral { nu: 3 },
        };
        let ring = datum.hfpss_ring()?;
        for (page, source, target) in seed_text {
            let target = ring.normal_form(&ring.parse_element(target)?)?;
            datum.seeds.push(SeedDifferential {
                page,
                source: mono(&ring, source)?,
                target,
            });
        }
        datum.check_seeds()?;
        Ok(datum)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(s: &str) -> FieldDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn parse_names() {
        assert_eq!("C8".parse::<GroupFamily>().unwrap(), GroupFamily::Cyclic { p: 2, n: 3 });
        assert_eq!("C_3^2".parse::<GroupFamily>().unwrap(), GroupFamily::ElementaryAbelian { p: 3, n: 2 });
        assert_eq!("Q16".parse::<GroupFamily>().unwrap(), GroupFamily::Quaternion { nu: 4 });
        assert_eq!("D8".parse::<GroupFamily>().unwrap(), GroupFamily::Dihedral { nu: 3 });
        assert!("Q4".parse::<GroupFamily>().is_err());
        assert!("C6".parse::<GroupFamily>().is_err());
        for s in ["C8", "C_3^2", "Q16", "D8", "C9"] {
            assert_eq!(s.parse::<GroupFamily>().unwrap().to_string(), s);
        }
    }

    #[test]
    fn characteristic_is_checked() {
        let q8: GroupFamily = "Q8".parse().unwrap();
        assert!(matches!(q8.cohomology_ring(gf("GF(3)")), Err(Error::CharacteristicMismatch { .. })));
    }

    #[test]
    fn quaternion_tate_is_four_periodic() {
        let t = GroupFamily::Quaternion { nu: 3 }.tate_ring(gf("GF(2)")).unwrap();
        let dims: Vec<usize> = (-8..8).map(|d| t.basis(Bidegree::new(d, 0)).unwrap().len()).collect();
        assert_eq!(dims, [1, 2, 2, 1].repeat(4));
        let t = GroupFamily::Quaternion { nu: 5 }.tate_ring(gf("GF(4)")).unwrap();
        let dims: Vec<usize> = (0..8).map(|d| t.basis(Bidegree::new(d, 0)).unwrap().len()).collect();
        assert_eq!(dims, [1, 2, 2, 1].repeat(2));
    }

    #[test]
    fn cyclic_tate_rings() {
        let f = gf("GF(2)");
        let c2 = GroupFamily::Cyclic { p: 2, n: 1 }.tate_ring(f).unwrap();
        let e = c2.positive().gen("x1").unwrap();
        let einv = c2.parse_element("x1^-1").unwrap();
        assert_eq!(c2.multiply(&e, &einv).unwrap(), c2.positive().one());
        let c9 = GroupFamily::Cyclic { p: 3, n: 2 }.tate_ring(gf("GF(3)")).unwrap();
        let e1 = c9.positive().gen("x1").unwrap();
        assert!(c9.multiply(&e1, &e1).unwrap().is_zero());
        for d in -6..6 {
            assert_eq!(c9.basis(Bidegree::new(d, 0)).unwrap().len(), 1);
        }
    }

    #[test]
    fn klein_alpha() {
        let t = GroupFamily::ElementaryAbelian { p: 2, n: 2 }.tate_ring(gf("GF(2)")).unwrap();
        let b = t.basis(Bidegree::new(-1, 0)).unwrap();
        assert_eq!(b, vec![t.alpha().unwrap()]);
    }

    #[test]
    fn periodicity_data() {
        assert_eq!(GroupFamily::Cyclic { p: 2, n: 1 }.periodicity().unwrap().period, 1);
        assert_eq!(GroupFamily::Quaternion { nu: 3 }.periodicity().unwrap().periodic_unit, "e4");
        assert_eq!(GroupFamily::Cyclic { p: 3, n: 2 }.periodicity().unwrap().period, 2);
        assert!(GroupFamily::Dihedral { nu: 3 }.periodicity().is_err());
    }

    #[test]
    fn extension_data() {
        let f2 = gf("GF(2)");
        let q8 = GroupFamily::Quaternion { nu: 3 }.extension_datum(f2).unwrap();
        assert_eq!(q8.quotient_q, GroupFamily::ElementaryAbelian { p: 2, n: 2 });
        assert_eq!(q8.seeds.len(), 2);
        let q16 = GroupFamily::Quaternion { nu: 4 }.extension_datum(f2).unwrap();
        assert!(q16.extrapolated);
        let c9 = GroupFamily::Cyclic { p: 3, n: 2 }.extension_datum(gf("GF(3)")).unwrap();
        assert_eq!(c9.quotient_q, GroupFamily::Cyclic { p: 3, n: 1 });
        assert!(matches!(
            GroupFamily::Cyclic { p: 2, n: 1 }.extension_datum(f2),
            Err(Error::NoExtensionDatum(_))
        ));
        assert!(matches!(
            GroupFamily::ElementaryAbelian { p: 3, n: 2 }.extension_datum(gf("GF(3)")),
            Err(Error::NoExtensionDatum(_))
        ));
    }

    #[test]
    fn wrong_bidegree_seed_is_rejected() {
        let f2 = gf("GF(2)");
        let q8 = GroupFamily::Quaternion { nu: 3 }.extension_datum(f2).unwrap();
        assert!(matches!(q8.with_seed(2, "t1", "x1"), Err(Error::SeedBidegree(_))));
    }
}
