//! Čech spectral sequence pages for polynomial rings and the Cohen–Macaulay
//! data that lets them compute Tate cohomology of a group.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::GroupFamily;
use crate::algebra::{Bidegree, Element, Monomial, RingPresentation};
use crate::error::{Error, Result};
use crate::gf::FieldDescriptor;
use crate::linalg::Matrix;

/// Dimensions of a Čech E2 page in Adams coordinates `(stem, row)`.
///
/// Tate degree is `-stem`. Entries are exact for stems in `lo..=hi`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CechPage {
    pub rank: usize,
    pub lo: i32,
    pub hi: i32,
    pub entries: BTreeMap<(i32, i32), usize>,
}

impl CechPage {
    pub fn dim(&self, stem: i32, row: i32) -> usize {
        self.entries.get(&(stem, row)).copied().unwrap_or(0)
    }

    /// Total dimension over all rows at a stem.
    pub fn stem_dim(&self, stem: i32) -> usize {
        self.entries.range((stem, i32::MIN)..=(stem, i32::MAX)).map(|(_, &d)| d).sum()
    }

    /// Total dimension in Tate degree `d`, if inside the computed range.
    pub fn tate_dim(&self, d: i32) -> Option<usize> {
        (self.lo..=self.hi).contains(&-d).then(|| self.stem_dim(-d))
    }

    pub fn rows(&self) -> Vec<i32> {
        let mut rows: Vec<i32> = self.entries.keys().map(|&(_, r)| r).collect();
        rows.sort_unstable();
        rows.dedup();
        rows
    }
}

/// Number of monomials of degree `d` in a polynomial ring with the given generator degrees.
pub fn polynomial_dim(degrees: &[i32], d: i32) -> usize {
    if d < 0 {
        return 0;
    }
    let mut ways = vec![0usize; d as usize + 1];
    ways[0] = 1;
    for &g in degrees {
        let g = g as usize;
        for i in g..ways.len() {
            ways[i] += ways[i - g];
        }
    }
    ways[d as usize]
}

/// The E2 page of the Čech complex of `k[x_1..x_n]` with the given degrees.
///
/// Row 0 holds the ring itself and row `n-1` holds the local cohomology module.
pub fn cech_e2(degrees: &[i32], lo: i32, hi: i32) -> Result<CechPage> {
    let n = degrees.len();
    if n == 0 || degrees.iter().any(|&d| d <= 0) {
        return Err(Error::InvalidPresentation("Čech page needs positive generator degrees".into()));
    }
    let top = n as i32 - 1;
    let start: i32 = degrees.iter().sum::<i32>() - top;
    let mut entries = BTreeMap::new();
    for stem in lo..=hi {
        let bottom = polynomial_dim(degrees, -stem);
        if bottom > 0 {
            *entries.entry((stem, 0)).or_insert(0) += bottom;
        }
        let upper = polynomial_dim(degrees, stem - start);
        if upper > 0 {
            *entries.entry((stem, top)).or_insert(0) += upper;
        }
    }
    Ok(CechPage {
        rank: n,
        lo,
        hi,
        entries,
    })
}

/// Tensors with a free module on basis elements of the given degrees.
pub fn tensor_free(page: &CechPage, basis_degrees: &[i32]) -> CechPage {
    let max = basis_degrees.iter().copied().max().unwrap_or(0).max(0);
    let min = basis_degrees.iter().copied().min().unwrap_or(0).min(0);
    let (lo, hi) = (page.lo - min, page.hi - max);
    let mut entries = BTreeMap::new();
    for (&(stem, row), &d) in &page.entries {
        for &b in basis_degrees {
            let s = stem - b;
            if (lo..=hi).contains(&s) {
                *entries.entry((s, row)).or_insert(0) += d;
            }
        }
    }
    CechPage {
        rank: page.rank,
        lo,
        hi,
        entries,
    }
}

/// Tensors with an exterior algebra on generators of the given degrees.
pub fn tensor_exterior(page: &CechPage, degrees: &[i32]) -> CechPage {
    let subsets: Vec<i32> = (0..1u32 << degrees.len())
        .map(|mask| (0..degrees.len()).filter(|i| mask >> i & 1 == 1).map(|i| degrees[i]).sum())
        .collect();
    tensor_free(page, &subsets)
}

/// `H^*(G)` as a free module over a polynomial subalgebra on `parameters`.
#[derive(Clone, Debug)]
pub struct CohenMacaulay {
    pub ring: RingPresentation,
    pub parameters: Vec<usize>,
    pub free_basis: Vec<Monomial>,
}

fn parse_all(ring: &RingPresentation, items: &[&str]) -> Result<Vec<Monomial>> {
    items.iter().map(|s| ring.parse_monomial(s)).collect()
}

pub fn cohen_macaulay(group: GroupFamily, field: FieldDescriptor) -> Result<CohenMacaulay> {
    let ring = group.cohomology_ring(field)?;
    let n = ring.ngens();
    let (parameters, free_basis): (Vec<usize>, Vec<Monomial>) = match group.normalized() {
        GroupFamily::Cyclic { p: 2, n: 1 } | GroupFamily::Torus { .. } | GroupFamily::ElementaryAbelian { p: 2, .. } => {
            ((0..n).collect(), vec![Monomial::one(n)])
        }
        GroupFamily::Cyclic { .. } => (vec![1], parse_all(&ring, &["1", "x1"])?),
        GroupFamily::ElementaryAbelian { .. } => {
            let odd: Vec<usize> = (0..n).step_by(2).collect();
            let basis = (0..1u32 << odd.len())
                .map(|mask| {
                    let mut exps = vec![0; n];
                    for (j, &i) in odd.iter().enumerate() {
                        exps[i] = (mask >> j & 1) as i32;
                    }
                    Monomial::new(exps)
                })
                .collect();
            ((1..n).step_by(2).collect(), basis)
        }
        GroupFamily::Dihedral { .. } => (vec![1, 2], parse_all(&ring, &["1", "x1"])?),
        GroupFamily::Quaternion { nu: 3 } => (vec![2], parse_all(&ring, &["1", "x1", "x2", "x1^2", "x2 x1", "x2 x1^2"])?),
        GroupFamily::Quaternion { .. } => (vec![2], parse_all(&ring, &["1", "x1", "x2", "x1^2", "x2^2", "x1^3"])?),
    };
    Ok(CohenMacaulay {
        ring,
        parameters,
        free_basis,
    })
}

impl CohenMacaulay {
    fn parameter_degrees(&self) -> Vec<i32> {
        self.parameters
            .iter()
            .map(|&i| self.ring.generators()[i].degree.total())
            .collect()
    }

    fn basis_degrees(&self) -> Vec<i32> {
        self.free_basis.iter().map(|m| self.ring.degree(m).total()).collect()
    }

    /// Checks that `⊕ A·b → H^d` is bijective for every `d ≤ max_degree`.
    pub fn check_freeness(&self, max_degree: i32) -> Result<()> {
        let field = self.ring.ground();
        let n = self.ring.ngens();
        let mut param_mask = vec![false; n];
        for &i in &self.parameters {
            param_mask[i] = true;
        }
        for d in 0..=max_degree {
            let target = self.ring.basis(Bidegree::new(d, 0))?;
            let index: BTreeMap<&Monomial, usize> = target.iter().enumerate().map(|(i, m)| (m, i)).collect();
            let mut columns = Vec::new();
            for b in &self.free_basis {
                let rest = d - self.ring.degree(b).total();
                if rest < 0 {
                    continue;
                }
                let free = RingPresentation::free(
                    field,
                    self.parameters.iter().map(|&i| self.ring.generators()[i].clone()).collect(),
                )?;
                for a in free.basis(Bidegree::new(rest, 0))? {
                    let mut exps = vec![0; n];
                    for (j, &i) in self.parameters.iter().enumerate() {
                        exps[i] = a.exps[j];
                    }
                    let prod = self.ring.multiply(
                        &Element::monomial(field, Monomial::new(exps)),
                        &Element::monomial(field, b.clone()),
                    )?;
                    let mut col = vec![field.zero(); target.len()];
                    for (m, &c) in prod.terms() {
                        col[index[m]] = c;
                    }
                    columns.push(col);
                }
            }
            let m = Matrix::from_columns(field, target.len(), &columns);
            if columns.len() != target.len() || m.rank() != target.len() {
                return Err(Error::InvalidPresentation(format!("not free over the parameters in degree {d}")));
            }
        }
        Ok(())
    }

    /// The Čech E2 page for `G`, exact on stems `lo..=hi`.
    pub fn cech_page(&self, lo: i32, hi: i32) -> Result<CechPage> {
        let basis = self.basis_degrees();
        let pad = basis.iter().copied().max().unwrap_or(0);
        let base = cech_e2(&self.parameter_degrees(), lo, hi + pad)?;
        let mut page = tensor_free(&base, &basis);
        page.hi = hi;
        page.entries.retain(|&(s, _), _| s <= hi);
        Ok(page)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn polynomial_dims_are_binomials() {
        for n in 1..=4 {
            for i in 0..=8 {
                assert_eq!(polynomial_dim(&vec![1; n], i), binom(n - 1 + i as usize, n - 1));
                assert_eq!(polynomial_dim(&vec![2; n], 2 * i), binom(n - 1 + i as usize, n - 1));
                assert_eq!(polynomial_dim(&vec![2; n], 2 * i + 1), 0);
            }
        }
    }

    #[test]
    fn rank_one_gives_a_laurent_line() {
        let page = cech_e2(&[1], -10, 10).unwrap();
        assert_eq!(page.rows(), vec![0]);
        assert!((-10..=10).all(|s| page.dim(s, 0) == 1));
    }

    #[test]
    fn top_row_placement() {
        let page = cech_e2(&[1, 1], -4, 4).unwrap();
        assert_eq!(page.dim(1, 1), 1);
        assert_eq!(page.dim(2, 1), 2);
        assert_eq!(page.dim(0, 1), 0);
        let page = cech_e2(&[2, 2, 2], -4, 8).unwrap();
        assert_eq!(page.dim(4, 2), 1);
        assert_eq!(page.dim(6, 2), 3);
    }

    #[test]
    fn cech_matches_tate_dimensions() {
        let f2: FieldDescriptor = "GF(2)".parse().unwrap();
        let f3: FieldDescriptor = "GF(3)".parse().unwrap();
        let groups = [
            ("C2", f2),
            ("C8", f2),
            ("C9", f3),
            ("C_2^2", f2),
            ("C_2^3", f2),
            ("C_3^2", f3),
            ("D8", f2),
            ("Q8", f2),
            ("Q16", f2),
        ];
        for (name, field) in groups {
            let g: GroupFamily = name.parse().unwrap();
            let cm = cohen_macaulay(g, field).unwrap();
            cm.check_freeness(12).unwrap();
            let page = cm.cech_page(-12, 12).unwrap();
            let tate = g.tate_ring(field).unwrap();
            for d in -12..=12 {
                let expected = tate.basis(Bidegree::new(d, 0)).unwrap().len();
                assert_eq!(page.tate_dim(d), Some(expected), "{name} degree {d}");
            }
        }
    }

    #[test]
    fn wrong_basis_fails_freeness() {
        let f2: FieldDescriptor = "GF(2)".parse().unwrap();
        let mut cm = cohen_macaulay("Q8".parse().unwrap(), f2).unwrap();
        cm.free_basis.pop();
        assert!(cm.check_freeness(6).is_err());
    }

    #[test]
    fn exterior_tensor_doubles() {
        let page = cech_e2(&[2], -6, 6).unwrap();
        let ext = tensor_exterior(&page, &[1]);
        assert!((-6..=5).all(|s| ext.stem_dim(s) == 1));
    }
}
