use std::collections::BTreeMap;

use crate::algebra::{Element, Monomial};
use crate::gf::{FieldDescriptor, FieldElement};
use crate::linalg::Matrix;

/// A subspace of `k^dim` kept in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    pub dim: usize,
    pub rows: Vec<Vec<FieldElement>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(dim: usize) -> Self {
        Subspace {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: FieldDescriptor, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        Subspace {
            dim,
            rows,
            pivots: (0..dim).collect(),
        }
    }

    pub fn spanned(field: FieldDescriptor, dim: usize, vectors: Vec<Vec<FieldElement>>) -> Self {
        let vectors: Vec<_> = vectors.into_iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
        if vectors.is_empty() || dim == 0 {
            return Self::zero(dim);
        }
        let e = Matrix::from_rows(field, vectors).expect("one field").rref();
        let rows = (0..e.pivots.len()).map(|i| e.matrix.row(i).to_vec()).collect();
        Subspace {
            dim,
            rows,
            pivots: e.pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Clears the pivot coordinates of `v`.
    pub fn reduce(&self, v: &mut [FieldElement]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if !c.is_zero() {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = *x - c * y;
                }
            }
        }
    }

    pub fn contains(&self, v: &[FieldElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(FieldElement::is_zero)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(r))
    }

    pub fn join(&self, field: FieldDescriptor, more: Vec<Vec<FieldElement>>) -> Subspace {
        let mut all = self.rows.clone();
        all.extend(more);
        Subspace::spanned(field, self.dim, all)
    }
}

/// One bidegree of a page: `E_r = Z_r / B_r` inside the E2 term.
#[derive(Clone, Debug)]
pub struct Entry {
    pub basis: Vec<Monomial>,
    pub cycles: Subspace,
    pub boundaries: Subspace,
    /// Representatives of a basis of `Z/B`, reduced against `B` and in echelon form.
    pub reps: Vec<Vec<FieldElement>>,
    pub rep_pivots: Vec<usize>,
    pub valid: bool,
    index: BTreeMap<Monomial, usize>,
}

impl Entry {
    pub fn new(field: FieldDescriptor, basis: Vec<Monomial>, cycles: Subspace, boundaries: Subspace, valid: bool) -> Self {
        let index = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let reduced: Vec<Vec<FieldElement>> = cycles
            .rows
            .iter()
            .map(|r| {
                let mut v = r.clone();
                boundaries.reduce(&mut v);
                v
            })
            .collect();
        let reps = Subspace::spanned(field, basis.len(), reduced);
        Entry {
            basis,
            cycles,
            boundaries,
            reps: reps.rows,
            rep_pivots: reps.pivots,
            valid,
            index,
        }
    }

    pub fn e2(field: FieldDescriptor, basis: Vec<Monomial>, valid: bool) -> Self {
        let n = basis.len();
        Self::new(field, basis, Subspace::full(field, n), Subspace::zero(n), valid)
    }

    pub fn empty() -> Self {
        Entry {
            basis: Vec::new(),
            cycles: Subspace::zero(0),
            boundaries: Subspace::zero(0),
            reps: Vec::new(),
            rep_pivots: Vec::new(),
            valid: true,
            index: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn labels(&self) -> Vec<&Monomial> {
        self.rep_pivots.iter().map(|&p| &self.basis[p]).collect()
    }

    /// Coordinates of a ring element in the E2 basis; `None` if a term falls outside it.
    pub fn vector(&self, field: FieldDescriptor, e: &Element) -> Option<Vec<FieldElement>> {
        let mut v = vec![field.zero(); self.basis.len()];
        for (m, &c) in e.terms() {
            v[*self.index.get(m)?] = c;
        }
        Some(v)
    }

    pub fn element(&self, field: FieldDescriptor, v: &[FieldElement]) -> Element {
        let mut e = Element::zero(field);
        for (m, &c) in self.basis.iter().zip(v) {
            e.add_term(m.clone(), c);
        }
        e
    }

    /// The class of a cycle in rep coordinates; `None` if `v` is not a cycle.
    pub fn class_of(&self, v: &[FieldElement]) -> Option<Vec<FieldElement>> {
        let mut w = v.to_vec();
        self.boundaries.reduce(&mut w);
        let coords: Vec<FieldElement> = self.rep_pivots.iter().map(|&p| w[p]).collect();
        for (rep, &c) in self.reps.iter().zip(&coords) {
            if !c.is_zero() {
                for (x, &y) in w.iter_mut().zip(rep) {
                    *x = *x - c * y;
                }
            }
        }
        w.iter().all(FieldElement::is_zero).then_some(coords)
    }

    /// The E2 vector of a class given in rep coordinates.
    pub fn lift(&self, field: FieldDescriptor, coords: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = vec![field.zero(); self.basis.len()];
        for (rep, &c) in self.reps.iter().zip(coords) {
            for (x, &y) in v.iter_mut().zip(rep) {
                *x = *x + c * y;
            }
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_representatives() {
        let k: FieldDescriptor = "GF(2)".parse().unwrap();
        let basis: Vec<Monomial> = (0..3).map(|i| Monomial::generator(3, i, 1)).collect();
        let (o, z) = (k.one(), k.zero());
        let b = Subspace::spanned(k, 3, vec![vec![o, o, z]]);
        let e = Entry::new(k, basis, Subspace::full(k, 3), b, true);
        assert_eq!(e.dim(), 2);
        assert_eq!(e.class_of(&[o, o, z]), Some(vec![z, z]));
        let c = e.class_of(&[z, o, o]).unwrap();
        let lifted = e.lift(k, &c);
        let mut diff: Vec<FieldElement> = lifted.iter().zip([z, o, o]).map(|(&a, b)| a - b).collect();
        e.boundaries.reduce(&mut diff);
        assert!(diff.iter().all(FieldElement::is_zero));
    }
}
