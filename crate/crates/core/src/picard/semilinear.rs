use std::fmt;

use crate::gf::{FieldDescriptor, FieldElement};
use crate::linalg::Matrix;
use crate::picard::AbelianGroup;

/// An additive map `k^n → k^m` whose entries are sums of `c · x^(p^e)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    field: FieldDescriptor,
    domain_dim: usize,
    codomain_dim: usize,
    /// `entries[i][j]` is the list of `(c, e)` acting on coordinate `j` to produce coordinate `i`.
    entries: Vec<Vec<Vec<(FieldElement, u32)>>>,
}

impl SemilinearMap {
    pub fn zero(field: FieldDescriptor, domain_dim: usize, codomain_dim: usize) -> Self {
        SemilinearMap {
            field,
            domain_dim,
            codomain_dim,
            entries: vec![vec![Vec::new(); domain_dim]; codomain_dim],
        }
    }

    pub fn from_linear(m: &Matrix) -> Self {
        let mut out = Self::zero(m.field(), m.cols(), m.rows());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                out.add(i, j, m.get(i, j), 0);
            }
        }
        out
    }

    /// Adds `c · x_j^(p^e)` to output coordinate `i`.
    pub fn add(&mut self, i: usize, j: usize, c: FieldElement, e: u32) {
        if c.is_zero() {
            return;
        }
        let cell = &mut self.entries[i][j];
        match cell.iter_mut().find(|(_, f)| *f == e) {
            Some((d, _)) => *d = *d + c,
            None => cell.push((c, e)),
        }
        cell.retain(|(d, _)| !d.is_zero());
        cell.sort_by_key(|&(_, f)| f);
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn domain_dim(&self) -> usize {
        self.domain_dim
    }

    pub fn codomain_dim(&self) -> usize {
        self.codomain_dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &[(FieldElement, u32)] {
        &self.entries[i][j]
    }

    pub fn is_linear(&self) -> bool {
        self.entries.iter().flatten().flatten().all(|&(_, e)| e == 0)
    }

    pub fn apply(&self, x: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(x.len(), self.domain_dim, "vector length");
        self.entries
            .iter()
            .map(|row| {
                row.iter().zip(x).fold(self.field.zero(), |acc, (cell, &xj)| {
                    cell.iter().fold(acc, |acc, &(c, e)| acc + c * xj.frobenius(e))
                })
            })
            .collect()
    }

    fn prime_coords(&self, x: FieldElement) -> Vec<FieldElement> {
        let fp = self.field.prime_subfield();
        let mut c = x.coeffs();
        c.resize(self.field.degree() as usize, 0);
        c.into_iter().map(|a| fp.from_int(a as i64)).collect()
    }

    /// The matrix of the map as an `F_p`-linear map on `F_p`-coordinates.
    pub fn prime_matrix(&self) -> Matrix {
        let fp = self.field.prime_subfield();
        let m = self.field.degree() as usize;
        let basis = self.field.prime_basis();
        let mut columns = Vec::with_capacity(self.domain_dim * m);
        for j in 0..self.domain_dim {
            for &b in &basis {
                let mut x = vec![self.field.zero(); self.domain_dim];
                x[j] = b;
                let col: Vec<FieldElement> = self.apply(&x).into_iter().flat_map(|y| self.prime_coords(y)).collect();
                columns.push(col);
            }
        }
        Matrix::from_columns(fp, self.codomain_dim * m, &columns)
    }

    pub fn prime_rank(&self) -> usize {
        self.prime_matrix().rank()
    }

    /// Number of `x` with `f(x) = 0`, by listing every vector. Only for small cases.
    pub fn kernel_size_by_enumeration(&self) -> u64 {
        let q = self.field.order();
        let total = q.pow(self.domain_dim as u32);
        (0..total)
            .filter(|&code| {
                let mut rest = code;
                let x: Vec<FieldElement> = (0..self.domain_dim)
                    .map(|_| {
                        let v = rest % q;
                        rest /= q;
                        self.field.from_index(v).expect("index below order")
                    })
                    .collect();
                self.apply(&x).iter().all(FieldElement::is_zero)
            })
            .count() as u64
    }
}

/// The kernel as an elementary abelian `p`-group.
pub fn semilinear_kernel(f: &SemilinearMap) -> AbelianGroup {
    let m = f.field.degree() as usize;
    let dim = f.domain_dim * m - f.prime_rank();
    AbelianGroup::elementary(f.field.characteristic() as u64, dim)
}

/// `F_p`-dimension of the cokernel.
pub fn semilinear_cokernel_dim(f: &SemilinearMap) -> usize {
    f.codomain_dim * f.field.degree() as usize - f.prime_rank()
}

impl fmt::Display for SemilinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row
                .iter()
                .map(|cell| {
                    if cell.is_empty() {
                        return "0".to_string();
                    }
                    cell.iter()
                        .map(|&(c, e)| {
                            let x = if e == 0 {
                                "x".to_string()
                            } else {
                                format!("x^{}", (self.field.characteristic() as u64).pow(e))
                            };
                            if c.is_one() {
                                x
                            } else {
                                format!("({c}){x}")
                            }
                        })
                        .collect::<Vec<_>>()
                        .join(" + ")
                })
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
