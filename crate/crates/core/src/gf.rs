//! Exact arithmetic in finite fields `GF(p^m)`.
//!
//! Elements are stored as the integer `sum c_i p^i` of their coordinates
//! `c_0 + c_1 w + ... + c_{m-1} w^{m-1}` with respect to the tabulated modulus,
//! so they are `Copy` and cheap to hash. Every element carries its field; mixing
//! fields is an error, never an implicit embedding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf_table;

const MAX_DEGREE: usize = 16;

/// A finite field `GF(p^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldDescriptor {
    p: u32,
    m: u32,
}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldDescriptor {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("extension degree must be ≥ 1".into()));
        }
        if m > 1 && gf_table::modulus(p, m).is_none() {
            return Err(Error::InvalidField(format!(
                "no tabulated irreducible polynomial for GF({p}^{m})"
            )));
        }
        if m == 1 && p >= 1 << 16 {
            return Err(Error::InvalidField(format!("prime {p} too large")));
        }
        Ok(FieldDescriptor { p, m })
    }

    /// The prime field `GF(p)`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }

    pub fn prime_subfield(&self) -> FieldDescriptor {
        FieldDescriptor { p: self.p, m: 1 }
    }

    /// Coefficients of the modulus, constant term first, leading 1 included.
    pub fn modulus(&self) -> Vec<u32> {
        match gf_table::modulus(self.p, self.m) {
            Some(c) => c.iter().map(|&x| x as u32).collect(),
            // GF(p) is F_p[w]/(w - g) for any g; w = 1 keeps the encoding trivial.
            None => vec![self.p - 1, 1],
        }
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: *self,
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            field: *self,
            value: 1,
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.p as i64;
        FieldElement {
            field: *self,
            value: n.rem_euclid(p) as u64,
        }
    }

    /// The class of `w`, a primitive element.
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            let modulus = self.modulus();
            return self.from_int(-(modulus[0] as i64));
        }
        FieldElement {
            field: *self,
            value: self.p as u64,
        }
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() != self.m as usize {
            return Err(Error::InvalidField(format!(
                "expected {} coordinates, got {}",
                self.m,
                coeffs.len()
            )));
        }
        if let Some(c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::InvalidField(format!("residue {c} not reduced mod {}", self.p)));
        }
        Ok(FieldElement {
            field: *self,
            value: encode(self.p, coeffs),
        })
    }

    pub fn from_index(&self, value: u64) -> Result<FieldElement> {
        if value >= self.order() {
            return Err(Error::InvalidField(format!("index {value} out of range")));
        }
        Ok(FieldElement { field: *self, value })
    }

    /// All field elements in index order. Intended for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        let field = *self;
        (0..self.order()).map(move |value| FieldElement { field, value })
    }

    /// Powers `1, w, ..., w^{m-1}`: the F_p-basis used for coordinates.
    pub fn prime_basis(&self) -> Vec<FieldElement> {
        (0..self.m)
            .map(|i| FieldElement {
                field: *self,
                value: (self.p as u64).pow(i),
            })
            .collect()
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.order())
    }
}

impl FromStr for FieldDescriptor {
    type Err = Error;

    /// Parses `GF(q)` or `GF(p^m)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidField(format!("cannot parse `{s}`, expected GF(q) or GF(p^m)"));
        let inner = s
            .trim()
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?
            .trim();
        if let Some((p, m)) = inner.split_once('^') {
            let p: u32 = p.trim().parse().map_err(|_| bad())?;
            let m: u32 = m.trim().parse().map_err(|_| bad())?;
            return FieldDescriptor::new(p, m);
        }
        let q: u64 = inner.parse().map_err(|_| bad())?;
        let (p, m) = prime_power(q).ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        FieldDescriptor::new(p, m)
    }
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut m = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        m += 1;
    }
    (rest == 1 && p < u32::MAX as u64).then_some((p as u32, m))
}

fn encode(p: u32, coeffs: &[u32]) -> u64 {
    coeffs
        .iter()
        .rev()
        .fold(0u64, |acc, &c| acc * p as u64 + c as u64)
}

fn decode(p: u32, m: u32, mut value: u64) -> [u32; MAX_DEGREE] {
    let mut out = [0u32; MAX_DEGREE];
    for slot in out.iter_mut().take(m as usize) {
        *slot = (value % p as u64) as u32;
        value /= p as u64;
    }
    out
}

/// An element of `GF(p^m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldElement {
    field: FieldDescriptor,
    value: u64,
}

impl FieldElement {
    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    /// Integer encoding `sum c_i p^i`.
    pub fn index(&self) -> u64 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        decode(self.field.p, self.field.m, self.value)[..self.field.m as usize].to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg_unchecked()))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero(self.field.to_string()));
        }
        Ok(self.pow(self.field.order() - 2))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    /// `a^(p^e)`.
    pub fn frobenius(&self, e: u32) -> Self {
        let e = e % self.field.m;
        (0..e).fold(*self, |acc, _| acc.pow(self.field.p as u64))
    }

    fn add_unchecked(&self, other: &Self) -> Self {
        let FieldDescriptor { p, m } = self.field;
        let value = if p == 2 {
            self.value ^ other.value
        } else if m == 1 {
            (self.value + other.value) % p as u64
        } else {
            let a = decode(p, m, self.value);
            let b = decode(p, m, other.value);
            let mut c = [0u32; MAX_DEGREE];
            for i in 0..m as usize {
                c[i] = (a[i] + b[i]) % p;
            }
            encode(p, &c[..m as usize])
        };
        FieldElement { field: self.field, value }
    }

    fn neg_unchecked(&self) -> Self {
        let FieldDescriptor { p, m } = self.field;
        if p == 2 {
            return *self;
        }
        let a = decode(p, m, self.value);
        let mut c = [0u32; MAX_DEGREE];
        for i in 0..m as usize {
            c[i] = (p - a[i]) % p;
        }
        FieldElement {
            field: self.field,
            value: encode(p, &c[..m as usize]),
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let FieldDescriptor { p, m } = self.field;
        if m == 1 {
            return FieldElement {
                field: self.field,
                value: self.value * other.value % p as u64,
            };
        }
        if p == 2 {
            return FieldElement {
                field: self.field,
                value: mul_gf2m(self.value, other.value, m, self.field.modulus_bits()),
            };
        }
        let a = decode(p, m, self.value);
        let b = decode(p, m, other.value);
        let m = m as usize;
        let mut prod = [0u64; 2 * MAX_DEGREE];
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += a[i] as u64 * b[j] as u64;
            }
        }
        let p64 = p as u64;
        for x in prod.iter_mut() {
            *x %= p64;
        }
        let modulus = gf_table::modulus(p, m as u32).expect("validated descriptor");
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for i in 0..m {
                let sub = c * modulus[i] as u64 % p64;
                prod[k - m + i] = (prod[k - m + i] + p64 - sub) % p64;
            }
        }
        let coeffs: Vec<u32> = prod[..m].iter().map(|&x| x as u32).collect();
        FieldElement {
            field: self.field,
            value: encode(p, &coeffs),
        }
    }
}

impl FieldDescriptor {
    fn modulus_bits(&self) -> u64 {
        encode(2, &self.modulus())
    }
}

fn mul_gf2m(mut a: u64, b: u64, m: u32, modulus: u64) -> u64 {
    let mut acc = 0u64;
    let mut b = b;
    let top = 1u64 << m;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= modulus;
        }
    }
    acc
}

macro_rules! forward_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$checked(&rhs).expect("field elements from different fields")
            }
        }
    };
}

forward_op!(Add, add, checked_add);
forward_op!(Sub, sub, checked_sub);
forward_op!(Mul, mul, checked_mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_unchecked()
    }
}

impl fmt::Display for FieldElement {
    /// Prints the element as a polynomial in `w`, highest power first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.m == 1 {
            return write!(f, "{}", self.value);
        }
        let coeffs = self.coeffs();
        let mut terms = Vec::new();
        for (i, &c) in coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let coef = if c == 1 && i > 0 { String::new() } else { c.to_string() };
            terms.push(match i {
                0 => coef,
                1 => format!("{coef}w"),
                _ => format!("{coef}w^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// True iff the field contains a primitive cube root of unity.
pub fn has_primitive_cube_root(field: FieldDescriptor) -> bool {
    (field.order() - 1).is_multiple_of(3)
}

/// All roots of `x^2 + x + c` in a field of characteristic 2.
///
/// The map `x ↦ x^2 + x` is F_2-linear with kernel `{0, 1}`, so the roots are
/// found by solving one linear system over F_2.
pub fn artin_schreier_roots(c: FieldElement) -> Result<Vec<FieldElement>> {
    let field = c.field();
    if field.characteristic() != 2 {
        return Err(Error::RequiresCharacteristicTwo(field.characteristic()));
    }
    let m = field.degree() as usize;
    // Columns: images of the basis vectors w^i under x^2 + x.
    let columns: Vec<u64> = field
        .prime_basis()
        .iter()
        .map(|b| (b.pow(2) + *b).index())
        .collect();
    // Gaussian elimination on the augmented system over F_2, rows = bit positions.
    let mut rows: Vec<(u64, bool)> = (0..m)
        .map(|bit| {
            let mut row = 0u64;
            for (j, col) in columns.iter().enumerate() {
                if (col >> bit) & 1 == 1 {
                    row |= 1 << j;
                }
            }
            (row, (c.index() >> bit) & 1 == 1)
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..m {
        let Some(i) = (r..m).find(|&i| (rows[i].0 >> col) & 1 == 1) else {
            continue;
        };
        rows.swap(r, i);
        for k in 0..m {
            if k != r && (rows[k].0 >> col) & 1 == 1 {
                rows[k].0 ^= rows[r].0;
                rows[k].1 ^= rows[r].1;
            }
        }
        pivots.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| row.1) {
        return Ok(Vec::new());
    }
    let mut x = 0u64;
    for (i, &col) in pivots.iter().enumerate() {
        if rows[i].1 {
            x |= 1 << col;
        }
    }
    let root = field.from_index(x)?;
    let mut roots = vec![root, root + field.one()];
    roots.sort();
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: &str) -> FieldDescriptor {
        q.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(gf("GF(4)"), FieldDescriptor::new(2, 2).unwrap());
        assert_eq!(gf("GF(3^2)"), FieldDescriptor::new(3, 2).unwrap());
        assert_eq!(gf("GF(16)").to_string(), "GF(16)");
        assert!("GF(6)".parse::<FieldDescriptor>().is_err());
        assert!("F4".parse::<FieldDescriptor>().is_err());
        assert!(FieldDescriptor::new(11, 2).is_err());
        assert!(FieldDescriptor::new(2, 17).is_err());
        let f4 = gf("GF(4)");
        assert_eq!(f4.generator().to_string(), "w");
        assert_eq!((f4.generator() * f4.generator()).to_string(), "w + 1");
        assert_eq!(gf("GF(9)").from_coeffs(&[1, 2]).unwrap().to_string(), "2w + 1");
    }

    #[test]
    fn small_field_examples() {
        let f2 = gf("GF(2)");
        assert!((f2.one() + f2.one()).is_zero());
        let f4 = gf("GF(4)");
        let w = f4.generator();
        assert_eq!(w + w * w, f4.one());
        assert_eq!(w * w, w + f4.one());
        assert_eq!(w.frobenius(1), w + f4.one());
        let f3 = gf("GF(3)");
        assert_eq!(f3.from_int(2) * f3.from_int(2), f3.one());
        assert_eq!(f2.one().frobenius(5), f2.one());
        assert!(f4.zero().inv().is_err());
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = gf("GF(4)").one();
        let b = gf("GF(2)").one();
        assert!(matches!(a.checked_add(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn cube_roots() {
        assert!(!has_primitive_cube_root(gf("GF(2)")));
        assert!(has_primitive_cube_root(gf("GF(4)")));
        assert!(!has_primitive_cube_root(gf("GF(3)")));
        for m in 1..=16 {
            let f = FieldDescriptor::new(2, m).unwrap();
            assert_eq!(has_primitive_cube_root(f), m % 2 == 0);
        }
    }

    #[test]
    fn artin_schreier_examples() {
        let f2 = gf("GF(2)");
        assert_eq!(artin_schreier_roots(f2.zero()).unwrap(), vec![f2.zero(), f2.one()]);
        assert!(artin_schreier_roots(f2.one()).unwrap().is_empty());
        let f4 = gf("GF(4)");
        let w = f4.generator();
        let mut expected = vec![w, w + f4.one()];
        expected.sort();
        assert_eq!(artin_schreier_roots(f4.one()).unwrap(), expected);
        assert!(matches!(
            artin_schreier_roots(gf("GF(3)").one()),
            Err(Error::RequiresCharacteristicTwo(3))
        ));
    }

    #[test]
    fn artin_schreier_image_is_index_two() {
        for m in 1..=8 {
            let f = FieldDescriptor::new(2, m).unwrap();
            let mut solvable = 0u64;
            for c in f.elements() {
                let roots = artin_schreier_roots(c).unwrap();
                assert!(roots.is_empty() || roots.len() == 2);
                for r in &roots {
                    assert_eq!(r.pow(2) + *r + c, f.zero());
                }
                if !roots.is_empty() {
                    solvable += 1;
                }
            }
            assert_eq!(solvable * 2, f.order());
        }
    }

    fn brute_irreducible_primitive(f: FieldDescriptor) {
        // The generator must have multiplicative order exactly q - 1.
        let q = f.order();
        let w = f.generator();
        assert_eq!(w.pow(q - 1), f.one(), "{f}");
        let mut n = q - 1;
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                assert_ne!(w.pow((q - 1) / d), f.one(), "{f}");
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            assert_ne!(w.pow((q - 1) / n), f.one(), "{f}");
        }
    }

    #[test]
    fn table_moduli_are_primitive() {
        for &p in &gf_table::TABLE_PRIMES {
            for m in 1..=16 {
                if (p as u64).checked_pow(m).is_none() {
                    continue;
                }
                brute_irreducible_primitive(FieldDescriptor::new(p, m).unwrap());
            }
        }
    }

    #[test]
    fn frobenius_full_cycle_is_identity() {
        for f in [gf("GF(8)"), gf("GF(9)"), gf("GF(25)"), gf("GF(49)"), gf("GF(27)")] {
            for a in f.elements() {
                assert_eq!(a.frobenius(f.degree()), a);
                assert_eq!(a.pow(f.order()), a);
            }
        }
    }
}
