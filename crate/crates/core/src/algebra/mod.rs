//! Bigraded-commutative rings over a finite field: presentations by confluent
//! rewrite rules, Laurent generators, and Tate rings with a dual negative part.

mod presentation;
mod tate;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::gf::{FieldDescriptor, FieldElement};

pub use presentation::{PresentationJson, RingPresentation, Rule};
pub use tate::TateRing;

/// A bidegree `(s, t)`. Total degree `s + t` governs Koszul signs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Bidegree {
    pub s: i32,
    pub t: i32,
}

impl Bidegree {
    pub const ZERO: Bidegree = Bidegree { s: 0, t: 0 };

    pub const fn new(s: i32, t: i32) -> Self {
        Bidegree { s, t }
    }

    pub fn total(self) -> i32 {
        self.s + self.t
    }

    pub fn is_odd(self) -> bool {
        self.total().rem_euclid(2) == 1
    }

    pub fn scale(self, k: i32) -> Self {
        Bidegree::new(self.s * k, self.t * k)
    }

    /// Adams coordinates `(t - s, s)`.
    pub fn adams(self) -> (i32, i32) {
        (self.t - self.s, self.s)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.s + o.s, self.t + o.t)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.s - o.s, self.t - o.t)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.s, -self.t)
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.s, self.t)
    }
}

/// Even generators are polynomial; odd generators are exterior and square to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub name: String,
    pub degree: Bidegree,
    pub parity: Parity,
    pub invertible: bool,
}

impl GeneratorSpec {
    pub fn even(name: &str, s: i32, t: i32) -> Self {
        GeneratorSpec {
            name: name.to_string(),
            degree: Bidegree::new(s, t),
            parity: Parity::Even,
            invertible: false,
        }
    }

    pub fn odd(name: &str, s: i32, t: i32) -> Self {
        GeneratorSpec {
            parity: Parity::Odd,
            ..Self::even(name, s, t)
        }
    }

    pub fn inverted(mut self) -> Self {
        self.invertible = true;
        self
    }

    pub fn is_exterior(&self) -> bool {
        self.parity == Parity::Odd
    }
}

/// An exponent vector. With `dual` set it denotes `α · m^{-1} · w`: the
/// negative exponents on dualized generators index the dual basis vector
/// `m^*`, the remaining exponents form an ordinary monomial `w`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial {
    pub dual: bool,
    pub exps: Vec<i32>,
}

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial {
            dual: false,
            exps: vec![0; n],
        }
    }

    pub fn new(exps: Vec<i32>) -> Self {
        Monomial { dual: false, exps }
    }

    pub fn dual(exps: Vec<i32>) -> Self {
        Monomial { dual: true, exps }
    }

    pub fn generator(n: usize, i: usize, e: i32) -> Self {
        let mut m = Self::one(n);
        m.exps[i] = e;
        m
    }

    pub fn is_one(&self) -> bool {
        !self.dual && self.exps.iter().all(|&e| e == 0)
    }

    /// Lexicographic comparison, first generator most significant.
    pub fn lex_cmp(&self, other: &Monomial) -> std::cmp::Ordering {
        self.exps.cmp(&other.exps)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }
}

/// A finite linear combination of monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Element {
    field: FieldDescriptor,
    terms: BTreeMap<Monomial, FieldElement>,
}

impl Element {
    pub fn zero(field: FieldDescriptor) -> Self {
        Element {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn term(m: Monomial, c: FieldElement) -> Self {
        let mut e = Element::zero(c.field());
        e.add_term(m, c);
        e
    }

    pub fn monomial(field: FieldDescriptor, m: Monomial) -> Self {
        Self::term(m, field.one())
    }

    pub fn field(&self) -> FieldDescriptor {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElement)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.terms.get(m).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElement) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = *o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: FieldElement) -> Element {
        let mut out = Element::zero(self.field);
        for (m, &x) in &self.terms {
            out.add_term(m.clone(), x * c);
        }
        out
    }

    pub fn into_terms(self) -> BTreeMap<Monomial, FieldElement> {
        self.terms
    }
}

impl Add for &Element {
    type Output = Element;
    fn add(self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;
    fn sub(self, other: &Element) -> Element {
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(-self.field.one())
    }
}
