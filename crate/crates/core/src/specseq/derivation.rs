use std::collections::HashMap;

use crate::algebra::{Element, Monomial, TateRing};
use crate::error::{Error, Result};
use crate::groups::SeedDifferential;

#[derive(Clone, Debug)]
struct Seed {
    generator: usize,
    power: i32,
    target: Element,
}

/// The differential `d_r` on E2 representatives, extended from seeds by the Leibniz rule.
///
/// Generators without a seed on page `r` are cycles. For a seed `d_r(g^k) = c`,
/// the factor `g^e` is read as `(g^k)^q g^(e-kq)` with `q = floor(e/k)`, giving `q (g^k)^(q-1) c g^(e-kq)`.
#[derive(Clone, Debug)]
pub struct Derivation {
    ring: TateRing,
    seeds: Vec<Seed>,
    cache: HashMap<Monomial, Element>,
}

impl Derivation {
    pub fn new(ring: &TateRing, page: u32, seeds: &[SeedDifferential]) -> Result<Self> {
        let mut out = Vec::new();
        for s in seeds.iter().filter(|s| s.page == page) {
            let (generator, power) = s
                .generator_power()
                .ok_or_else(|| Error::SeedBidegree("seed source must be a generator power".into()))?;
            if out.iter().any(|o: &Seed| o.generator == generator) {
                return Err(Error::SeedBidegree(format!("two seeds on page {page} for one generator")));
            }
            out.push(Seed {
                generator,
                power,
                target: s.target.clone(),
            });
        }
        out.sort_by_key(|s| s.generator);
        Ok(Derivation {
            ring: ring.clone(),
            seeds: out,
            cache: HashMap::new(),
        })
    }

    pub fn is_zero(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn ring(&self) -> &TateRing {
        &self.ring
    }

    fn factor(&self, generator: usize, e: i32) -> Element {
        let n = self.ring.ngens();
        Element::monomial(self.ring.ground(), Monomial::generator(n, generator, e))
    }

    fn seed_factor(&self, seed: &Seed, e: i32) -> Result<Element> {
        let field = self.ring.ground();
        let q = e.div_euclid(seed.power);
        let rest = e.rem_euclid(seed.power);
        if q == 0 || field.from_int(q as i64).is_zero() {
            return Ok(Element::zero(field));
        }
        let before = self.factor(seed.generator, seed.power * (q - 1));
        let after = self.factor(seed.generator, rest);
        let body = self.ring.multiply(&self.ring.multiply(&before, &seed.target)?, &after)?;
        Ok(body.scale(field.from_int(q as i64)))
    }

    fn compute(&self, m: &Monomial) -> Result<Element> {
        let field = self.ring.ground();
        let mut cycle = m.clone();
        let mut active = Vec::new();
        for seed in &self.seeds {
            let e = m.exps[seed.generator];
            if e != 0 {
                cycle.exps[seed.generator] = 0;
                active.push((seed, e));
            }
        }
        if active.is_empty() {
            return Ok(Element::zero(field));
        }
        let cycle = Element::monomial(field, cycle);
        let factors: Vec<Element> = active.iter().map(|&(s, e)| self.factor(s.generator, e)).collect();
        let mut seeded = self.ring.positive().one();
        for f in &factors {
            seeded = self.ring.multiply(&seeded, f)?;
        }
        let whole = self.ring.multiply(&cycle, &seeded)?;
        let sign = whole.coefficient(m);
        if whole.len() != 1 || sign.is_zero() {
            return Err(Error::RingMismatch(format!(
                "{} does not factor through its seeded generators",
                self.ring.format_monomial(m)
            )));
        }
        let mut d_seeded = Element::zero(field);
        for (i, &(seed, e)) in active.iter().enumerate() {
            let mut prefix = self.ring.positive().one();
            for f in &factors[..i] {
                prefix = self.ring.multiply(&prefix, f)?;
            }
            let mut term = self.ring.multiply(&prefix, &self.seed_factor(seed, e)?)?;
            for f in &factors[i + 1..] {
                term = self.ring.multiply(&term, f)?;
            }
            let prefix_degree = active[..i]
                .iter()
                .map(|&(s, e)| self.ring.positive().generators()[s.generator].degree.total() * e)
                .sum::<i32>();
            if prefix_degree.rem_euclid(2) == 1 {
                term = -&term;
            }
            d_seeded = &d_seeded + &term;
        }
        let mut out = self.ring.multiply(&cycle, &d_seeded)?;
        let cycle_degree = self.ring.degree(&m_without(m, &active)).total();
        if cycle_degree.rem_euclid(2) == 1 {
            out = -&out;
        }
        Ok(out.scale(sign.inv().expect("nonzero")))
    }

    /// `d_r` of a single basis monomial.
    pub fn apply_monomial(&mut self, m: &Monomial) -> Result<Element> {
        if let Some(e) = self.cache.get(m) {
            return Ok(e.clone());
        }
        let e = self.compute(m)?;
        self.cache.insert(m.clone(), e.clone());
        Ok(e)
    }

    pub fn apply(&mut self, x: &Element) -> Result<Element> {
        let mut out = Element::zero(self.ring.ground());
        for (m, &c) in x.terms() {
            out = &out + &self.apply_monomial(m)?.scale(c);
        }
        Ok(out)
    }
}

fn m_without(m: &Monomial, active: &[(&Seed, i32)]) -> Monomial {
    let mut out = m.clone();
    for (s, _) in active {
        out.exps[s.generator] = 0;
    }
    out
}
