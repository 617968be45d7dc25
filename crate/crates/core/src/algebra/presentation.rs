use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Bidegree, Element, GeneratorSpec, Monomial};
use crate::error::{Error, Result};
use crate::gf::{FieldDescriptor, FieldElement};

/// A rewrite rule `lead → tail`; every tail monomial is lex-smaller than `lead`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Monomial,
    pub tail: Element,
}

/// A bigraded-commutative ring `k[generators] / (rules)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingPresentation {
    ground: FieldDescriptor,
    generators: Vec<GeneratorSpec>,
    rules: Vec<Rule>,
}

const MAX_REWRITES: usize = 1_000_000;

impl RingPresentation {
    /// Builds a presentation from rules given as strings, e.g. `("x1^2", "u1 x1")`.
    pub fn parse(ground: FieldDescriptor, generators: Vec<GeneratorSpec>, rules: &[(&str, &str)]) -> Result<Self> {
        let bare = RingPresentation {
            ground,
            generators,
            rules: Vec::new(),
        };
        let rules = rules
            .iter()
            .map(|(lead, tail)| {
                let lead = bare.parse_monomial(lead)?;
                let tail = bare.parse_element(tail)?;
                Ok(Rule { lead, tail })
            })
            .collect::<Result<Vec<_>>>()?;
        RingPresentation::new(ground, bare.generators, rules)
    }

    pub fn new(ground: FieldDescriptor, generators: Vec<GeneratorSpec>, rules: Vec<Rule>) -> Result<Self> {
        let ring = RingPresentation {
            ground,
            generators,
            rules,
        };
        ring.validate()?;
        ring.check_confluence()?;
        Ok(ring)
    }

    /// The polynomial ring on the given generators.
    pub fn free(ground: FieldDescriptor, generators: Vec<GeneratorSpec>) -> Result<Self> {
        Self::new(ground, generators, Vec::new())
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidPresentation(msg));
        let n = self.generators.len();
        let mut names = std::collections::HashSet::new();
        let odd_char = self.ground.characteristic() != 2;
        let mut inverted_axes = [false; 2];
        for g in &self.generators {
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return bad(format!("bad generator name `{}`", g.name));
            }
            if !names.insert(g.name.clone()) {
                return bad(format!("duplicate generator `{}`", g.name));
            }
            let axis = match (g.degree.s != 0, g.degree.t != 0) {
                (true, false) => 0,
                (false, true) => 1,
                _ => return bad(format!("generator `{}` must have degree on exactly one axis", g.name)),
            };
            if odd_char && !g.is_exterior() && g.degree.is_odd() {
                return bad(format!("polynomial generator `{}` has odd total degree", g.name));
            }
            if g.invertible {
                if g.is_exterior() {
                    return Err(Error::NotInvertible(g.name.clone(), "exterior generator".into()));
                }
                if inverted_axes[axis] {
                    return bad("at most one invertible generator per axis".into());
                }
                inverted_axes[axis] = true;
            }
        }
        for rule in &self.rules {
            let lead = &rule.lead;
            if lead.dual || lead.exps.len() != n || lead.exps.iter().any(|&e| e < 0) || lead.is_one() {
                return bad("rule leads must be nonconstant monomials with nonnegative exponents".into());
            }
            for (i, g) in self.generators.iter().enumerate() {
                if lead.exps[i] > 0 && g.invertible {
                    return Err(Error::NotInvertible(g.name.clone(), "appears in a rule".into()));
                }
                if lead.exps[i] > 1 && g.is_exterior() {
                    return bad(format!("rule lead {} is already zero", self.format_monomial(lead)));
                }
            }
            if rule.tail.field() != self.ground {
                return Err(Error::FieldMismatch(self.ground.to_string(), rule.tail.field().to_string()));
            }
            let d = self.degree(lead);
            for (m, _) in rule.tail.terms() {
                if m.dual || m.exps.len() != n {
                    return bad("malformed rule tail".into());
                }
                if self.degree(m) != d {
                    return bad(format!("rule for {} is not homogeneous", self.format_monomial(lead)));
                }
                if m.lex_cmp(lead) != std::cmp::Ordering::Less {
                    return bad(format!("rule for {} does not decrease", self.format_monomial(lead)));
                }
            }
        }
        Ok(())
    }

    pub fn ground(&self) -> FieldDescriptor {
        self.ground
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn ngens(&self) -> usize {
        self.generators.len()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn one(&self) -> Element {
        Element::monomial(self.ground, Monomial::one(self.ngens()))
    }

    pub fn gen(&self, name: &str) -> Result<Element> {
        let i = self.index_of(name)?;
        Ok(Element::monomial(self.ground, Monomial::generator(self.ngens(), i, 1)))
    }

    /// Bidegree of the ordinary monomial with these exponents.
    pub fn degree(&self, m: &Monomial) -> Bidegree {
        self.generators
            .iter()
            .zip(&m.exps)
            .fold(Bidegree::ZERO, |acc, (g, &e)| acc + g.degree.scale(e))
    }

    /// Parity of the total degree, restricted to the listed generator positions.
    pub(crate) fn odd_part(&self, exps: &[i32], mask: impl Fn(usize) -> bool) -> bool {
        let mut odd = false;
        for (i, (g, &e)) in self.generators.iter().zip(exps).enumerate() {
            if mask(i) && g.degree.is_odd() && e.rem_euclid(2) == 1 {
                odd = !odd;
            }
        }
        odd
    }

    fn signs_matter(&self) -> bool {
        self.ground.characteristic() != 2
    }

    /// Product of two ordinary monomials in canonical order, as `(negate, product)`,
    /// or `None` when an exterior generator squares.
    pub fn mono_mul(&self, a: &[i32], b: &[i32]) -> Option<(bool, Vec<i32>)> {
        let mut exps = Vec::with_capacity(a.len());
        for (i, g) in self.generators.iter().enumerate() {
            let e = a[i] + b[i];
            if g.is_exterior() && e > 1 {
                return None;
            }
            exps.push(e);
        }
        let mut negate = false;
        if self.signs_matter() {
            // Move each factor of b leftwards past the factors of a with larger index.
            let mut odd_a_after = false;
            for i in (0..a.len()).rev() {
                let g = &self.generators[i];
                let b_odd = g.degree.is_odd() && b[i].rem_euclid(2) == 1;
                if b_odd && odd_a_after {
                    negate = !negate;
                }
                if g.degree.is_odd() && a[i].rem_euclid(2) == 1 {
                    odd_a_after = !odd_a_after;
                }
            }
        }
        Some((negate, exps))
    }

    fn signed(&self, c: FieldElement, negate: bool) -> FieldElement {
        if negate {
            -c
        } else {
            c
        }
    }

    /// True iff no rule applies to the monomial.
    pub fn is_normal(&self, exps: &[i32]) -> bool {
        self.reducer(exps).is_none() && self.exterior_ok(exps)
    }

    fn exterior_ok(&self, exps: &[i32]) -> bool {
        self.generators
            .iter()
            .zip(exps)
            .all(|(g, &e)| !g.is_exterior() || (0..=1).contains(&e))
    }

    fn reducer(&self, exps: &[i32]) -> Option<usize> {
        self.rules
            .iter()
            .position(|r| r.lead.exps.iter().zip(exps).all(|(&l, &e)| l == 0 || l <= e))
    }

    /// One rewrite step on `c · m` using rule `k`.
    fn rewrite(&self, exps: &[i32], c: FieldElement, k: usize, out: &mut BTreeMap<Monomial, FieldElement>) {
        let rule = &self.rules[k];
        let q: Vec<i32> = exps.iter().zip(&rule.lead.exps).map(|(e, l)| e - l).collect();
        let (sigma, _) = self.mono_mul(&rule.lead.exps, &q).expect("lead divides a normal exterior pattern");
        for (n, &tc) in rule.tail.terms() {
            if let Some((tau, prod)) = self.mono_mul(&n.exps, &q) {
                let coeff = self.signed(self.signed(c * tc, sigma), tau);
                accumulate(out, Monomial::new(prod), coeff);
            }
        }
    }

    fn check_element(&self, e: &Element) -> Result<()> {
        if e.field() != self.ground {
            return Err(Error::FieldMismatch(self.ground.to_string(), e.field().to_string()));
        }
        if let Some((m, _)) = e.terms().find(|(m, _)| m.exps.len() != self.ngens()) {
            return Err(Error::UnknownGenerator(format!(
                "monomial with {} exponents in a ring with {} generators",
                m.exps.len(),
                self.ngens()
            )));
        }
        Ok(())
    }

    /// Fully reduces an element. Dual-marked terms are passed through.
    pub fn normal_form(&self, e: &Element) -> Result<Element> {
        self.check_element(e)?;
        let mut pending: BTreeMap<Monomial, FieldElement> = e.clone().into_terms();
        let mut done = Element::zero(self.ground);
        let mut steps = 0usize;
        while let Some((m, c)) = pending.pop_last() {
            if m.dual {
                done.add_term(m, c);
                continue;
            }
            if !self.exterior_ok(&m.exps) {
                continue;
            }
            match self.reducer(&m.exps) {
                None => done.add_term(m, c),
                Some(k) => {
                    steps += 1;
                    if steps > MAX_REWRITES {
                        return Err(Error::NotConfluent("rewriting did not terminate".into()));
                    }
                    self.rewrite(&m.exps, c, k, &mut pending);
                }
            }
        }
        Ok(done)
    }

    /// Reduces by repeatedly rewriting the reducible term picked by `choose`,
    /// which receives the number of reducible terms and returns an index.
    pub fn normal_form_by(&self, e: &Element, mut choose: impl FnMut(usize) -> usize) -> Result<Element> {
        self.check_element(e)?;
        let mut terms = e.clone().into_terms();
        for _ in 0..MAX_REWRITES {
            let reducible: Vec<(Monomial, Option<usize>)> = terms
                .keys()
                .filter(|m| !m.dual)
                .filter_map(|m| {
                    if !self.exterior_ok(&m.exps) {
                        Some((m.clone(), None))
                    } else {
                        self.reducer(&m.exps).map(|k| (m.clone(), Some(k)))
                    }
                })
                .collect();
            if reducible.is_empty() {
                let mut out = Element::zero(self.ground);
                for (m, c) in terms {
                    out.add_term(m, c);
                }
                return Ok(out);
            }
            let (m, rule) = reducible[choose(reducible.len()) % reducible.len()].clone();
            let c = terms.remove(&m).expect("term present");
            if let Some(k) = rule {
                let mut produced = BTreeMap::new();
                self.rewrite(&m.exps, c, k, &mut produced);
                for (n, x) in produced {
                    accumulate(&mut terms, n, x);
                }
            }
        }
        Err(Error::NotConfluent("rewriting did not terminate".into()))
    }

    /// Product of two ordinary elements, reduced.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut raw = BTreeMap::new();
        for (ma, &ca) in a.terms() {
            for (mb, &cb) in b.terms() {
                if ma.dual || mb.dual {
                    return Err(Error::RingMismatch("dual classes need a Tate ring".into()));
                }
                if let Some((neg, exps)) = self.mono_mul(&ma.exps, &mb.exps) {
                    accumulate(&mut raw, Monomial::new(exps), self.signed(ca * cb, neg));
                }
            }
        }
        let mut e = Element::zero(self.ground);
        for (m, c) in raw {
            e.add_term(m, c);
        }
        self.normal_form(&e)
    }

    pub fn power(&self, a: &Element, k: u32) -> Result<Element> {
        let mut acc = self.one();
        for _ in 0..k {
            acc = self.multiply(&acc, a)?;
        }
        Ok(acc)
    }

    fn check_confluence(&self) -> Result<()> {
        let n = self.ngens();
        let mut leads: Vec<(Monomial, Element)> = self.rules.iter().map(|r| (r.lead.clone(), r.tail.clone())).collect();
        for (i, g) in self.generators.iter().enumerate() {
            if g.is_exterior() {
                leads.push((Monomial::generator(n, i, 2), Element::zero(self.ground)));
            }
        }
        for i in 0..leads.len() {
            for j in (i + 1)..leads.len() {
                let (a, b) = (&leads[i].0, &leads[j].0);
                if !a.exps.iter().zip(&b.exps).any(|(&x, &y)| x > 0 && y > 0) {
                    continue;
                }
                let lcm: Vec<i32> = a.exps.iter().zip(&b.exps).map(|(&x, &y)| x.max(y)).collect();
                let one_step = |lead: &Monomial, tail: &Element| -> Element {
                    let q: Vec<i32> = lcm.iter().zip(&lead.exps).map(|(e, l)| e - l).collect();
                    let mut out = Element::zero(self.ground);
                    let Some((sigma, _)) = self.mono_mul(&lead.exps, &q) else {
                        return out;
                    };
                    for (m, &c) in tail.terms() {
                        if let Some((tau, p)) = self.mono_mul(&m.exps, &q) {
                            out.add_term(Monomial::new(p), self.signed(self.signed(c, sigma), tau));
                        }
                    }
                    out
                };
                let left = self.normal_form(&one_step(a, &leads[i].1))?;
                let right = self.normal_form(&one_step(b, &leads[j].1))?;
                if left != right {
                    return Err(Error::NotConfluent(format!(
                        "overlap of {} and {} reduces to {} and {}",
                        self.format_monomial(a),
                        self.format_monomial(b),
                        self.format_element(&left),
                        self.format_element(&right)
                    )));
                }
            }
        }
        Ok(())
    }

    /// The same ring with `g` made invertible.
    pub fn invert_generator(&self, name: &str) -> Result<RingPresentation> {
        let i = self.index_of(name)?;
        let g = &self.generators[i];
        if g.invertible {
            return Ok(self.clone());
        }
        if g.is_exterior() {
            return Err(Error::NotInvertible(name.into(), "exterior generator".into()));
        }
        if self.rules.iter().any(|r| r.lead.exps[i] > 0) {
            return Err(Error::NotInvertible(name.into(), "a power of it is rewritten".into()));
        }
        let mut generators = self.generators.clone();
        generators[i].invertible = true;
        let axis_taken = self
            .generators
            .iter()
            .any(|h| h.invertible && (h.degree.s != 0) == (g.degree.s != 0));
        if axis_taken {
            return Err(Error::NotInvertible(name.into(), "another generator on its axis is inverted".into()));
        }
        RingPresentation::new(self.ground, generators, self.rules.clone())
    }

    /// Tensor product; generator names must be disjoint.
    pub fn tensor(&self, other: &RingPresentation) -> Result<RingPresentation> {
        if self.ground != other.ground {
            return Err(Error::FieldMismatch(self.ground.to_string(), other.ground.to_string()));
        }
        let (n1, n2) = (self.ngens(), other.ngens());
        let pad = |m: &Monomial, front: usize, back: usize| {
            let mut exps = vec![0; front];
            exps.extend_from_slice(&m.exps);
            exps.extend(std::iter::repeat_n(0, back));
            Monomial { dual: m.dual, exps }
        };
        let pad_rule = |r: &Rule, front: usize, back: usize| {
            let mut tail = Element::zero(self.ground);
            for (m, &c) in r.tail.terms() {
                tail.add_term(pad(m, front, back), c);
            }
            Rule {
                lead: pad(&r.lead, front, back),
                tail,
            }
        };
        let mut generators = self.generators.clone();
        generators.extend(other.generators.iter().cloned());
        let mut rules: Vec<Rule> = self.rules.iter().map(|r| pad_rule(r, 0, n2)).collect();
        rules.extend(other.rules.iter().map(|r| pad_rule(r, n1, 0)));
        RingPresentation::new(self.ground, generators, rules)
    }

    /// Largest exponent a normal monomial can carry on generator `i`, if bounded.
    pub fn nilpotency_bound(&self, i: usize) -> Option<i32> {
        if self.generators[i].is_exterior() {
            return Some(1);
        }
        self.rules
            .iter()
            .filter(|r| r.lead.exps.iter().enumerate().all(|(j, &e)| j == i || e == 0))
            .map(|r| r.lead.exps[i] - 1)
            .min()
    }

    /// Exponent vectors with `sum_i e_i * degs[i] = target`, over the positions in
    /// `active`. Exponents are nonnegative except on invertible generators.
    pub(crate) fn solve_degree(&self, degs: &[Bidegree], active: &[usize], target: Bidegree) -> Result<Vec<Vec<i32>>> {
        let n = self.ngens();
        let mut per_axis: Vec<Vec<Vec<(usize, i32)>>> = Vec::new();
        for axis in 0..2 {
            let coord = |d: Bidegree| if axis == 0 { d.s } else { d.t };
            let gens: Vec<usize> = active.iter().copied().filter(|&i| coord(degs[i]) != 0).collect();
            let value = coord(target);
            let inv: Vec<usize> = gens.iter().copied().filter(|&i| self.generators[i].invertible).collect();
            let non: Vec<usize> = gens.iter().copied().filter(|&i| !self.generators[i].invertible).collect();
            let bounds: Vec<Option<i32>> = non.iter().map(|&i| self.nilpotency_bound(i)).collect();
            let exceeded = || Error::WindowExceeded(target.s, target.t);
            let mut sols = Vec::new();
            match inv.as_slice() {
                [] => {
                    let signs: Vec<i32> = non.iter().map(|&i| coord(degs[i]).signum()).collect();
                    let mixed = signs.windows(2).any(|w| w[0] != w[1]);
                    if mixed && bounds.iter().any(Option::is_none) {
                        return Err(exceeded());
                    }
                    let mut cur = Vec::new();
                    enumerate_axis(&non, &bounds, &|i| coord(degs[i]), value, 0, &mut cur, &mut sols);
                }
                [g] => {
                    if bounds.iter().any(Option::is_none) {
                        return Err(exceeded());
                    }
                    let dg = coord(degs[*g]);
                    let mut partial = Vec::new();
                    let mut cur = Vec::new();
                    enumerate_bounded(&non, &bounds, 0, &mut cur, &mut partial);
                    for combo in partial {
                        let used: i32 = combo.iter().map(|&(i, e)| e * coord(degs[i])).sum();
                        let rest = value - used;
                        if rest % dg == 0 {
                            let mut c = combo;
                            c.push((*g, rest / dg));
                            sols.push(c);
                        }
                    }
                }
                _ => return Err(exceeded()),
            }
            if gens.is_empty() {
                sols = if value == 0 { vec![Vec::new()] } else { Vec::new() };
            }
            per_axis.push(sols);
        }
        let mut out = Vec::new();
        for a in &per_axis[0] {
            for b in &per_axis[1] {
                let mut exps = vec![0; n];
                for &(i, e) in a.iter().chain(b) {
                    exps[i] = e;
                }
                out.push(exps);
            }
        }
        Ok(out)
    }

    /// Normal monomials of the given bidegree, in descending lex order.
    pub fn basis(&self, b: Bidegree) -> Result<Vec<Monomial>> {
        let degs: Vec<Bidegree> = self.generators.iter().map(|g| g.degree).collect();
        let active: Vec<usize> = (0..self.ngens()).collect();
        let mut out: Vec<Monomial> = self
            .solve_degree(&degs, &active, b)?
            .into_iter()
            .filter(|e| self.is_normal(e))
            .map(Monomial::new)
            .collect();
        out.sort_by(|a, b| b.lex_cmp(a));
        Ok(out)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        let mut parts = Vec::new();
        if m.dual {
            parts.push("α".to_string());
        }
        for (g, &e) in self.generators.iter().zip(&m.exps) {
            match e {
                0 => {}
                1 => parts.push(g.name.clone()),
                _ => parts.push(format!("{}^{}", g.name, e)),
            }
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    pub fn format_element(&self, e: &Element) -> String {
        if e.is_zero() {
            return "0".into();
        }
        let mut terms: Vec<(&Monomial, &FieldElement)> = e.terms().collect();
        terms.sort_by(|a, b| b.0.cmp(a.0));
        terms
            .iter()
            .map(|(m, c)| {
                let mono = self.format_monomial(m);
                if c.is_one() {
                    mono
                } else {
                    let coeff = if c.field().degree() == 1 {
                        c.to_string()
                    } else {
                        format!("[{}]", c.index())
                    };
                    if m.is_one() {
                        coeff
                    } else {
                        format!("{coeff} {mono}")
                    }
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses `"x1^2 y1 t1^-1"`; `α` (or `alpha`) marks a dual class.
    pub fn parse_monomial(&self, s: &str) -> Result<Monomial> {
        let mut m = Monomial::one(self.ngens());
        for tok in s.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            if tok == "1" {
                continue;
            }
            if tok == "α" || tok == "alpha" {
                m.dual = true;
                continue;
            }
            let (name, e) = match tok.split_once('^') {
                Some((n, e)) => (n, e.parse::<i32>().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?),
                None => (tok, 1),
            };
            let i = self.index_of(name)?;
            m.exps[i] += e;
        }
        Ok(m)
    }

    /// Parses a sum of terms, each an optional coefficient followed by a monomial.
    /// Coefficients are integers (prime field) or `[index]` field encodings.
    pub fn parse_element(&self, s: &str) -> Result<Element> {
        let mut e = Element::zero(self.ground);
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(e);
        }
        for term in s.split('+') {
            let term = term.trim();
            let mut coeff = self.ground.one();
            let mut rest = term;
            let first = term.split_whitespace().next().unwrap_or("");
            if let Some(idx) = first.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
                let v: u64 = idx.parse().map_err(|_| Error::Parse(format!("bad coefficient `{first}`")))?;
                coeff = self.ground.from_index(v)?;
                rest = &term[first.len()..];
            } else if let Ok(v) = first.parse::<i64>() {
                coeff = self.ground.from_int(v);
                rest = &term[first.len()..];
            }
            e.add_term(self.parse_monomial(rest)?, coeff);
        }
        Ok(e)
    }

    pub fn to_json(&self) -> PresentationJson {
        PresentationJson {
            ground: self.ground.to_string(),
            generators: self.generators.clone(),
            rules: self
                .rules
                .iter()
                .map(|r| (self.format_monomial(&r.lead), self.format_element(&r.tail)))
                .collect(),
        }
    }

    pub fn from_json(j: &PresentationJson) -> Result<Self> {
        let ground: FieldDescriptor = j.ground.parse()?;
        let rules: Vec<(&str, &str)> = j.rules.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        RingPresentation::parse(ground, j.generators.clone(), &rules)
    }
}

/// Serialized form of a presentation, used by `--dump-ring`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationJson {
    pub ground: String,
    pub generators: Vec<GeneratorSpec>,
    pub rules: Vec<(String, String)>,
}

fn accumulate(map: &mut BTreeMap<Monomial, FieldElement>, m: Monomial, c: FieldElement) {
    if c.is_zero() {
        return;
    }
    match map.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let s = *o.get() + c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
    }
}

fn enumerate_axis(
    gens: &[usize],
    bounds: &[Option<i32>],
    deg: &dyn Fn(usize) -> i32,
    remaining: i32,
    k: usize,
    cur: &mut Vec<(usize, i32)>,
    out: &mut Vec<Vec<(usize, i32)>>,
) {
    if k == gens.len() {
        if remaining == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let d = deg(gens[k]);
    let cap = bounds[k].unwrap_or(i32::MAX);
    let mut e = 0;
    loop {
        if e > cap {
            break;
        }
        let used = e * d;
        // Unbounded generators all share a sign, so overshooting ends the loop.
        if bounds[k].is_none() && used != 0 && (used.signum() != remaining.signum() || used.abs() > remaining.abs()) {
            break;
        }
        cur.push((gens[k], e));
        enumerate_axis(gens, bounds, deg, remaining - used, k + 1, cur, out);
        cur.pop();
        e += 1;
    }
}

fn enumerate_bounded(
    gens: &[usize],
    bounds: &[Option<i32>],
    k: usize,
    cur: &mut Vec<(usize, i32)>,
    out: &mut Vec<Vec<(usize, i32)>>,
) {
    if k == gens.len() {
        out.push(cur.clone());
        return;
    }
    for e in 0..=bounds[k].unwrap_or(0) {
        cur.push((gens[k], e));
        enumerate_bounded(gens, bounds, k + 1, cur, out);
        cur.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldDescriptor {
        FieldDescriptor::prime(2).unwrap()
    }

    fn dihedral() -> RingPresentation {
        RingPresentation::parse(
            f2(),
            vec![
                GeneratorSpec::even("x1", 1, 0),
                GeneratorSpec::even("u1", 1, 0),
                GeneratorSpec::even("z2", 2, 0),
            ],
            &[("x1^2", "u1 x1")],
        )
        .unwrap()
    }

    fn quaternion() -> RingPresentation {
        RingPresentation::parse(
            f2(),
            vec![
                GeneratorSpec::even("x2", 1, 0),
                GeneratorSpec::even("x1", 1, 0),
                GeneratorSpec::even("e4", 4, 0),
            ],
            &[("x2^2", "x1^2 + x1 x2"), ("x1^3", "0")],
        )
        .unwrap()
    }

    #[test]
    fn dihedral_square() {
        let r = dihedral();
        let x = r.gen("x1").unwrap();
        let sq = r.multiply(&x, &x).unwrap();
        assert_eq!(r.format_element(&sq), "x1 u1");
    }

    #[test]
    fn quaternion_square() {
        let r = quaternion();
        let x2 = r.gen("x2").unwrap();
        let sq = r.multiply(&x2, &x2).unwrap();
        assert_eq!(sq, r.parse_element("x1^2 + x2 x1").unwrap());
        let dims: Vec<usize> = (0..8).map(|d| r.basis(Bidegree::new(d, 0)).unwrap().len()).collect();
        assert_eq!(dims, vec![1, 2, 2, 1, 1, 2, 2, 1]);
    }

    #[test]
    fn zero_is_normal() {
        let r = quaternion();
        assert!(r.normal_form(&Element::zero(f2())).unwrap().is_zero());
    }

    #[test]
    fn non_confluent_rules_rejected() {
        let r = RingPresentation::parse(
            f2(),
            vec![GeneratorSpec::even("a", 1, 0), GeneratorSpec::even("b", 1, 0)],
            &[("a^2", "b^2"), ("a b", "0")],
        );
        assert!(matches!(r, Err(Error::NotConfluent(_))));
    }

    #[test]
    fn increasing_rule_rejected() {
        let r = RingPresentation::parse(
            f2(),
            vec![GeneratorSpec::even("a", 1, 0), GeneratorSpec::even("b", 1, 0)],
            &[("b^2", "a b")],
        );
        assert!(matches!(r, Err(Error::InvalidPresentation(_))));
    }

    #[test]
    fn exterior_squares_vanish_with_signs() {
        let f3 = FieldDescriptor::prime(3).unwrap();
        let r = RingPresentation::free(
            f3,
            vec![GeneratorSpec::odd("e1", 1, 0), GeneratorSpec::even("e2", 2, 0), GeneratorSpec::odd("y", 1, 0)],
        )
        .unwrap();
        let e1 = r.gen("e1").unwrap();
        assert!(r.multiply(&e1, &e1).unwrap().is_zero());
        let y = r.gen("y").unwrap();
        let a = r.multiply(&e1, &y).unwrap();
        let b = r.multiply(&y, &e1).unwrap();
        assert_eq!(a, -&b);
    }

    #[test]
    fn laurent_inversion() {
        let f = f2();
        let r = RingPresentation::free(f, vec![GeneratorSpec::even("t1", 0, -1)]).unwrap();
        let l = r.invert_generator("t1").unwrap();
        assert_eq!(l.invert_generator("t1").unwrap(), l);
        let t = l.gen("t1").unwrap();
        let tinv = Element::monomial(f, l.parse_monomial("t1^-1").unwrap());
        assert_eq!(l.multiply(&t, &tinv).unwrap(), l.one());
        assert_eq!(l.basis(Bidegree::new(0, 5)).unwrap().len(), 1);
        assert!(r.basis(Bidegree::new(0, 5)).unwrap().is_empty());
        let f3 = FieldDescriptor::prime(3).unwrap();
        let ext = RingPresentation::free(f3, vec![GeneratorSpec::odd("e1", 1, 0)]).unwrap();
        assert!(matches!(ext.invert_generator("e1"), Err(Error::NotInvertible(..))));
    }

    #[test]
    fn json_round_trip() {
        let r = quaternion().invert_generator("e4").unwrap();
        let j = serde_json::to_string(&r.to_json()).unwrap();
        let back = RingPresentation::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn basis_outside_support_is_empty() {
        let r = dihedral();
        assert!(r.basis(Bidegree::new(-3, 0)).unwrap().is_empty());
        assert!(r.basis(Bidegree::new(2, 1)).unwrap().is_empty());
        assert_eq!(r.basis(Bidegree::new(2, 0)).unwrap().len(), 3);
    }

    #[test]
    fn unbounded_around_inverted_axis_is_an_error() {
        let r = RingPresentation::free(f2(), vec![GeneratorSpec::even("x", 1, 0), GeneratorSpec::even("y", 1, 0)])
            .unwrap()
            .invert_generator("x")
            .unwrap();
        assert!(matches!(r.basis(Bidegree::new(2, 0)), Err(Error::WindowExceeded(2, 0))));
    }
}
