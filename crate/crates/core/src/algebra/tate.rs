use std::collections::BTreeMap;

use super::{Bidegree, Element, Monomial, RingPresentation};
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::linalg::Matrix;

/// A ring with an optional dual negative part.
///
/// The dual part is the module of functionals on the subring generated by the
/// dualized generators, shifted so that the functional dual to `1` (the class
/// α) sits at `offset`. A dual class `α m^{-1} w` pairs the functional `m^*`
/// with an ordinary monomial `w` in the remaining generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TateRing {
    positive: RingPresentation,
    dual: Option<DualPart>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct DualPart {
    gens: Vec<bool>,
    offset: Bidegree,
    monomial_rules: bool,
}

impl TateRing {
    /// A ring without dual part, e.g. a periodic Tate ring or a Laurent ring.
    pub fn plain(positive: RingPresentation) -> Self {
        TateRing { positive, dual: None }
    }

    /// Adds the dual of the subring generated by `dual_gens`, with α at `offset`.
    pub fn with_dual(positive: RingPresentation, dual_gens: &[&str], offset: Bidegree) -> Result<Self> {
        let n = positive.ngens();
        let mut gens = vec![false; n];
        for name in dual_gens {
            let i = positive.index_of(name)?;
            if positive.generators()[i].invertible {
                return Err(Error::InvalidPresentation(format!("dualized generator `{name}` is invertible")));
            }
            gens[i] = true;
        }
        let mut monomial_rules = true;
        for rule in positive.rules() {
            let touches = |m: &Monomial, side: bool| m.exps.iter().enumerate().any(|(i, &e)| e != 0 && gens[i] == side);
            let in_dual = touches(&rule.lead, true);
            let in_rest = touches(&rule.lead, false);
            let tail_mixed = rule.tail.terms().any(|(m, _)| touches(m, !in_dual));
            if (in_dual && in_rest) || tail_mixed {
                return Err(Error::InvalidPresentation(
                    "rules may not mix dualized and remaining generators".into(),
                ));
            }
            if in_dual && !rule.tail.is_zero() {
                monomial_rules = false;
            }
        }
        Ok(TateRing {
            positive,
            dual: Some(DualPart {
                gens,
                offset,
                monomial_rules,
            }),
        })
    }

    pub fn positive(&self) -> &RingPresentation {
        &self.positive
    }

    pub fn has_dual(&self) -> bool {
        self.dual.is_some()
    }

    /// Position of α, if there is a dual part.
    pub fn dual_offset(&self) -> Option<Bidegree> {
        self.dual.as_ref().map(|d| d.offset)
    }

    pub fn ngens(&self) -> usize {
        self.positive.ngens()
    }

    pub fn ground(&self) -> crate::gf::FieldDescriptor {
        self.positive.ground()
    }

    /// Adjoins further generators (coefficients) that are not dualized.
    pub fn tensor(&self, other: &RingPresentation) -> Result<TateRing> {
        let positive = self.positive.tensor(other)?;
        match &self.dual {
            None => Ok(TateRing::plain(positive)),
            Some(d) => {
                let names: Vec<String> = self
                    .positive
                    .generators()
                    .iter()
                    .zip(&d.gens)
                    .filter(|(_, &on)| on)
                    .map(|(g, _)| g.name.clone())
                    .collect();
                let refs: Vec<&str> = names.iter().map(String::as_str).collect();
                TateRing::with_dual(positive, &refs, d.offset)
            }
        }
    }

    pub fn degree(&self, m: &Monomial) -> Bidegree {
        let base = self.positive.degree(m);
        match (&self.dual, m.dual) {
            (Some(d), true) => base + d.offset,
            _ => base,
        }
    }

    /// The functional `α` itself.
    pub fn alpha(&self) -> Option<Monomial> {
        self.dual.as_ref().map(|_| Monomial::dual(vec![0; self.ngens()]))
    }

    /// All basis classes in a bidegree: normal monomials, then dual classes.
    pub fn basis(&self, b: Bidegree) -> Result<Vec<Monomial>> {
        let mut out = self.positive.basis(b)?;
        out.extend(self.dual_basis(b)?);
        Ok(out)
    }

    fn dual_basis(&self, b: Bidegree) -> Result<Vec<Monomial>> {
        let Some(d) = &self.dual else {
            return Ok(Vec::new());
        };
        let degs: Vec<Bidegree> = self
            .positive
            .generators()
            .iter()
            .zip(&d.gens)
            .map(|(g, &on)| if on { -g.degree } else { g.degree })
            .collect();
        let active: Vec<usize> = (0..self.ngens()).collect();
        let mut found: Vec<Vec<i32>> = self
            .positive
            .solve_degree(&degs, &active, b - d.offset)?
            .into_iter()
            .filter(|e| self.positive.is_normal(e))
            .collect();
        found.sort_by(|a, b| b.cmp(a));
        Ok(found
            .into_iter()
            .map(|mut e| {
                for (x, &on) in e.iter_mut().zip(&d.gens) {
                    if on {
                        *x = -*x;
                    }
                }
                Monomial::dual(e)
            })
            .collect())
    }

    fn check(&self, e: &Element) -> Result<()> {
        if e.field() != self.ground() {
            return Err(Error::FieldMismatch(self.ground().to_string(), e.field().to_string()));
        }
        if e.terms().any(|(m, _)| m.dual) && self.dual.is_none() {
            return Err(Error::RingMismatch("dual class in a ring without dual part".into()));
        }
        Ok(())
    }

    /// Reduces ordinary terms; dual terms must already be basis classes.
    pub fn normal_form(&self, e: &Element) -> Result<Element> {
        self.check(e)?;
        let reduced = self.positive.normal_form(e)?;
        for (m, _) in reduced.terms().filter(|(m, _)| m.dual) {
            let pos = self.positivized(m);
            if !self.positive.is_normal(&pos) {
                return Err(Error::InvalidPresentation(format!(
                    "dual class {} is not a basis functional",
                    self.format_monomial(m)
                )));
            }
        }
        Ok(reduced)
    }

    fn positivized(&self, m: &Monomial) -> Vec<i32> {
        let d = self.dual.as_ref().expect("dual part");
        m.exps
            .iter()
            .zip(&d.gens)
            .map(|(&e, &on)| if on { -e } else { e })
            .collect()
    }

    /// Graded-commutative product; two dual classes multiply to zero.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check(a)?;
        self.check(b)?;
        if a.terms().all(|(m, _)| !m.dual) && b.terms().all(|(m, _)| !m.dual) {
            return self.positive.multiply(a, b);
        }
        let field = self.ground();
        let mut out = Element::zero(field);
        let mut plain = Element::zero(field);
        for (ma, &ca) in a.terms() {
            for (mb, &cb) in b.terms() {
                match (ma.dual, mb.dual) {
                    (false, false) => {
                        if let Some((neg, e)) = self.positive.mono_mul(&ma.exps, &mb.exps) {
                            let c = ca * cb;
                            plain.add_term(Monomial::new(e), if neg { -c } else { c });
                        }
                    }
                    (false, true) => {
                        out = &out + &self.act(&ma.exps, mb)?.scale(ca * cb);
                    }
                    (true, false) => {
                        let swap = self.degree(ma).is_odd() && self.degree(mb).is_odd() && field.characteristic() != 2;
                        let c = if swap { -(ca * cb) } else { ca * cb };
                        out = &out + &self.act(&mb.exps, ma)?.scale(c);
                    }
                    (true, true) => {}
                }
            }
        }
        Ok(&out + &self.positive.normal_form(&plain)?)
    }

    /// Action of an ordinary element on a dual element: `(f·φ)(n) = φ(n f)`.
    pub fn dual_action(&self, pos: &Element, neg: &Element) -> Result<Element> {
        self.check(pos)?;
        self.check(neg)?;
        let mut out = Element::zero(self.ground());
        for (f, &cf) in pos.terms() {
            if f.dual {
                return Err(Error::RingMismatch("first argument of dual_action must be ordinary".into()));
            }
            for (phi, &cp) in neg.terms() {
                if !phi.dual {
                    return Err(Error::RingMismatch("second argument of dual_action must be dual".into()));
                }
                out = &out + &self.act(&f.exps, phi)?.scale(cf * cp);
            }
        }
        Ok(out)
    }

    fn act(&self, f: &[i32], phi: &Monomial) -> Result<Element> {
        let d = self.dual.as_ref().ok_or_else(|| Error::RingMismatch("no dual part".into()))?;
        let ring = &self.positive;
        let field = self.ground();
        let n = self.ngens();
        let split = |v: &[i32], side: bool| -> Vec<i32> {
            v.iter()
                .zip(&d.gens)
                .map(|(&e, &on)| if on == side { e } else { 0 })
                .collect()
        };
        let f_d = split(f, true);
        let f_o = split(f, false);
        let m: Vec<i32> = split(&phi.exps, true).iter().map(|e| -e).collect();
        let w = split(&phi.exps, false);
        if f_o.iter().chain(&f_d).any(|&e| e < 0) && f_d.iter().any(|&e| e < 0) {
            return Err(Error::RingMismatch("negative exponent on a dualized generator".into()));
        }
        let mut negate = false;
        if field.characteristic() != 2 {
            let (neg1, _) = ring.mono_mul(&f_d, &f_o).expect("split of a monomial");
            let phi_d_odd = ring.odd_part(&m, |i| d.gens[i]) ^ d.offset.is_odd();
            let fo_odd = ring.odd_part(&f_o, |i| !d.gens[i]);
            negate = neg1 ^ (phi_d_odd && fo_odd);
        }
        let Some((neg2, fo_w)) = ring.mono_mul(&f_o, &w) else {
            return Ok(Element::zero(field));
        };
        negate ^= neg2;
        let rest = ring.normal_form(&Element::monomial(field, Monomial::new(fo_w)))?;
        let functionals = self.transpose(&f_d, &m)?;
        let mut out = Element::zero(field);
        for (nd, cn) in functionals {
            for (r, &cr) in rest.terms() {
                let exps: Vec<i32> = (0..n).map(|i| if d.gens[i] { -nd[i] } else { r.exps[i] }).collect();
                let c = cn * cr;
                out.add_term(Monomial::dual(exps), if negate { -c } else { c });
            }
        }
        Ok(out)
    }

    /// `f ⊳ m^* = Σ_n coeff_m(n·f) n^*` over basis monomials `n` of the dualized subring.
    fn transpose(&self, f: &[i32], m: &[i32]) -> Result<Vec<(Vec<i32>, FieldElement)>> {
        let d = self.dual.as_ref().expect("dual part");
        let ring = &self.positive;
        let field = self.ground();
        if d.monomial_rules {
            let n: Vec<i32> = m.iter().zip(f).map(|(a, b)| a - b).collect();
            if n.iter().any(|&e| e < 0) || !ring.is_normal(&n) {
                return Ok(Vec::new());
            }
            return Ok(match ring.mono_mul(&n, f) {
                Some((neg, _)) => vec![(n, if neg { -field.one() } else { field.one() })],
                None => Vec::new(),
            });
        }
        let target = Monomial::new(m.to_vec());
        let deg = ring.degree(&target) - ring.degree(&Monomial::new(f.to_vec()));
        let degs: Vec<Bidegree> = ring.generators().iter().map(|g| g.degree).collect();
        let active: Vec<usize> = (0..ring.ngens()).filter(|&i| d.gens[i]).collect();
        let fe = Element::monomial(field, Monomial::new(f.to_vec()));
        let mut out = Vec::new();
        for n in ring.solve_degree(&degs, &active, deg)? {
            if !ring.is_normal(&n) {
                continue;
            }
            let prod = ring.multiply(&Element::monomial(field, Monomial::new(n.clone())), &fe)?;
            let c = prod.coefficient(&target);
            if !c.is_zero() {
                out.push((n, c));
            }
        }
        Ok(out)
    }

    /// The matrix of `basis(r) × basis(-r-1) → ⟨α⟩` in standalone degrees.
    pub fn pairing_matrix(&self, r: i32) -> Result<Matrix> {
        let d = self.dual.as_ref().ok_or_else(|| Error::RingMismatch("no dual part".into()))?;
        let alpha = self.alpha().expect("dual part");
        let pos = self.positive.basis(Bidegree::new(r, 0))?;
        let neg = self.dual_basis(Bidegree::new(-r, 0) + d.offset)?;
        let field = self.ground();
        let mut mat = Matrix::zeros(field, pos.len(), neg.len());
        for (i, p) in pos.iter().enumerate() {
            let pe = Element::monomial(field, p.clone());
            for (j, q) in neg.iter().enumerate() {
                let prod = self.multiply(&pe, &Element::monomial(field, q.clone()))?;
                mat.set(i, j, prod.coefficient(&alpha));
            }
        }
        Ok(mat)
    }

    pub fn format_monomial(&self, m: &Monomial) -> String {
        self.positive.format_monomial(m)
    }

    pub fn format_element(&self, e: &Element) -> String {
        self.positive.format_element(e)
    }

    pub fn parse_element(&self, s: &str) -> Result<Element> {
        self.positive.parse_element(s)
    }

    /// Dimension per bidegree of an element set, used by tests and oracles.
    pub fn dims(&self, degrees: impl IntoIterator<Item = Bidegree>) -> Result<BTreeMap<Bidegree, usize>> {
        degrees.into_iter().map(|b| Ok((b, self.basis(b)?.len()))).collect()
    }
}
