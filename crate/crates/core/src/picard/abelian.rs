//! Finitely generated abelian groups in invariant-factor form.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};

/// `Z^free_rank ⊕ C_{d_1} ⊕ ... ⊕ C_{d_r}` with `d_1 | d_2 | ... | d_r` and `d_1 ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub invariant_factors: Vec<u64>,
    pub free_rank: u32,
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            invariant_factors: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn free(rank: u32) -> Self {
        AbelianGroup {
            invariant_factors: Vec::new(),
            free_rank: rank,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::from_cyclic_orders(&[n])
    }

    /// `(C_p)^d`.
    pub fn elementary(p: u64, d: usize) -> Self {
        Self::from_cyclic_orders(&vec![p; d])
    }

    /// The direct sum of cyclic groups of the given orders (1s are ignored).
    pub fn from_cyclic_orders(orders: &[u64]) -> Self {
        let mut primary: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &n in orders {
            assert!(n >= 1, "cyclic order must be positive");
            for (p, k) in factorize(n) {
                primary.entry(p).or_default().push(p.pow(k));
            }
        }
        Self::from_primary(primary)
    }

    fn from_primary(mut primary: BTreeMap<u64, Vec<u64>>) -> Self {
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        for v in primary.values_mut() {
            v.sort_unstable_by(|a, b| b.cmp(a));
        }
        let mut factors: Vec<u64> = (0..len)
            .map(|i| primary.values().map(|v| v.get(i).copied().unwrap_or(1)).product())
            .collect();
        factors.reverse();
        AbelianGroup {
            invariant_factors: factors,
            free_rank: 0,
        }
    }

    pub fn with_free_rank(mut self, r: u32) -> Self {
        self.free_rank = r;
        self
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty() && self.free_rank == 0
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn order(&self) -> Option<u64> {
        self.is_finite().then(|| self.invariant_factors.iter().product())
    }

    /// Exponent of the torsion part (1 for a torsion-free group).
    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn has_element_of_order(&self, n: u64) -> bool {
        n == 1 || self.exponent().is_multiple_of(n)
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.invariant_factors.clone();
        orders.extend(&other.invariant_factors);
        Self::from_cyclic_orders(&orders).with_free_rank(self.free_rank + other.free_rank)
    }

    /// Every finite abelian group of order `n`, in canonical form.
    pub fn all_of_order(n: u64) -> Vec<AbelianGroup> {
        let mut per_prime: Vec<Vec<Vec<u64>>> = Vec::new();
        for (p, k) in factorize(n) {
            per_prime.push(partitions(k).into_iter().map(|part| part.iter().map(|&e| p.pow(e)).collect()).collect());
        }
        let mut combos: Vec<Vec<u64>> = vec![Vec::new()];
        for options in per_prime {
            let mut next = Vec::new();
            for c in &combos {
                for o in &options {
                    let mut v = c.clone();
                    v.extend(o);
                    next.push(v);
                }
            }
            combos = next;
        }
        let mut out: Vec<AbelianGroup> = combos.iter().map(|c| Self::from_cyclic_orders(c)).collect();
        out.sort();
        out.dedup();
        out
    }

    /// True iff the group has a filtration `G = F_0 ⊇ F_1 ⊇ ... ⊇ F_k = 0`
    /// with `F_i / F_{i+1}` isomorphic to `quotients[i]`. Finite groups only.
    pub fn admits_filtration(&self, quotients: &[AbelianGroup]) -> bool {
        if !self.is_finite() || quotients.iter().any(|q| !q.is_finite()) {
            return false;
        }
        let product: u64 = quotients.iter().map(|q| q.order().unwrap()).product();
        if Some(product) != self.order() {
            return false;
        }
        static MEMO: OnceLock<Mutex<Memo>> = OnceLock::new();
        let mut memo = MEMO.get_or_init(Default::default).lock().unwrap_or_else(|e| e.into_inner());
        admits(self, quotients, &mut memo)
    }
}

type Memo = HashMap<(AbelianGroup, Vec<AbelianGroup>), bool>;

fn admits(g: &AbelianGroup, quotients: &[AbelianGroup], memo: &mut Memo) -> bool {
    if quotients.is_empty() {
        return g.is_trivial();
    }
    if quotients.len() == 1 {
        return *g == quotients[0];
    }
    let key = (g.clone(), quotients.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let finite = FiniteAbelian::new(&g.invariant_factors);
    let mut ok = false;
    let index = quotients[0].order().unwrap_or(0);
    let order = g.order().unwrap_or(0);
    if index == 0 || !order.is_multiple_of(index) {
        return false;
    }
    for h in finite.subgroups_of_order(order / index) {
        if finite.quotient_type(&h) == quotients[0] && admits(&finite.subgroup_type(&h), &quotients[1..], memo) {
            ok = true;
            break;
        }
    }
    memo.insert(key, ok);
    ok
}

fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            cur.push(part);
            go(k - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

/// Explicit model `Z/d_1 × ... × Z/d_r` for brute-force subgroup enumeration.
struct FiniteAbelian {
    moduli: Vec<u64>,
}

type Elt = Vec<u64>;

impl FiniteAbelian {
    fn new(moduli: &[u64]) -> Self {
        FiniteAbelian { moduli: moduli.to_vec() }
    }

    fn elements(&self) -> Vec<Elt> {
        let mut out = vec![Vec::new()];
        for &d in &self.moduli {
            out = out
                .into_iter()
                .flat_map(|e: Elt| {
                    (0..d).map(move |x| {
                        let mut v = e.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out
    }

    fn add(&self, a: &Elt, b: &Elt) -> Elt {
        a.iter().zip(b).zip(&self.moduli).map(|((x, y), d)| (x + y) % d).collect()
    }

    fn times(&self, n: u64, a: &Elt) -> Elt {
        a.iter().zip(&self.moduli).map(|(x, d)| (x * (n % d)) % d).collect()
    }

    /// `h + <x>`, as a union of cosets of `h`.
    fn extend(&self, h: &BTreeSet<Elt>, x: &Elt) -> BTreeSet<Elt> {
        let mut out = h.clone();
        let mut step = x.clone();
        while !h.contains(&step) {
            out.extend(h.iter().map(|a| self.add(a, &step)));
            step = self.add(&step, x);
        }
        out
    }

    /// Every subgroup of order `n`.
    fn subgroups_of_order(&self, n: u64) -> Vec<BTreeSet<Elt>> {
        let elements = self.elements();
        let zero: Elt = vec![0; self.moduli.len()];
        let mut seen: BTreeSet<BTreeSet<Elt>> = BTreeSet::new();
        let mut queue = vec![BTreeSet::from([zero])];
        seen.insert(queue[0].clone());
        while let Some(h) = queue.pop() {
            if h.len() as u64 == n {
                continue;
            }
            for x in &elements {
                if h.contains(x) {
                    continue;
                }
                let bigger = self.extend(&h, x);
                if n.is_multiple_of(bigger.len() as u64) && seen.insert(bigger.clone()) {
                    queue.push(bigger);
                }
            }
        }
        seen.into_iter().filter(|h| h.len() as u64 == n).collect()
    }

    /// Isomorphism type from torsion counts `|A[n]|` for `n` dividing the exponent.
    fn type_from_counts(order: u64, count: impl Fn(u64) -> u64) -> AbelianGroup {
        let mut primary = BTreeMap::new();
        for (p, k) in factorize(order) {
            // |A[p^j]| = p^{sum_i min(j, λ_i)}; successive differences count parts ≥ j.
            let logs: Vec<u32> = (0..=k).map(|j| ilog(count(p.pow(j)), p)).collect();
            let mut parts = Vec::new();
            let ge: Vec<u32> = (1..=k as usize).map(|j| logs[j] - logs[j - 1]).collect();
            for j in 1..=k as usize {
                let exactly = ge[j - 1] - ge.get(j).copied().unwrap_or(0);
                for _ in 0..exactly {
                    parts.push(p.pow(j as u32));
                }
            }
            primary.insert(p, parts);
        }
        AbelianGroup::from_primary(primary)
    }

    fn subgroup_type(&self, h: &BTreeSet<Elt>) -> AbelianGroup {
        let zero: Elt = vec![0; self.moduli.len()];
        Self::type_from_counts(h.len() as u64, |n| h.iter().filter(|x| self.times(n, x) == zero).count() as u64)
    }

    fn quotient_type(&self, h: &BTreeSet<Elt>) -> AbelianGroup {
        let elements = self.elements();
        let order = elements.len() as u64 / h.len() as u64;
        Self::type_from_counts(order, |n| {
            elements.iter().filter(|x| h.contains(&self.times(n, x))).count() as u64 / h.len() as u64
        })
    }
}

fn ilog(mut n: u64, p: u64) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p;
        k += 1;
    }
    k
}

impl fmt::Display for AbelianGroup {
    /// Largest cyclic factor first, e.g. `C4 x C2`; the trivial group prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariant_factors.iter().rev().map(|d| format!("C{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}
