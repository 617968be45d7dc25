#![allow(dead_code)]

use std::sync::OnceLock;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use picss::algebra::{Bidegree, Element, Monomial, TateRing};
use picss::gf::{FieldDescriptor, FieldElement};
use picss::groups::{ExtensionDatum, GroupFamily};
use picss::picard::{assemble_zero_line, unstable_differential, AbelianGroup};
use picss::specseq::{shift, Derivation, SpectralSequence, Variant, Window};

pub const SUITE_CASES: usize = 1000;

pub fn gf(s: &str) -> FieldDescriptor {
    s.parse().unwrap()
}

pub fn group(s: &str) -> GroupFamily {
    s.parse().unwrap()
}

pub fn datum(g: &str, f: &str) -> ExtensionDatum {
    group(g).extension_datum(gf(f)).unwrap()
}

pub fn small_window() -> Window {
    "-6:6,-6:6".parse().unwrap()
}

const FAMILIES: [(&str, &str); 6] = [
    ("C4", "GF(2)"),
    ("C8", "GF(4)"),
    ("C9", "GF(3)"),
    ("C25", "GF(5)"),
    ("Q8", "GF(4)"),
    ("Q16", "GF(2)"),
];

fn sequences() -> &'static [SpectralSequence] {
    static CELL: OnceLock<Vec<SpectralSequence>> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut out = Vec::new();
        for (g, f) in FAMILIES {
            for variant in [Variant::Hs, Variant::Hfpss, Variant::Tate] {
                let mut ss = SpectralSequence::new(datum(g, f), variant, small_window()).unwrap();
                ss.run_to(5).unwrap();
                out.push(ss);
            }
        }
        out
    })
}

fn rings() -> &'static [(TateRing, ExtensionDatum)] {
    static CELL: OnceLock<Vec<(TateRing, ExtensionDatum)>> = OnceLock::new();
    CELL.get_or_init(|| {
        FAMILIES
            .iter()
            .map(|&(g, f)| {
                let d = datum(g, f);
                (d.tate_ring().unwrap(), d)
            })
            .collect()
    })
}

fn random_element(rng: &mut StdRng, field: FieldDescriptor) -> FieldElement {
    field.from_index(rng.gen_range(0..field.order())).unwrap()
}

fn random_basis_element(rng: &mut StdRng, ring: &TateRing, b: Bidegree) -> Element {
    let field = ring.ground();
    let mut e = Element::zero(field);
    for m in ring.basis(b).unwrap() {
        e.add_term(m, random_element(rng, field));
    }
    e
}

fn random_bidegree(rng: &mut StdRng, reach: i32) -> Bidegree {
    Bidegree::new(rng.gen_range(-reach..=reach), rng.gen_range(-reach..=reach))
}

/// `d_r ∘ d_r = 0` for a random page and bidegree of a random catalog sequence.
pub fn case_d_squared(rng: &mut StdRng) -> Result<(), String> {
    let ss = sequences().choose(rng).unwrap();
    let r = rng.gen_range(2..=4);
    let b = random_bidegree(rng, 6);
    let (Some(first), Some(second)) = (ss.differential(r, b), ss.differential(r, b + shift(r))) else {
        return Ok(());
    };
    let composite = second.mul(first).map_err(|e| e.to_string())?;
    if composite.is_zero() {
        Ok(())
    } else {
        Err(format!("{} {} d{r} at {b:?}", ss.group(), ss.variant()))
    }
}

/// `d(ab) = d(a) b + (-1)^{s+t} a d(b)` for random homogeneous `a`, `b` on page 2.
pub fn case_leibniz(rng: &mut StdRng) -> Result<(), String> {
    let (ring, d) = rings().choose(rng).unwrap();
    let mut der = Derivation::new(ring, 2, &d.seeds).map_err(|e| e.to_string())?;
    let ba = random_bidegree(rng, 4);
    let bb = random_bidegree(rng, 4);
    let a = random_basis_element(rng, ring, ba);
    let b = random_basis_element(rng, ring, bb);
    let run = |der: &mut Derivation| -> picss::Result<bool> {
        let lhs = der.apply(&ring.multiply(&a, &b)?)?;
        let da_b = ring.multiply(&der.apply(&a)?, &b)?;
        let mut a_db = ring.multiply(&a, &der.apply(&b)?)?;
        if (ba.s + ba.t).rem_euclid(2) == 1 {
            a_db = -&a_db;
        }
        Ok(lhs == &da_b + &a_db)
    };
    match run(&mut der) {
        Ok(true) => Ok(()),
        Ok(false) => Err(format!("{} at {ba:?}, {bb:?}", d.whole)),
        Err(e) => Err(e.to_string()),
    }
}

const PAIRING_GROUPS: [(&str, &str); 8] = [
    ("C4", "GF(2)"),
    ("C9", "GF(3)"),
    ("Q8", "GF(2)"),
    ("Q16", "GF(4)"),
    ("C_2^2", "GF(2)"),
    ("C_2^3", "GF(2)"),
    ("C_3^2", "GF(3)"),
    ("D8", "GF(2)"),
];

fn pairing_rings() -> &'static [TateRing] {
    static CELL: OnceLock<Vec<TateRing>> = OnceLock::new();
    CELL.get_or_init(|| PAIRING_GROUPS.iter().map(|&(g, f)| group(g).tate_ring(gf(f)).unwrap()).collect())
}

/// The product `Ĥ^d × Ĥ^{-1-d} → Ĥ^{-1}` is a perfect pairing.
pub fn case_pairing(rng: &mut StdRng) -> Result<(), String> {
    let i = rng.gen_range(0..PAIRING_GROUPS.len());
    let ring = &pairing_rings()[i];
    let d = rng.gen_range(-8..=8);
    let left = ring.basis(Bidegree::new(d, 0)).map_err(|e| e.to_string())?;
    let right = ring.basis(Bidegree::new(-1 - d, 0)).map_err(|e| e.to_string())?;
    let top = ring.basis(Bidegree::new(-1, 0)).map_err(|e| e.to_string())?;
    if top.len() != 1 || left.len() != right.len() {
        return Err(format!("{} degree {d}: dims {} and {}", PAIRING_GROUPS[i].0, left.len(), right.len()));
    }
    let field = ring.ground();
    let as_element = |m: &Monomial| Element::monomial(field, m.clone());
    let mut rows = Vec::new();
    for a in &left {
        let mut row = Vec::new();
        for b in &right {
            let p = ring.multiply(&as_element(a), &as_element(b)).map_err(|e| e.to_string())?;
            row.push(p.coefficient(&top[0]));
        }
        rows.push(row);
    }
    if left.is_empty() {
        return Ok(());
    }
    let m = picss::linalg::Matrix::from_rows(field, rows).map_err(|e| e.to_string())?;
    if m.is_invertible() {
        Ok(())
    } else {
        Err(format!("{} degree {d}: singular pairing", PAIRING_GROUPS[i].0))
    }
}

/// Rewriting in a random order reaches the same normal form.
pub fn case_confluence(rng: &mut StdRng) -> Result<(), String> {
    let (_, d) = rings().choose(rng).unwrap();
    let positive = &d.quotient_cohomology;
    let field = positive.ground();
    let n = positive.ngens();
    let mut e = Element::zero(field);
    for _ in 0..rng.gen_range(1..=4) {
        let exps: Vec<i32> = (0..n).map(|_| rng.gen_range(0..=6)).collect();
        e.add_term(Monomial::new(exps), random_element(rng, field));
    }
    let expected = positive.normal_form(&e).map_err(|e| e.to_string())?;
    let mut seed: u64 = rng.gen();
    let got = positive
        .normal_form_by(&e, |k| {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 33) as usize % k
        })
        .map_err(|e| e.to_string())?;
    if got == expected {
        Ok(())
    } else {
        Err(format!("{}: {} vs {}", d.whole, positive.format_element(&got), positive.format_element(&expected)))
    }
}

const FIELDS: [&str; 9] = ["GF(2)", "GF(4)", "GF(8)", "GF(256)", "GF(3)", "GF(9)", "GF(27)", "GF(5)", "GF(25)"];

/// Ring axioms, inverses and additivity of Frobenius.
pub fn case_field_axioms(rng: &mut StdRng) -> Result<(), String> {
    let f = gf(FIELDS.choose(rng).unwrap());
    let a = random_element(rng, f);
    let b = random_element(rng, f);
    let c = random_element(rng, f);
    let checks = [
        (a + b) + c == a + (b + c),
        (a * b) * c == a * (b * c),
        a + b == b + a,
        a * b == b * a,
        a * (b + c) == a * b + a * c,
        a + f.zero() == a,
        a * f.one() == a,
        a + (-a) == f.zero(),
        a.is_zero() || a * a.inv().unwrap() == f.one(),
        (a + b).frobenius(1) == a.frobenius(1) + b.frobenius(1),
        a.pow(f.order()) == a,
    ];
    match checks.iter().position(|ok| !ok) {
        None => Ok(()),
        Some(i) => Err(format!("{f}: axiom {i} fails for {a}, {b}, {c}")),
    }
}

/// The unstable map agrees with `d_r(x) + x²` computed by direct multiplication.
pub fn case_unstable_pointwise(rng: &mut StdRng, ss: &SpectralSequence, r: u32) -> Result<(), String> {
    let field = ss.ring().ground();
    let source = Bidegree::new(r as i32, r as i32 - 1);
    let src = ss.entry(r, source).unwrap();
    let tgt = ss.entry(r, source + shift(r)).unwrap();
    let map = unstable_differential(ss, r).map_err(|e| e.to_string())?;
    let v: Vec<FieldElement> = (0..src.dim()).map(|_| random_element(rng, field)).collect();
    let linear = ss.differential(r, source).unwrap().apply(&v);
    let mut x = Element::zero(field);
    for (c, rep) in v.iter().zip(&src.reps) {
        x = &x + &src.element(field, rep).scale(*c);
    }
    let square = ss.ring().multiply(&x, &x).map_err(|e| e.to_string())?;
    let sq = tgt.class_of(&tgt.vector(field, &square).unwrap()).unwrap();
    let expected: Vec<FieldElement> = linear.iter().zip(&sq).map(|(&a, &b)| a + b).collect();
    if map.apply(&v) == expected {
        Ok(())
    } else {
        Err(format!("{} over {field}", ss.group()))
    }
}

/// `assemble_zero_line` does not depend on the order of the quotients.
pub fn case_assembly_order(rng: &mut StdRng) -> Result<(), String> {
    let pool = [
        AbelianGroup::cyclic(2),
        AbelianGroup::elementary(2, 2),
        AbelianGroup::cyclic(4),
        AbelianGroup::trivial(),
    ];
    let mut quotients: Vec<AbelianGroup> = (0..rng.gen_range(1..=3)).map(|_| pool.choose(rng).unwrap().clone()).collect();
    let unit = *[2u64, 4].choose(rng).unwrap();
    let first = assemble_zero_line(&quotients, unit);
    quotients.shuffle(rng);
    let second = assemble_zero_line(&quotients, unit);
    if first == second {
        Ok(())
    } else {
        Err(format!("{quotients:?}: {first:?} vs {second:?}"))
    }
}
