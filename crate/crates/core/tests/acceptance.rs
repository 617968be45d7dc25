mod common;

use std::collections::BTreeMap;
use std::io::Write;

use rand::rngs::StdRng;
use rand::SeedableRng;

use common::*;
use picss::algebra::Bidegree;
use picss::gf::FieldDescriptor;
use picss::groups::{cech_e2, polynomial_dim};
use picss::picard::{compute_picard_group, unstable_differential, AbelianGroup, SemilinearMap};
use picss::specseq::{SpectralSequence, Variant, Window};

type Outcome = Result<String, String>;
type Suite = fn(&mut StdRng) -> Result<(), String>;
type Criterion = fn() -> Outcome;

fn report(n: usize, title: &str, outcome: &Outcome) {
    let line = match outcome {
        Ok(detail) => format!("criterion {n:>2}: PASS  {title} ({detail})"),
        Err(detail) => format!("criterion {n:>2}: FAIL  {title}: {detail}"),
    };
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn picard_table(cases: &[(&str, String, AbelianGroup)]) -> Outcome {
    let mut bad = Vec::new();
    for (g, f, expected) in cases {
        match compute_picard_group(group(g), gf(f)) {
            Ok(got) if got == *expected => {}
            Ok(got) => bad.push(format!("{g} over {f}: got {got}, expected {expected}")),
            Err(e) => bad.push(format!("{g} over {f}: {e}")),
        }
    }
    if bad.is_empty() {
        Ok(format!("{} cases", cases.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_1() -> Outcome {
    let mut cases = Vec::new();
    for g in ["C4", "C8", "C16"] {
        for f in ["GF(2)", "GF(4)"] {
            cases.push((g, f.to_string(), AbelianGroup::cyclic(2)));
        }
    }
    picard_table(&cases)
}

fn criterion_2() -> Outcome {
    let mut cases = Vec::new();
    for (g, p) in [("C9", 3), ("C27", 3), ("C25", 5)] {
        for f in [format!("GF({p})"), format!("GF({})", p * p)] {
            cases.push((g, f, AbelianGroup::cyclic(2)));
        }
    }
    picard_table(&cases)
}

/// `x³ = 1` has three solutions in the field.
fn has_cube_roots_of_unity(f: FieldDescriptor) -> bool {
    f.elements().filter(|x| x.pow(3) == f.one()).count() == 3
}

fn criterion_3() -> Outcome {
    let expected = [
        ("GF(2)", AbelianGroup::cyclic(4)),
        ("GF(8)", AbelianGroup::cyclic(4)),
        ("GF(4)", AbelianGroup::from_cyclic_orders(&[4, 2])),
        ("GF(16)", AbelianGroup::from_cyclic_orders(&[4, 2])),
    ];
    for (f, g) in &expected {
        if has_cube_roots_of_unity(gf(f)) != (g.order() == Some(8)) {
            return Err(format!("reference values disagree with the cube-root dichotomy at {f}"));
        }
    }
    let cases: Vec<_> = expected.into_iter().map(|(f, g)| ("Q8", f.to_string(), g)).collect();
    picard_table(&cases)
}

fn criterion_4() -> Outcome {
    let mut cases = Vec::new();
    for g in ["Q16", "Q32"] {
        for f in ["GF(2)", "GF(4)"] {
            cases.push((g, f.to_string(), AbelianGroup::from_cyclic_orders(&[2, 4])));
        }
    }
    picard_table(&cases)
}

fn criterion_5() -> Outcome {
    let mut bad = Vec::new();
    let mut done = Vec::new();
    for (g, f) in [("C4", "GF(2)"), ("C8", "GF(2)"), ("C9", "GF(3)"), ("Q8", "GF(2)"), ("Q16", "GF(2)")] {
        let mut ss = SpectralSequence::new(datum(g, f), Variant::Tate, Window::default()).map_err(|e| e.to_string())?;
        ss.run_to(6).map_err(|e| e.to_string())?;
        let w = ss.window();
        let mut nonzero = 0;
        let mut unknown = 0;
        for s in w.s.0..=w.s.1 {
            for t in w.t.0..=w.t.1 {
                match ss.dim(6, Bidegree::new(s, t)) {
                    Some(0) => {}
                    Some(_) => nonzero += 1,
                    None => unknown += 1,
                }
            }
        }
        if nonzero + unknown == 0 {
            done.push(g);
        } else {
            bad.push(format!("{g}: {nonzero} nonzero, {unknown} uncertified"));
        }
    }
    if bad.is_empty() {
        Ok(format!("E6 = 0 on the window for {}", done.join(", ")))
    } else {
        Err(bad.join("; "))
    }
}

/// Tate cohomology dimensions from the standard closed forms.
fn tate_dimension(g: &str, n: i32) -> usize {
    if g.starts_with('Q') {
        [1, 2, 2, 1][n.rem_euclid(4) as usize]
    } else {
        1
    }
}

fn criterion_6() -> Outcome {
    let mut bad = Vec::new();
    for (g, f) in [("C4", "GF(2)"), ("C8", "GF(2)"), ("C9", "GF(3)"), ("C25", "GF(5)"), ("Q8", "GF(2)"), ("Q16", "GF(2)")] {
        let tate = group(g).tate_ring(gf(f)).map_err(|e| e.to_string())?;
        let mut ss = SpectralSequence::new(datum(g, f), Variant::Hfpss, Window::default()).map_err(|e| e.to_string())?;
        ss.run_to(6).map_err(|e| e.to_string())?;
        for n in -8..=8 {
            let oracle = tate_dimension(g, n);
            let catalog = tate.basis(Bidegree::new(n, 0)).map_err(|e| e.to_string())?.len();
            let got = ss.total_dimension(6, n);
            if catalog != oracle || got != Some(oracle) {
                bad.push(format!("{g} degree {n}: E∞ {got:?}, catalog {catalog}, expected {oracle}"));
            }
        }
    }
    if bad.is_empty() {
        Ok("6 groups, |n| ≤ 8".into())
    } else {
        Err(bad.join("; "))
    }
}

fn pascal(rows: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![1]];
    for n in 1..=rows {
        let prev = &out[n - 1];
        let row = (0..=n)
            .map(|k| if k == 0 || k == n { 1 } else { prev[k - 1] + prev[k] })
            .collect();
        out.push(row);
    }
    out
}

fn criterion_7() -> Outcome {
    let triangle = pascal(16);
    let mut bad = Vec::new();
    for n in 1..=4i32 {
        for d in [1, 2] {
            let degrees = vec![d; n as usize];
            let page = cech_e2(&degrees, -40, 40).map_err(|e| e.to_string())?;
            let top = degrees.iter().sum::<i32>() - (n - 1);
            for i in 0..=8i32 {
                let expected = triangle[(n - 1 + i) as usize][(n - 1) as usize];
                let poly = polynomial_dim(&degrees, d * i);
                let upper = page.dim(top + d * i, n - 1);
                if poly != expected || upper != expected {
                    bad.push(format!("n={n}, degree {d}, i={i}: {poly}, {upper} vs {expected}"));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok("n ≤ 4, i ≤ 8, generators in degree 1 and 2".into())
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_8() -> Outcome {
    let mut bad = Vec::new();
    for m in 1..=8 {
        let f = FieldDescriptor::new(2, m).map_err(|e| e.to_string())?;
        let mut ss = SpectralSequence::new(group("Q8").extension_datum(f).map_err(|e| e.to_string())?, Variant::Hfpss, Window::default())
            .map_err(|e| e.to_string())?;
        ss.run_to(4).map_err(|e| e.to_string())?;
        let map: SemilinearMap = unstable_differential(&ss, 3).map_err(|e| e.to_string())?;
        let counted = map.kernel_size_by_enumeration();
        let expected = if has_cube_roots_of_unity(f) { 4 } else { 2 };
        if counted != expected || (m % 2 == 0) != (expected == 4) {
            bad.push(format!("GF(2^{m}): kernel has {counted} elements, expected {expected}"));
        }
    }
    if bad.is_empty() {
        Ok("exhaustive for m = 1..8".into())
    } else {
        Err(bad.join("; "))
    }
}

fn criterion_9() -> Outcome {
    let suites: [(&str, Suite); 5] = [
        ("d∘d = 0", case_d_squared),
        ("Leibniz", case_leibniz),
        ("pairing", case_pairing),
        ("confluence", case_confluence),
        ("field axioms", case_field_axioms),
    ];
    let mut bad = Vec::new();
    for (i, (name, case)) in suites.iter().enumerate() {
        let mut rng = StdRng::seed_from_u64(0x5eed + i as u64);
        let failures: Vec<String> = (0..SUITE_CASES).filter_map(|_| case(&mut rng).err()).collect();
        if let Some(first) = failures.first() {
            bad.push(format!("{name}: {} failures, first {first}", failures.len()));
        }
    }
    if bad.is_empty() {
        Ok(format!("5 suites × {SUITE_CASES} cases"))
    } else {
        Err(bad.join("; "))
    }
}

/// `x^3y` style monomials; `t1` factors are dropped.
fn parse_monomial(s: &str, names: &BTreeMap<char, &str>) -> BTreeMap<String, i32> {
    let mut out = BTreeMap::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        let mut e = 1;
        if chars.peek() == Some(&'^') {
            chars.next();
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            e = digits.parse().unwrap();
        }
        *out.entry(names[&c].to_string()).or_insert(0) += e;
    }
    out
}

fn parse_label(label: &str) -> BTreeMap<String, i32> {
    label
        .split_whitespace()
        .filter(|f| !f.starts_with("t1"))
        .map(|f| match f.split_once('^') {
            Some((g, e)) => (g.to_string(), e.parse().unwrap()),
            None => (f.to_string(), 1),
        })
        .collect()
}

/// Cell text as printed in the reference tables: `λ`, `λ+λ²` or empty.
fn cell(map: &SemilinearMap, i: usize, j: usize) -> String {
    let mut parts: Vec<&str> = Vec::new();
    for &(c, e) in map.entry(i, j) {
        if !c.is_one() {
            return "?".into();
        }
        parts.push(match e {
            0 => "λ",
            1 => "λ²",
            _ => "?",
        });
    }
    parts.join("+")
}

fn compare_reference(g: &str, names: &BTreeMap<char, &str>, rows: &[&str], cols: &[&str], cells: &[&[&str]]) -> Result<usize, String> {
    let mut ss = SpectralSequence::new(datum(g, "GF(2)"), Variant::Hfpss, Window::default()).map_err(|e| e.to_string())?;
    ss.run_to(3).map_err(|e| e.to_string())?;
    let map = unstable_differential(&ss, 2).map_err(|e| e.to_string())?;
    let labels = |b: Bidegree| -> Vec<BTreeMap<String, i32>> {
        let e = ss.entry(2, b).unwrap();
        e.labels().iter().map(|m| parse_label(&ss.ring().format_monomial(m))).collect()
    };
    let src = labels(Bidegree::new(2, 1));
    let tgt = labels(Bidegree::new(4, 2));
    if src.len() != rows.len() || tgt.len() != cols.len() {
        return Err(format!("{g}: computed {}×{}, reference {}×{}", src.len(), tgt.len(), rows.len(), cols.len()));
    }
    let mut compared = 0;
    for (r, row) in rows.iter().enumerate() {
        let j = src
            .iter()
            .position(|l| *l == parse_monomial(row, names))
            .ok_or(format!("{g}: no basis class {row}"))?;
        for (c, col) in cols.iter().enumerate() {
            let i = tgt
                .iter()
                .position(|l| *l == parse_monomial(col, names))
                .ok_or(format!("{g}: no basis class {col}"))?;
            let got = cell(&map, i, j);
            if got != cells[r][c] {
                return Err(format!("{g}: d2({row}) at {col} is {got:?}, reference {:?}", cells[r][c]));
            }
            compared += 1;
        }
    }
    Ok(compared)
}

fn criterion_10() -> Outcome {
    let q8_names = BTreeMap::from([('x', "x1"), ('y', "y1")]);
    let q8 = compare_reference(
        "Q8",
        &q8_names,
        &["x^2", "xy", "y^2"],
        &["x^4", "x^3y", "x^2y^2", "xy^3", "y^4"],
        &[
            &["λ+λ²", "λ", "λ", "", ""],
            &["", "λ", "λ+λ²", "λ", ""],
            &["", "", "λ", "λ", "λ+λ²"],
        ],
    )?;
    let q16_names = BTreeMap::from([('x', "x1"), ('u', "u1"), ('z', "z2")]);
    let q16 = compare_reference(
        "Q16",
        &q16_names,
        &["u^2", "z", "ux"],
        &["u^4", "u^2z", "z^2", "u^3x", "uzx"],
        &[
            &["λ+λ²", "λ", "", "", ""],
            &["", "λ", "λ+λ²", "", ""],
            &["", "", "", "λ+λ²", "λ"],
        ],
    )?;
    Ok(format!("{q8} + {q16} cells"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, Criterion); 10] = [
        ("T(C_{2^n}) = C2, n = 2..4, over GF(2), GF(4)", criterion_1),
        ("T(C_{p^n}) = C2 for C9, C27, C25 over GF(p), GF(p^2)", criterion_2),
        ("T(Q8) = C4 or C4 x C2 by the cube-root dichotomy", criterion_3),
        ("T(Q16), T(Q32) = C4 x C2 over GF(2), GF(4)", criterion_4),
        ("faithfulness: Tate E∞ = 0", criterion_5),
        ("HFPSS E∞ totals equal Tate cohomology", criterion_6),
        ("Čech E2 dimensions are binomial", criterion_7),
        ("Q8 d3 kernel dichotomy by enumeration", criterion_8),
        ("randomized property suites", criterion_9),
        ("Q8 and Q16 d2 matrices over GF(2)", criterion_10),
    ];
    let mut failed = Vec::new();
    for (i, (title, run)) in criteria.iter().enumerate() {
        let outcome = run();
        report(i + 1, title, &outcome);
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
