//! The reproduction driver: every headline computation as a named pass/fail check.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::Bidegree;
use crate::error::{Error, Result};
use crate::gf::FieldDescriptor;
use crate::groups::{cech_e2, cohen_macaulay, ExtensionDatum, GroupFamily};
use crate::picard::{compute_picard, semilinear_kernel, unstable_differential, AbelianGroup, SemilinearMap};
use crate::report::certify_datum;
use crate::specseq::{SpectralSequence, Variant, Window, DEFAULT_MARGIN};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Differentials,
    Picard,
    Faithful,
    Hfpss,
    Cech,
    Semilinear,
    Matrices,
}

impl Category {
    pub const ALL: [Category; 7] = [
        Category::Differentials,
        Category::Picard,
        Category::Faithful,
        Category::Hfpss,
        Category::Cech,
        Category::Semilinear,
        Category::Matrices,
    ];
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Category::Differentials => "differentials",
            Category::Picard => "picard",
            Category::Faithful => "faithful",
            Category::Hfpss => "hfpss",
            Category::Cech => "cech",
            Category::Semilinear => "semilinear",
            Category::Matrices => "matrices",
        };
        f.pad(s)
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown check category `{s}`")))
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub only: Option<Category>,
    /// Adds an inconsistent seed `d2(t2) = x2 t1` to the C9 datum.
    pub corrupt_seed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub category: Category,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

type CheckFn = fn(&Options) -> Result<std::result::Result<String, String>>;

const CHECKS: &[(Category, &str, CheckFn)] = &[
    (Category::Differentials, "d∘d = 0 on every catalog sequence", check_dd),
    (Category::Picard, "C_{2^n}, n = 2..4, GF(2) and GF(4): C2", check_pic_cyclic_two),
    (Category::Picard, "C_{p^n}, odd p, GF(p) and GF(p^2): C2", check_pic_cyclic_odd),
    (Category::Picard, "Q8: C4 for odd m, C4 x C2 for even m", check_pic_q8),
    (Category::Picard, "Q16, Q32 over GF(2), GF(4): C4 x C2", check_pic_q2n),
    (Category::Faithful, "Tate E∞ = 0 for C4, C8, C9, Q8, Q16", check_faithful),
    (Category::Hfpss, "HFPSS E∞ totals equal Tate cohomology dimensions", check_hfpss),
    (Category::Cech, "Čech E2 dimensions are binomial coefficients", check_cech_binomials),
    (Category::Cech, "Čech totals equal Tate cohomology dimensions", check_cech_totals),
    (Category::Semilinear, "Q8 d3 kernel order 4 iff m even, m ≤ 8", check_q8_kernel),
    (Category::Semilinear, "Q16 d3 kernel is (C2)^2 for m ≤ 6", check_q16_kernel),
    (Category::Matrices, "Q8 d2 on (2, 2) over GF(2)", check_q8_matrix),
    (Category::Matrices, "Q16 d2 on (2, 2) over GF(2)", check_q16_matrix),
];

/// Runs the selected checks in order; errors are reported as failures.
pub fn run(opts: &Options) -> Vec<CheckOutcome> {
    CHECKS
        .iter()
        .filter(|(c, _, _)| opts.only.is_none_or(|o| o == *c))
        .map(|&(category, name, f)| {
            let (passed, detail) = match f(opts) {
                Ok(Ok(d)) => (true, d),
                Ok(Err(d)) => (false, d),
                Err(e) => (false, e.to_string()),
            };
            CheckOutcome {
                category,
                name: name.to_string(),
                passed,
                detail,
            }
        })
        .collect()
}

pub fn format_table(outcomes: &[CheckOutcome]) -> String {
    let width = outcomes.iter().map(|o| o.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for o in outcomes {
        let pad = width - o.name.chars().count();
        out.push_str(&format!(
            "{:<5} {:<13} {}{}  {}\n",
            if o.passed { "PASS" } else { "FAIL" },
            o.category,
            o.name,
            " ".repeat(pad),
            o.detail
        ));
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    out.push_str(&format!("{passed}/{} checks passed\n", outcomes.len()));
    out
}

fn gf(s: &str) -> FieldDescriptor {
    s.parse().expect("catalog field")
}

fn group(s: &str) -> GroupFamily {
    s.parse().expect("catalog group")
}

fn datum(g: GroupFamily, field: FieldDescriptor, opts: &Options) -> Result<ExtensionDatum> {
    let d = g.extension_datum(field)?;
    if opts.corrupt_seed && g == group("C9") {
        return d.with_seed(2, "t2", "x2 t1");
    }
    Ok(d)
}

fn verdict(failures: Vec<String>, ok: String) -> Result<std::result::Result<String, String>> {
    Ok(if failures.is_empty() { Ok(ok) } else { Err(failures.join("; ")) })
}

const CATALOG: [(&str, &str); 6] = [
    ("C4", "GF(2)"),
    ("C8", "GF(2)"),
    ("C9", "GF(3)"),
    ("C25", "GF(5)"),
    ("Q8", "GF(2)"),
    ("Q16", "GF(2)"),
];

fn check_dd(opts: &Options) -> Result<std::result::Result<String, String>> {
    let mut runs = 0;
    for (g, f) in CATALOG {
        for variant in [Variant::Hfpss, Variant::Tate] {
            let mut ss = SpectralSequence::new(datum(group(g), gf(f), opts)?, variant, Window::default())?;
            ss.run_to(DEFAULT_MARGIN + 1)
                .map_err(|e| Error::PageMismatch(format!("{g} {variant}: {e}")))?;
            runs += 1;
        }
    }
    Ok(Ok(format!("{runs} sequences")))
}

fn picard_cases(cases: &[(&str, &str, &str)], _: &Options) -> Result<std::result::Result<String, String>> {
    let mut failures = Vec::new();
    for &(g, f, expected) in cases {
        let g = group(g);
        let got = compute_picard(g, gf(f), Window::default())?.picard;
        if got.to_string() != expected {
            failures.push(format!("{g} over {f}: {got}, expected {expected}"));
        }
    }
    verdict(failures, format!("{} cases", cases.len()))
}

fn check_pic_cyclic_two(opts: &Options) -> Result<std::result::Result<String, String>> {
    let mut cases = Vec::new();
    for g in ["C4", "C8", "C16"] {
        for f in ["GF(2)", "GF(4)"] {
            cases.push((g, f, "C2"));
        }
    }
    picard_cases(&cases, opts)
}

fn check_pic_cyclic_odd(opts: &Options) -> Result<std::result::Result<String, String>> {
    let cases = [
        ("C9", "GF(3)", "C2"),
        ("C9", "GF(9)", "C2"),
        ("C27", "GF(3)", "C2"),
        ("C27", "GF(9)", "C2"),
        ("C25", "GF(5)", "C2"),
        ("C25", "GF(25)", "C2"),
    ];
    picard_cases(&cases, opts)
}

fn check_pic_q8(opts: &Options) -> Result<std::result::Result<String, String>> {
    let cases = [
        ("Q8", "GF(2)", "C4"),
        ("Q8", "GF(8)", "C4"),
        ("Q8", "GF(4)", "C4 x C2"),
        ("Q8", "GF(16)", "C4 x C2"),
    ];
    picard_cases(&cases, opts)
}

fn check_pic_q2n(opts: &Options) -> Result<std::result::Result<String, String>> {
    let cases = [
        ("Q16", "GF(2)", "C4 x C2"),
        ("Q16", "GF(4)", "C4 x C2"),
        ("Q32", "GF(2)", "C4 x C2"),
        ("Q32", "GF(4)", "C4 x C2"),
    ];
    picard_cases(&cases, opts)
}

fn check_faithful(opts: &Options) -> Result<std::result::Result<String, String>> {
    let mut failures = Vec::new();
    let mut after = Vec::new();
    for (g, f) in [("C4", "GF(2)"), ("C8", "GF(2)"), ("C9", "GF(3)"), ("Q8", "GF(2)"), ("Q16", "GF(2)")] {
        let (cert, _) = certify_datum(datum(group(g), gf(f), opts)?, Window::default())?;
        match cert.last_differential {
            Some(r) if cert.contractible => after.push(format!("{g}: d{r}")),
            _ => failures.push(format!("{g}: survivors {:?}", cert.survivors)),
        }
    }
    verdict(failures, after.join(", "))
}

fn check_hfpss(opts: &Options) -> Result<std::result::Result<String, String>> {
    let mut failures = Vec::new();
    for (g, f) in CATALOG {
        let (g, f) = (group(g), gf(f));
        let tate = g.tate_ring(f)?;
        let mut ss = SpectralSequence::new(datum(g, f, opts)?, Variant::Hfpss, Window::default())?;
        let r = DEFAULT_MARGIN + 1;
        ss.run_to(r)?;
        for n in -8..=8 {
            let expected = tate.basis(Bidegree::new(n, 0))?.len();
            let got = ss.total_dimension(r, n);
            if got != Some(expected) {
                failures.push(format!("{g} degree {n}: {got:?} vs {expected}"));
            }
        }
    }
    verdict(failures, "|n| ≤ 8".into())
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn check_cech_binomials(_: &Options) -> Result<std::result::Result<String, String>> {
    let mut failures = Vec::new();
    for n in 1..=4i32 {
        for d in [1, 2] {
            let degrees = vec![d; n as usize];
            let page = cech_e2(&degrees, -40, 40)?;
            let top = degrees.iter().sum::<i32>() - (n - 1);
            for i in 0..=8 {
                let expected = binomial((n - 1 + i) as u64, (n - 1) as u64) as usize;
                let bottom = page.dim(-d * i, 0);
                let upper = page.dim(top + d * i, n - 1);
                if n > 1 && (bottom != expected || upper != expected) {
                    failures.push(format!("n={n} degree {d} i={i}: {bottom}, {upper} vs {expected}"));
                }
            }
        }
    }
    verdict(failures, "n ≤ 4, i ≤ 8".into())
}

fn check_cech_totals(_: &Options) -> Result<std::result::Result<String, String>> {
    let mut failures = Vec::new();
    let groups = [
        ("C8", "GF(2)"),
        ("C9", "GF(3)"),
        ("C_2^2", "GF(2)"),
        ("C_2^3", "GF(2)"),
        ("C_3^2", "GF(3)"),
        ("D8", "GF(2)"),
        ("Q8", "GF(2)"),
        ("Q16", "GF(2)"),
    ];
    for (g, f) in groups {
        let (g, f) = (group(g), gf(f));
        let cm = cohen_macaulay(g, f)?;
        cm.check_freeness(12)?;
        let page = cm.cech_page(-12, 12)?;
        let tate = g.tate_ring(f)?;
        for d in -8..=8 {
            let expected = tate.basis(Bidegree::new(d, 0))?.len();
            if page.tate_dim(d) != Some(expected) {
                failures.push(format!("{g} degree {d}"));
            }
        }
    }
    verdict(failures, format!("{} groups", groups.len()))
}

fn unstable(g: &str, m: u32, r: u32) -> Result<SemilinearMap> {
    let f = FieldDescriptor::new(2, m)?;
    let mut ss = SpectralSequence::new(group(g).extension_datum(f)?, Variant::Hfpss, Window::default())?;
    ss.run_to(r + 1)?;
    unstable_differential(&ss, r)
}

fn check_q8_kernel(_: &Options) -> Result<std::result::Result<String, String>> {
    let mut failures = Vec::new();
    for m in 1..=8 {
        let order = semilinear_kernel(&unstable("Q8", m, 3)?).order();
        let expected = if m % 2 == 0 { 4 } else { 2 };
        if order != Some(expected) {
            failures.push(format!("m={m}: {order:?}"));
        }
    }
    verdict(failures, "m = 1..8".into())
}

fn check_q16_kernel(_: &Options) -> Result<std::result::Result<String, String>> {
    let mut failures = Vec::new();
    for m in 1..=6 {
        let k = semilinear_kernel(&unstable("Q16", m, 3)?);
        if k != AbelianGroup::elementary(2, 2) {
            failures.push(format!("m={m}: {k}"));
        }
    }
    verdict(failures, "m = 1..6".into())
}

/// `λ`, `λ²`, `λ+λ²` or empty, as printed in the reference tables.
pub fn cell_text(f: &SemilinearMap, i: usize, j: usize) -> String {
    f.entry(i, j)
        .iter()
        .map(|&(c, e)| {
            let base = if e == 0 { "λ".to_string() } else { format!("λ^{}", 1u64 << e) };
            if c.is_one() {
                base
            } else {
                format!("{c}{base}")
            }
        })
        .collect::<Vec<_>>()
        .join("+")
}

/// Sorted generator powers of a label, ignoring the coefficient generator `t1`.
pub fn label_key(label: &str) -> Vec<(String, i32)> {
    let mut out: Vec<(String, i32)> = label
        .split_whitespace()
        .filter(|f| !f.starts_with("t1"))
        .map(|f| match f.split_once('^') {
            Some((g, e)) => (g.to_string(), e.parse().unwrap_or(1)),
            None => (f.to_string(), 1),
        })
        .collect();
    out.sort();
    out
}

/// `(source, target, cell)` triples; source and target in `label_key` syntax.
type Table = &'static [(&'static str, &'static str, &'static str)];

const Q8_TABLE: Table = &[
    ("x1^2", "x1^4", "λ+λ^2"),
    ("x1^2", "x1^3 y1", "λ"),
    ("x1^2", "x1^2 y1^2", "λ"),
    ("x1 y1", "x1^3 y1", "λ"),
    ("x1 y1", "x1^2 y1^2", "λ+λ^2"),
    ("x1 y1", "x1 y1^3", "λ"),
    ("y1^2", "x1^2 y1^2", "λ"),
    ("y1^2", "x1 y1^3", "λ"),
    ("y1^2", "y1^4", "λ+λ^2"),
];

const Q16_TABLE: Table = &[
    ("u1^2", "u1^4", "λ+λ^2"),
    ("u1^2", "u1^2 z2", "λ"),
    ("z2", "u1^2 z2", "λ"),
    ("z2", "z2^2", "λ+λ^2"),
    ("u1 x1", "u1^3 x1", "λ+λ^2"),
    ("u1 x1", "u1 x1 z2", "λ"),
];

/// Compares the `d_2` on `(2, 2)` over GF(2) with a table; cells not listed must be empty.
pub fn compare_table(g: &str, table: Table) -> Result<std::result::Result<String, String>> {
    let f = gf("GF(2)");
    let mut ss = SpectralSequence::new(group(g).extension_datum(f)?, Variant::Hfpss, Window::default())?;
    ss.run_to(3)?;
    let map = unstable_differential(&ss, 2)?;
    let labels = |b: Bidegree| -> Result<Vec<Vec<(String, i32)>>> {
        let e = ss.entry(2, b).ok_or(Error::OutsideWindow { r: 2, s: b.s, t: b.t })?;
        Ok(e.labels().iter().map(|m| label_key(&ss.ring().format_monomial(m))).collect())
    };
    let src = labels(Bidegree::new(2, 1))?;
    let tgt = labels(Bidegree::new(4, 2))?;
    let mut failures = Vec::new();
    let mut matched = 0;
    for (j, s) in src.iter().enumerate() {
        for (i, t) in tgt.iter().enumerate() {
            let expected = table
                .iter()
                .find(|(a, b, _)| label_key(a) == *s && label_key(b) == *t)
                .map_or("", |c| c.2);
            let got = cell_text(&map, i, j);
            if got != expected {
                failures.push(format!("{s:?} → {t:?}: {got:?} vs {expected:?}"));
            }
            matched += usize::from(!expected.is_empty());
        }
    }
    if matched != table.len() {
        failures.push(format!("only {matched} of {} table cells aligned", table.len()));
    }
    verdict(failures, format!("{}×{} cells", src.len(), tgt.len()))
}

fn check_q8_matrix(_: &Options) -> Result<std::result::Result<String, String>> {
    compare_table("Q8", Q8_TABLE)
}

fn check_q16_matrix(_: &Options) -> Result<std::result::Result<String, String>> {
    compare_table("Q16", Q16_TABLE)
}
