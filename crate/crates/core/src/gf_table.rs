//! Irreducible polynomials backing `GF(p^m)`.
//!
//! Each entry is the first monic primitive polynomial of degree `m` over `F_p`
//! when candidates are ordered by their coefficient vector read from `x^{m-1}`
//! down to the constant term. Coefficients are stored constant term first and
//! include the leading 1.

pub(crate) const TABLE: [[&[u8]; 16]; 4] = [
    [
        &[1, 1],
        &[1, 1, 1],
        &[1, 1, 0, 1],
        &[1, 1, 0, 0, 1],
        &[1, 0, 1, 0, 0, 1],
        &[1, 1, 0, 0, 0, 0, 1],
        &[1, 1, 0, 0, 0, 0, 0, 1],
        &[1, 0, 1, 1, 1, 0, 0, 0, 1],
        &[1, 0, 0, 0, 1, 0, 0, 0, 0, 1],
        &[1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1],
        &[1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0, 1],
        &[1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ],
    [
        &[1, 1],
        &[2, 1, 1],
        &[1, 2, 0, 1],
        &[2, 1, 0, 0, 1],
        &[1, 2, 0, 0, 0, 1],
        &[2, 1, 0, 0, 0, 0, 1],
        &[1, 2, 1, 0, 0, 0, 0, 1],
        &[2, 0, 0, 1, 0, 0, 0, 0, 1],
        &[1, 0, 1, 2, 0, 0, 0, 0, 0, 1],
        &[2, 1, 0, 1, 0, 0, 0, 0, 0, 0, 1],
        &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 2, 2, 1, 2, 0, 0, 0, 0, 0, 0, 0, 1],
        &[1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[1, 2, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 2, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ],
    [
        &[2, 1],
        &[2, 1, 1],
        &[2, 3, 0, 1],
        &[2, 2, 1, 0, 1],
        &[2, 4, 0, 0, 0, 1],
        &[2, 1, 0, 0, 0, 0, 1],
        &[2, 3, 0, 0, 0, 0, 0, 1],
        &[3, 2, 1, 0, 0, 0, 0, 0, 1],
        &[3, 2, 1, 0, 0, 0, 0, 0, 0, 1],
        &[3, 1, 1, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[3, 2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 3, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 3, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ],
    [
        &[2, 1],
        &[3, 1, 1],
        &[2, 3, 0, 1],
        &[5, 3, 1, 0, 1],
        &[4, 1, 0, 0, 0, 1],
        &[5, 1, 3, 0, 0, 0, 1],
        &[2, 6, 0, 0, 0, 0, 0, 1],
        &[3, 1, 0, 0, 0, 0, 0, 0, 1],
        &[2, 1, 1, 0, 0, 0, 0, 0, 0, 1],
        &[5, 1, 5, 0, 0, 0, 0, 0, 0, 0, 1],
        &[4, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[3, 2, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[2, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[3, 2, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[4, 3, 3, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
        &[3, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1],
    ],
];

pub(crate) const TABLE_PRIMES: [u32; 4] = [2, 3, 5, 7];

/// Modulus for `GF(p^m)`, or `None` when the pair is not tabulated.
pub(crate) fn modulus(p: u32, m: u32) -> Option<&'static [u8]> {
    let row = TABLE_PRIMES.iter().position(|&q| q == p)?;
    if m == 0 || m > 16 {
        return None;
    }
    Some(TABLE[row][(m - 1) as usize])
}
