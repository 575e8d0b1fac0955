//! Multinomial view of `(t_1 + … + t_m)^k`.
//!
//! Under max-min the coefficients never change a value (repeated terms
//! collapse under max), but they are kept exact so reports can show the
//! full expansion.

use num_bigint::BigUint;

use super::{FtfExpr, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultinomialEntry {
    /// `n_i` = how many times the i-th term of the base expression is used.
    pub composition: Vec<u32>,
    pub coefficient: BigUint,
    /// Raw concatenation of each base term repeated `n_i` times, in order.
    pub term: Term,
}

/// `k! / (n_1! … n_m!)`, exactly.
pub fn multinomial_coefficient(k: u32, parts: &[u32]) -> Result<BigUint> {
    let sum: u64 = parts.iter().map(|&n| u64::from(n)).sum();
    if sum != u64::from(k) {
        return Err(Error::InvalidComposition {
            sum,
            expected: u64::from(k),
        });
    }
    // product of binomials C(n_1 + … + n_i, n_i) keeps intermediates small
    let mut coef = BigUint::from(1u32);
    let mut seen: u32 = 0;
    for &n in parts {
        for j in 1..=n {
            coef *= BigUint::from(seen + j);
            coef /= BigUint::from(j);
        }
        seen += n;
    }
    Ok(coef)
}

/// One entry per composition `(n_1, …, n_m)` of `k`, in lexicographically
/// descending order of compositions.
pub fn multinomial_expand(e: &FtfExpr, k: u32) -> Result<Vec<MultinomialEntry>> {
    if k == 0 {
        return Err(Error::UndefinedPower);
    }
    let terms = e.terms();
    let mut out = Vec::new();
    if terms.is_empty() {
        return Ok(out);
    }
    let mut parts = vec![0u32; terms.len()];
    compositions(k, 0, &mut parts, &mut |parts| {
        let mut atoms = Vec::new();
        for (t, &n) in terms.iter().zip(parts) {
            for _ in 0..n {
                atoms.extend_from_slice(t.atoms());
            }
        }
        out.push(MultinomialEntry {
            composition: parts.to_vec(),
            coefficient: multinomial_coefficient(k, parts).expect("composition sums to k"),
            term: Term::new(atoms),
        });
    });
    Ok(out)
}

fn compositions(remaining: u32, idx: usize, parts: &mut [u32], emit: &mut dyn FnMut(&[u32])) {
    if idx + 1 == parts.len() {
        parts[idx] = remaining;
        emit(parts);
        return;
    }
    for n in (0..=remaining).rev() {
        parts[idx] = n;
        compositions(remaining - n, idx + 1, parts, emit);
    }
    parts[idx] = 0;
}
