//! Trace of `B^{⊗k} σ_k(s)` on `(ℂ^d)^{⊗k}` by explicit index summation.

use num::complex::Complex64;
use num::Zero;

use super::CycleType;
use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;
const MAX_LETTERS: u64 = 8;

/// Permutation of `0..k` with the given cycle type: cycles sorted by length,
/// filled with consecutive letters.
pub fn canonical_permutation(s: &CycleType) -> Vec<usize> {
    let mut perm = Vec::with_capacity(s.weight() as usize);
    for (i, &count) in s.exps().iter().enumerate() {
        let len = i + 1;
        for _ in 0..count {
            let start = perm.len();
            perm.extend((0..len).map(|t| start + (t + 1) % len));
        }
    }
    perm
}

fn check_square(b: &[Vec<Complex64>]) -> Result<usize> {
    let d = b.len();
    if d == 0 || b.iter().any(|row| row.len() != d) {
        return Err(Error::Config("matrix must be square and nonempty".into()));
    }
    Ok(d)
}

/// `Σ_φ ∏_i B[φ(i)][φ(s(i))]` over all maps `φ: {1..k} → {1..d}`.
pub fn permutation_trace_bruteforce(b: &[Vec<Complex64>], s: &CycleType) -> Result<Complex64> {
    let d = check_square(b)?;
    let k = s.weight();
    if k > MAX_LETTERS {
        return Err(Error::SizeCap(format!("k = {k} exceeds {MAX_LETTERS} letters")));
    }
    let terms = (d as u128).pow(k as u32);
    if terms > MAX_TERMS as u128 {
        return Err(Error::SizeCap(format!("d^k = {terms} exceeds {MAX_TERMS}")));
    }
    let perm = canonical_permutation(s);
    let k = k as usize;
    let mut index = vec![0usize; k];
    let mut total = Complex64::zero();
    loop {
        let term = (0..k).fold(Complex64::new(1.0, 0.0), |acc, i| acc * b[index[i]][index[perm[i]]]);
        total += term;
        let mut pos = 0;
        loop {
            if pos == k {
                return Ok(total);
            }
            index[pos] += 1;
            if index[pos] < d {
                break;
            }
            index[pos] = 0;
            pos += 1;
        }
    }
}

fn mat_mul(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let d = a.len();
    (0..d)
        .map(|i| (0..d).map(|j| (0..d).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

/// `∏_j Tr(B^j)^{a_j}`.
pub fn power_trace_product(b: &[Vec<Complex64>], s: &CycleType) -> Result<Complex64> {
    let d = check_square(b)?;
    let mut power = b.to_vec();
    let mut result = Complex64::new(1.0, 0.0);
    for (i, &count) in s.exps().iter().enumerate() {
        if i > 0 {
            power = mat_mul(&power, b);
        }
        let trace: Complex64 = (0..d).map(|t| power[t][t]).sum();
        result *= trace.powu(count as u32);
    }
    Ok(result)
}
