//! Closed-form leading terms of the moment integrals as the tensor power
//! `N` grows, together with the Gaussian identity they rest on.
//!
//! For a regular highest weight the integrand concentrates at the points of
//! `Λ/I`; each contributes a Gaussian integral against `|κ|²` whose value is
//! `(2π)^{rk/2} |W| κ(H⁻¹ρ) / √det H` with `H = (2π)² l A_λ`. The routines
//! here assemble those constants exactly where possible (κ and det in
//! rationals) and keep the exponentially large power `(dim V_λ)^{N|α|}` in
//! log form.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num::complex::Complex64;
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::charring::{joint_gcd, CycleType};
use crate::error::{Error, Result};
use crate::linalg::{ln_rat_abs, rat_to_f64};
use crate::repweights::{self, is_regular, weyl_dimension};
use crate::rootsys::{pairing, Covector, RootSystem, Weight};

fn ser_rational<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

/// `e^{2πi·t}` for rational `t`, exact at multiples of a quarter turn.
pub fn root_of_unity(t: &BigRational) -> Complex64 {
    let frac = t - t.floor();
    let quarter = &frac * BigInt::from(4);
    if quarter.is_integer() {
        return match quarter.to_integer().to_i64().unwrap() {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let theta = 2.0 * PI * rat_to_f64(&frac);
    Complex64::new(theta.cos(), theta.sin())
}

/// A band-limited class function `f = Σ c_i χ_{ν_i}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassFunction {
    terms: Vec<(Weight, f64)>,
}

impl ClassFunction {
    pub fn new(terms: Vec<(Weight, f64)>) -> Self {
        Self { terms }
    }

    /// The constant function 1.
    pub fn one(rank: usize) -> Self {
        Self { terms: vec![(Weight::zero(rank), 1.0)] }
    }

    /// Parses `"1,0:0.5;0,0:1"` (weight `:` coefficient, `;`-separated).
    pub fn parse(s: &str) -> Result<Self> {
        let terms = s
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(|t| {
                let (w, c) = t
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("class function term {t:?} lacks ':'")))?;
                let c: f64 = c
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {t:?}")))?;
                Ok((Weight::parse(w)?, c))
            })
            .collect::<Result<Vec<_>>>()?;
        if terms.is_empty() {
            return Err(Error::Parse("empty class function".into()));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(Weight, f64)] {
        &self.terms
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1 == 1.0
    }

    pub fn validate(&self, rs: &RootSystem) -> Result<()> {
        for (nu, _) in &self.terms {
            rs.check_rank(nu)?;
            if !rs.is_dominant(nu) {
                return Err(Error::NotDominant { weight: nu.to_string() });
            }
        }
        Ok(())
    }

    /// `f(e) = Σ c_i dim V_{ν_i}`.
    pub fn at_identity(&self, rs: &RootSystem) -> Result<f64> {
        self.terms.iter().try_fold(0.0, |acc, (nu, c)| {
            Ok(acc + c * weyl_dimension(rs, nu)?.to_f64().unwrap_or(f64::INFINITY))
        })
    }

    /// Value at the central element `exp(ψ)`, `ψ ∈ Λ`:
    /// `χ_ν(exp ψ) = dim V_ν · e^{2πi⟨ν,ψ⟩}`.
    pub fn at_central(&self, rs: &RootSystem, psi: &Covector) -> Result<Complex64> {
        self.terms.iter().try_fold(Complex64::zero(), |acc, (nu, c)| {
            let dim = weyl_dimension(rs, nu)?.to_f64().unwrap_or(f64::INFINITY);
            Ok(acc + root_of_unity(&pairing(nu, psi)?) * (c * dim))
        })
    }

    /// Coefficients as integers, when they all are.
    pub fn integer_terms(&self) -> Option<Vec<(Weight, BigInt)>> {
        self.terms
            .iter()
            .map(|(w, c)| (c.fract() == 0.0 && c.abs() < 9e15).then(|| (w.clone(), BigInt::from(*c as i64))))
            .collect()
    }
}

/// Leading term with its factored constituents.
///
/// `value = exp(log_dim_power) · prefactor · kappa_term / √det_a · Re(pi_sum)`.
#[derive(Debug, Clone, Serialize)]
pub struct AsymptoticEstimate {
    pub value: f64,
    /// `ln |value|`; `-inf` when the leading term vanishes.
    pub log_abs_value: f64,
    /// `N·(|α|+|β|)·ln dim V_λ`.
    pub log_dim_power: f64,
    #[serde(serialize_with = "ser_rational")]
    pub kappa_term: BigRational,
    #[serde(serialize_with = "ser_rational")]
    pub det_a: BigRational,
    /// `Σ_h ν(h) f(h)`, reported as `[re, im]`.
    #[serde(serialize_with = "ser_complex")]
    pub pi_sum: Complex64,
    /// `(2π)^d / (2π l N)^{dim G / 2}`.
    pub prefactor: f64,
    pub n: u64,
}

impl AsymptoticEstimate {
    pub fn reconstruct(&self) -> f64 {
        self.log_dim_power.exp() * self.prefactor * rat_to_f64(&self.kappa_term)
            / rat_to_f64(&self.det_a).sqrt()
            * self.pi_sum.re
    }
}

/// `(|α|, k_α, l_α)`.
pub fn cycle_constants(a: &CycleType) -> (u64, u64, u64) {
    (a.size(), a.weight(), a.quad())
}

/// `ν_{mλ}(h) = e^{2πi·m·⟨λ, ψ_h⟩}`, the phase reduced mod 1 exactly.
pub fn nu_character(lam: &Weight, m: &BigInt, psi: &Covector) -> Result<Complex64> {
    Ok(root_of_unity(&(pairing(lam, psi)? * m)))
}

fn require_regular(rs: &RootSystem, lam: &Weight) -> Result<()> {
    rs.check_rank(lam)?;
    if !rs.is_dominant(lam) {
        return Err(Error::NotDominant { weight: lam.to_string() });
    }
    if !is_regular(rs, lam) {
        return Err(Error::NotRegular { weight: lam.to_string() });
    }
    Ok(())
}

struct Constants {
    dim: BigInt,
    kappa: BigRational,
    det: BigRational,
}

fn constants(rs: &RootSystem, lam: &Weight) -> Result<Constants> {
    let dim = weyl_dimension(rs, lam)?;
    let a = repweights::a_lambda(rs, lam)?;
    let det = a.det();
    let kappa = rs.kappa(&a.solve(rs.rho())?)?;
    if !det.is_positive() || !kappa.is_positive() {
        return Err(Error::Internal(format!(
            "det A_λ = {det}, κ(A_λ⁻¹ρ) = {kappa}; both must be positive for regular λ"
        )));
    }
    Ok(Constants { dim, kappa, det })
}

fn assemble(rs: &RootSystem, c: Constants, size: u64, quad: u64, n: u64, pi_sum: Complex64) -> AsymptoticEstimate {
    let d = rs.num_positive_roots() as f64;
    let half_dim = rs.dim_g() as f64 / 2.0;
    let nf = n as f64;
    let log_dim_power = nf * size as f64 * crate::linalg::ln_bigint_abs(&c.dim);
    let log_prefactor = d * (2.0 * PI).ln() - half_dim * (2.0 * PI * quad as f64 * nf).ln();
    let prefactor = log_prefactor.exp();
    let log_abs_value = log_dim_power + log_prefactor + ln_rat_abs(&c.kappa) - 0.5 * ln_rat_abs(&c.det)
        + pi_sum.re.abs().ln();
    let value = if pi_sum.re == 0.0 { 0.0 } else { pi_sum.re.signum() * log_abs_value.exp() };
    AsymptoticEstimate {
        value,
        log_abs_value,
        log_dim_power,
        kappa_term: c.kappa,
        det_a: c.det,
        pi_sum,
        prefactor,
        n,
    }
}

/// Leading term of `I_N(f, α) = ∫ ∏_j Tr ρ_λ(g^j)^{Nα_j} f(g) dg`.
pub fn leading_term_i(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    n: u64,
    f: &ClassFunction,
) -> Result<AsymptoticEstimate> {
    require_regular(rs, lam)?;
    f.validate(rs)?;
    let g = a.gcd_support();
    if g != 1 {
        return Err(Error::Hypothesis(format!(
            "the leading-term formula for I_N requires gcd{{j : α_j ≠ 0}} = 1, got {g}"
        )));
    }
    if n == 0 {
        return Err(Error::Config("N must be positive".into()));
    }
    let m = BigInt::from(n) * BigInt::from(a.weight());
    let pi = rs.fundamental_group();
    let mut pi_sum = Complex64::zero();
    for psi in &pi.elements {
        pi_sum += nu_character(lam, &m, psi)? * f.at_central(rs, psi)?;
    }
    Ok(assemble(rs, constants(rs, lam)?, a.size(), a.quad(), n, pi_sum))
}

/// Leading term of `K_N(f, α, β)`; requires `k_α = k_β`.
pub fn leading_term_k(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    n: u64,
    f: &ClassFunction,
) -> Result<AsymptoticEstimate> {
    require_regular(rs, lam)?;
    f.validate(rs)?;
    let g = joint_gcd(a, b);
    if g != 1 {
        return Err(Error::Hypothesis(format!(
            "the leading-term formula for K_N requires gcd{{j : α_j ≠ 0 or β_j ≠ 0}} = 1, got {g}"
        )));
    }
    if a.weight() != b.weight() {
        return Err(Error::Hypothesis(format!(
            "the leading-term formula for K_N requires k_α = k_β, got {} and {}",
            a.weight(),
            b.weight()
        )));
    }
    if n == 0 {
        return Err(Error::Config("N must be positive".into()));
    }
    let pi = rs.fundamental_group();
    let mut pi_sum = Complex64::zero();
    for psi in &pi.elements {
        pi_sum += f.at_central(rs, psi)?;
    }
    Ok(assemble(rs, constants(rs, lam)?, a.size() + b.size(), a.quad() + b.quad(), n, pi_sum))
}

/// `ln` of the leading term for `dim [V_λ^{⊗N}]^G`, `λ` in the root lattice.
pub fn biane_log_estimate(rs: &RootSystem, lam: &Weight, n: u64) -> Result<f64> {
    require_regular(rs, lam)?;
    if !rs.in_root_lattice(lam) {
        return Err(Error::Hypothesis(format!(
            "the invariant-dimension formula requires λ = {lam} in the root lattice"
        )));
    }
    let c = constants(rs, lam)?;
    let order = rs.fundamental_group().order as f64;
    let nf = n as f64;
    Ok(order.ln() + nf * crate::linalg::ln_bigint_abs(&c.dim) + ln_rat_abs(&c.kappa)
        - 0.5 * rs.rank() as f64 * (2.0 * PI).ln()
        - 0.5 * rs.dim_g() as f64 * nf.ln()
        - 0.5 * ln_rat_abs(&c.det))
}

/// `|Π(G)| (dim V_λ)^N κ(A⁻¹ρ) / ((2π)^{rk/2} N^{dim G/2} √det A_λ)`.
pub fn biane_dimension_estimate(rs: &RootSystem, lam: &Weight, n: u64) -> Result<f64> {
    biane_log_estimate(rs, lam, n).map(f64::exp)
}

fn check_hessian(rs: &RootSystem, h: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let n = rs.rank();
    if h.len() != n || h.iter().any(|r| r.len() != n) {
        return Err(Error::RankMismatch { expected: n, got: h.len() });
    }
    let m = DMatrix::from_fn(n, n, |i, j| h[i][j]);
    let asym = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| (m[(i, j)] - m[(j, i)]).abs())
        .fold(0.0, f64::max);
    let scale = m.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if asym > 1e-12 * scale.max(1.0) {
        return Err(Error::NotPositiveDefinite("matrix is not symmetric".into()));
    }
    if m.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite(format!("{h:?}")));
    }
    if !is_weyl_invariant(rs, h) {
        return Err(Error::Hypothesis(format!(
            "the Gaussian identity requires a Weyl-invariant H, got {h:?}"
        )));
    }
    Ok(m)
}

fn simple_coroot_f64(rs: &RootSystem, i: usize) -> Vec<f64> {
    rs.simple_coroots()[i].to_f64()
}

/// `s_i^T H s_i = H` for every simple reflection, to relative `1e-10`.
pub fn is_weyl_invariant(rs: &RootSystem, h: &[Vec<f64>]) -> bool {
    let n = rs.rank();
    let scale = h.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    (0..n).all(|i| {
        let root: Vec<f64> = rs.simple_roots()[i].coords().iter().map(|&x| x as f64).collect();
        let coroot = simple_coroot_f64(rs, i);
        // s = 1 − α∨ αᵀ acting on column vectors of t
        let s = |r: usize, c: usize| f64::from(u8::from(r == c)) - coroot[r] * root[c];
        (0..n).all(|a| {
            (0..n).all(|b| {
                let v: f64 = (0..n)
                    .flat_map(|r| (0..n).map(move |c| (r, c)))
                    .map(|(r, c)| s(r, a) * h[r][c] * s(c, b))
                    .sum();
                (v - h[a][b]).abs() <= 1e-10 * scale
            })
        })
    })
}

/// Weyl-invariant inner product on `t` in the current basis, scaled so that
/// coroots of long roots have unit length in every simple factor.
pub fn invariant_metric(rs: &RootSystem) -> Vec<Vec<f64>> {
    let n = rs.rank();
    let cartan = rs.cartan_matrix();
    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = count;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if cartan[i][j] != 0 && component[j] == usize::MAX {
                    component[j] = count;
                    stack.push(j);
                }
            }
        }
        count += 1;
    }
    let mut h = vec![vec![0.0; n]; n];
    for comp in 0..count {
        let mut hc = vec![vec![0.0; n]; n];
        for (root, exp) in rs.positive_roots().iter().zip(rs.root_expansions()) {
            let Some(first) = exp.iter().position(|&c| c != 0) else { continue };
            if component[first] != comp {
                continue;
            }
            let r: Vec<f64> = root.coords().iter().map(|&x| x as f64).collect();
            for a in 0..n {
                for b in 0..n {
                    hc[a][b] += r[a] * r[b];
                }
            }
        }
        let norm = (0..n)
            .filter(|&i| component[i] == comp)
            .map(|i| {
                let v = simple_coroot_f64(rs, i);
                (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| v[a] * hc[a][b] * v[b]).sum::<f64>()
            })
            .fold(f64::INFINITY, f64::min);
        for a in 0..n {
            for b in 0..n {
                h[a][b] += hc[a][b] / norm;
            }
        }
    }
    h
}

/// `(κ(H⁻¹ρ), det H)` for a symmetric positive definite `H: t → t*`.
fn gaussian_constants(rs: &RootSystem, h: &[Vec<f64>]) -> Result<(f64, f64)> {
    let m = check_hessian(rs, h)?;
    let chol = m.clone().cholesky().unwrap();
    let rho = DVector::from_iterator(rs.rank(), rs.rho().coords().iter().map(|&x| x as f64));
    let x = chol.solve(&rho);
    Ok((rs.kappa_f64(x.as_slice()), m.determinant()))
}

/// `∫_t e^{−⟨Hx,x⟩/2} |κ(x)|² dx = (2π)^{rk/2} |W| κ(H⁻¹ρ) / √det H`.
pub fn mehta_closed_form(rs: &RootSystem, h: &[Vec<f64>]) -> Result<f64> {
    let (kappa, det) = gaussian_constants(rs, h)?;
    Ok((2.0 * PI).powf(rs.rank() as f64 / 2.0) * rs.weyl_order() as f64 * kappa / det.sqrt())
}

/// Leading constant of `∫_T e^{NΦ} g |Δ|² dt` for a phase with
/// nondegenerate maximum at the identity:
/// `(2π/N)^{dim G/2} (2π)^d g(0) e^{NΦ(0)} |W| κ(H⁻¹ρ) / √det H`.
pub fn vanish_leading_constant(rs: &RootSystem, h: &[Vec<f64>], g0: f64, phi0: f64, n: u64) -> Result<f64> {
    let (kappa, det) = gaussian_constants(rs, h)?;
    let nf = n as f64;
    let d = rs.num_positive_roots() as f64;
    let log_mag = 0.5 * rs.dim_g() as f64 * (2.0 * PI / nf).ln() + d * (2.0 * PI).ln() + nf * phi0
        + (rs.weyl_order() as f64).ln()
        + (g0 * kappa).abs().ln()
        - 0.5 * det.ln();
    Ok((g0 * kappa).signum() * log_mag.exp())
}

/// `H = (2π)² l A_λ` as a float matrix.
pub fn phase_hessian(rs: &RootSystem, lam: &Weight, l: u64) -> Result<Vec<Vec<f64>>> {
    let a = repweights::a_lambda(rs, lam)?;
    let scale = (2.0 * PI).powi(2) * l as f64;
    Ok(a.to_f64().into_iter().map(|r| r.into_iter().map(|x| x * scale).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn ct(v: &[u64]) -> CycleType {
        CycleType::new(v.to_vec())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn constants_of_cycle_types() {
        assert_eq!(cycle_constants(&ct(&[1])), (1, 1, 1));
        assert_eq!(cycle_constants(&ct(&[1, 0, 2])), (3, 7, 19));
        assert_eq!(cycle_constants(&ct(&[0, 1])), (1, 2, 4));
    }

    #[test]
    fn nu_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        let pi = a1.fundamental_group();
        let lam = w(&[1]);
        assert_eq!(nu_character(&lam, &7.into(), &pi.elements[0]).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(nu_character(&lam, &3.into(), &pi.elements[1]).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(nu_character(&lam, &4.into(), &pi.elements[1]).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn theorem_i_su2_standard() {
        let a1 = RootSystem::parse("A1").unwrap();
        let one = ClassFunction::one(1);
        for n in [3u64, 7, 21] {
            let est = leading_term_i(&a1, &w(&[1]), &ct(&[1]), n, &one).unwrap();
            assert_eq!(est.value, 0.0);
        }
        for n in [2u64, 10, 40] {
            let est = leading_term_i(&a1, &w(&[1]), &ct(&[1]), n, &one).unwrap();
            let nf = n as f64;
            let expected = 4.0 * 2f64.powf(nf) / ((2.0 * PI).sqrt() * nf.powf(1.5));
            assert!(rel(est.value, expected) < 1e-12, "N={n}");
            assert!(rel(est.reconstruct(), est.value) < 1e-12);
            assert_eq!(est.kappa_term, BigRational::from_integer(2.into()));
            assert_eq!(est.pi_sum, Complex64::new(2.0, 0.0));
        }
        let err = leading_term_i(&a1, &w(&[1]), &ct(&[0, 1]), 4, &one).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn theorem_k_su2_standard() {
        let a1 = RootSystem::parse("A1").unwrap();
        let one = ClassFunction::one(1);
        for n in [1u64, 5, 30] {
            let est = leading_term_k(&a1, &w(&[1]), &ct(&[1]), &ct(&[1]), n, &one).unwrap();
            let nf = n as f64;
            let expected = 4f64.powf(nf) / (PI.sqrt() * nf.powf(1.5));
            assert!(rel(est.value, expected) < 1e-12);
        }
        let a2 = RootSystem::parse("A2").unwrap();
        let est = leading_term_k(&a2, &w(&[1, 1]), &ct(&[1]), &ct(&[1]), 5, &ClassFunction::one(2)).unwrap();
        assert!(est.value > 0.0);
        assert_eq!(est.pi_sum, Complex64::new(3.0, 0.0));
        let err = leading_term_k(&a1, &w(&[1]), &ct(&[2]), &ct(&[1]), 3, &one).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)));
    }

    #[test]
    fn hypotheses_are_enforced() {
        let a2 = RootSystem::parse("A2").unwrap();
        let one = ClassFunction::one(2);
        assert!(matches!(
            leading_term_i(&a2, &w(&[1, 0]), &ct(&[1]), 3, &one),
            Err(Error::NotRegular { .. })
        ));
        let a1 = RootSystem::parse("A1").unwrap();
        assert!(matches!(biane_dimension_estimate(&a1, &w(&[1]), 4), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn biane_su2_adjoint() {
        let a1 = RootSystem::parse("A1").unwrap();
        for n in [1u64, 9, 50] {
            let nf = n as f64;
            let expected =
                2.0 * 3f64.powf(nf) * 0.75 / ((2.0 * PI).sqrt() * nf.powf(1.5) * (8.0f64 / 3.0).sqrt());
            let got = biane_dimension_estimate(&a1, &w(&[2]), n).unwrap();
            assert!(rel(got, expected) < 1e-12);
            let via_i = leading_term_i(&a1, &w(&[2]), &ct(&[1]), n, &ClassFunction::one(1)).unwrap();
            assert!(rel(via_i.value, got) < 1e-12);
        }
    }

    #[test]
    fn vanish_constant_and_scaling() {
        let a1 = RootSystem::parse("A1").unwrap();
        let id = vec![vec![1.0]];
        let v = vanish_leading_constant(&a1, &id, 1.0, 0.0, 1).unwrap();
        assert!(rel(v, 4.0 * (2.0 * PI).powf(2.5)) < 1e-14);
        let c = 3.5;
        let scaled = vanish_leading_constant(&a1, &[vec![c]], 1.0, 0.0, 1).unwrap();
        assert!(rel(scaled, v * c.powf(-1.5)) < 1e-13);
        assert!(vanish_leading_constant(&a1, &[vec![-1.0]], 1.0, 0.0, 1).is_err());
    }

    #[test]
    fn theorem_i_is_vanish_constant_composed() {
        for (spec, lam, a, n) in [
            ("A1", vec![1], vec![1], 6u64),
            ("A1", vec![3], vec![1, 1], 5),
            ("A2", vec![1, 1], vec![1], 4),
            ("A2", vec![2, 1], vec![2, 1], 3),
        ] {
            let rs = RootSystem::parse(spec).unwrap();
            let lam = Weight(lam);
            let a = CycleType::new(a);
            let f = ClassFunction::one(rs.rank());
            let est = leading_term_i(&rs, &lam, &a, n, &f).unwrap();
            let h = phase_hessian(&rs, &lam, a.quad()).unwrap();
            let dim = weyl_dimension(&rs, &lam).unwrap().to_f64().unwrap();
            let phi0 = a.size() as f64 * dim.ln();
            let j = vanish_leading_constant(&rs, &h, 1.0, phi0, n).unwrap();
            let composed = est.pi_sum.re * j / rs.weyl_order() as f64;
            assert!(rel(composed, est.value) < 1e-12, "{spec}: {composed} vs {}", est.value);
        }
    }

    #[test]
    fn mehta_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        let m = mehta_closed_form(&a1, &[vec![1.0]]).unwrap();
        assert!(rel(m, 4.0 * (2.0 * PI).sqrt()) < 1e-14);
        let m4 = mehta_closed_form(&a1, &[vec![4.0]]).unwrap();
        assert!(rel(m4, m * 4f64.powf(-1.5)) < 1e-14);
        let a2 = RootSystem::parse("A2").unwrap();
        let id = invariant_metric(&a2);
        assert_eq!(id, vec![vec![1.0, -0.5], vec![-0.5, 1.0]]);
        assert!(mehta_closed_form(&a2, &id).unwrap() > 0.0);
        assert!(matches!(
            mehta_closed_form(&a2, &[vec![1.0, 0.0], vec![0.0, 1.0]]),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn invariant_metric_is_invariant() {
        for spec in ["A1", "B2", "G2", "A3", "C3", "A1xB2", "F4", "D4"] {
            let rs = RootSystem::parse(spec).unwrap();
            let h = invariant_metric(&rs);
            assert!(is_weyl_invariant(&rs, &h), "{spec}");
            let a = repweights::a_lambda(&rs, &Weight(vec![1; rs.rank()])).unwrap().to_f64();
            assert!(is_weyl_invariant(&rs, &a), "{spec}");
        }
        assert_eq!(invariant_metric(&RootSystem::parse("A1").unwrap()), vec![vec![1.0]]);
    }

    #[test]
    fn class_function_parsing_and_central_values() {
        let f = ClassFunction::parse("1:0.5;0:1").unwrap();
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(f.at_identity(&a1).unwrap(), 2.0);
        let pi = a1.fundamental_group();
        assert_eq!(f.at_central(&a1, &pi.elements[1]).unwrap(), Complex64::new(0.0, 0.0));
        assert!(ClassFunction::parse("1").is_err());
        assert!(ClassFunction::one(1).is_one());
        assert!(f.integer_terms().is_none());
    }
}
