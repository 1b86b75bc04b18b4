//! Exact evaluation of trace-moment integrals in the character ring.
//!
//! `∫ ∏_j Tr ρ(g^j)^{a_j} · conj(Tr ρ(g^j))^{b_j} dg` is the multiplicity of
//! the trivial representation in the virtual character
//! `∏_j ψ^j(χ_λ)^{a_j} · ψ^j(χ_λ*)^{b_j}`, where `ψ^j` is the Adams
//! operation. Multiplicities are extracted by Racah–Speiser reflection.

mod permtrace;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::repweights::{self, WeightSystem};
use crate::rootsys::{pairing, Covector, RootSystem, Weight};

pub use permtrace::{canonical_permutation, permutation_trace_bruteforce, power_trace_product};

/// Default cap on the support size of a convolution result.
pub const DEFAULT_SUPPORT_CAP: usize = 10_000_000;

/// Exponent vector of a cycle type `(1^{a_1} 2^{a_2} … r^{a_r})`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CycleType {
    exps: Vec<u64>,
}

impl CycleType {
    pub fn new(exps: Vec<u64>) -> Self {
        let mut exps = exps;
        while exps.last() == Some(&0) {
            exps.pop();
        }
        Self { exps }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Parses `"2"` (α₁ = 2) or `"0,1"` (α₂ = 1); the empty string is `()`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        if s.trim().is_empty() {
            return Ok(Self::empty());
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad cycle exponent {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn exps(&self) -> &[u64] {
        &self.exps
    }

    /// `α_j` for cycle length `j ≥ 1`.
    pub fn exp(&self, j: usize) -> u64 {
        self.exps.get(j - 1).copied().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    /// `|α| = Σ α_j`.
    pub fn size(&self) -> u64 {
        self.exps.iter().sum()
    }

    /// `k_α = Σ j·α_j`.
    pub fn weight(&self) -> u64 {
        self.exps.iter().enumerate().map(|(i, &a)| (i as u64 + 1) * a).sum()
    }

    /// `l_α = Σ j²·α_j`.
    pub fn quad(&self) -> u64 {
        self.exps.iter().enumerate().map(|(i, &a)| (i as u64 + 1).pow(2) * a).sum()
    }

    /// `gcd{j : α_j ≠ 0}`, zero for the empty type.
    pub fn gcd_support(&self) -> u64 {
        self.support().fold(0, |g, j| g.gcd(&j))
    }

    /// Cycle lengths that occur.
    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.exps.iter().enumerate().filter(|(_, &a)| a != 0).map(|(i, _)| i as u64 + 1)
    }

    /// `N·α`.
    pub fn scaled(&self, n: u64) -> CycleType {
        CycleType::new(self.exps.iter().map(|a| a * n).collect())
    }

    /// All cycle types of permutations of `k` letters.
    pub fn all_of_weight(k: u64) -> Vec<CycleType> {
        fn rec(k: u64, max_part: u64, exps: &mut Vec<u64>, out: &mut Vec<CycleType>) {
            if k == 0 {
                out.push(CycleType::new(exps.clone()));
                return;
            }
            for part in (1..=max_part.min(k)).rev() {
                exps[part as usize - 1] += 1;
                rec(k - part, part, exps, out);
                exps[part as usize - 1] -= 1;
            }
        }
        let mut out = Vec::new();
        rec(k, k, &mut vec![0; k as usize], &mut out);
        out
    }
}

impl fmt::Display for CycleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exps.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `gcd` of the joint support of two cycle types.
pub fn joint_gcd(a: &CycleType, b: &CycleType) -> u64 {
    a.support().chain(b.support()).fold(0, |g, j| g.gcd(&j))
}

/// Adams operation `ψ^j`: every weight dilated by `j`.
pub fn adams(ws: &WeightSystem, j: u64) -> WeightSystem {
    let j = j as i64;
    WeightSystem::from_entries(ws.rank(), ws.iter().map(|(w, m)| (w.scaled(j), m.clone())))
        .with_virtual(ws.is_virtual() || j > 1)
}

/// Contragredient character: `μ ↦ −μ`.
pub fn dual(ws: &WeightSystem) -> WeightSystem {
    WeightSystem::from_entries(ws.rank(), ws.iter().map(|(w, m)| (-w, m.clone())))
        .with_virtual(ws.is_virtual())
}

/// Convolution of weight multisets (character product).
pub fn product(a: &WeightSystem, b: &WeightSystem) -> WeightSystem {
    product_capped(a, b, usize::MAX).expect("uncapped convolution cannot fail")
}

pub fn product_capped(a: &WeightSystem, b: &WeightSystem, cap: usize) -> Result<WeightSystem> {
    if a.rank() != b.rank() {
        return Err(Error::RankMismatch { expected: a.rank(), got: b.rank() });
    }
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut out: HashMap<Weight, BigInt> = HashMap::with_capacity(large.len() + small.len());
    for (w1, m1) in small.iter() {
        for (w2, m2) in large.iter() {
            *out.entry(w1 + w2).or_default() += m1 * m2;
        }
        if out.len() > cap {
            return Err(Error::SupportCap { size: out.len(), cap });
        }
    }
    out.retain(|_, m| !m.is_zero());
    let is_virtual = a.is_virtual() || b.is_virtual();
    Ok(WeightSystem::from_entries(a.rank(), out).with_virtual(is_virtual))
}

/// Product of several characters, smallest support first.
pub fn product_all(mut factors: Vec<WeightSystem>, rank: usize, cap: usize) -> Result<WeightSystem> {
    factors.sort_by_key(WeightSystem::len);
    factors
        .iter()
        .try_fold(WeightSystem::trivial(rank), |acc, f| product_capped(&acc, f, cap))
}

/// Irreducible decomposition by Racah–Speiser reflection: each weight `μ`
/// contributes `sign(w)·m(μ)` to `w(μ+ρ) − ρ` when `w(μ+ρ)` is regular
/// dominant. Linear, so virtual characters are handled directly.
pub fn racah_speiser(rs: &RootSystem, ws: &WeightSystem) -> BTreeMap<Weight, BigInt> {
    let rho = rs.rho();
    let mut out: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for (mu, m) in ws.iter() {
        let (dom, sign) = rs.to_dominant(&(mu + rho));
        if !rs.is_strictly_dominant(&dom) {
            continue;
        }
        let entry = out.entry(&dom - rho).or_default();
        if sign > 0 {
            *entry += m;
        } else {
            *entry -= m;
        }
    }
    out.retain(|_, m| !m.is_zero());
    out
}

/// Multiplicity of the trivial representation.
pub fn trivial_multiplicity(rs: &RootSystem, ws: &WeightSystem) -> BigInt {
    let rho = rs.rho();
    ws.iter()
        .filter_map(|(mu, m)| {
            let (dom, sign) = rs.to_dominant(&(mu + rho));
            (&dom == rho).then(|| if sign > 0 { m.clone() } else { -m })
        })
        .sum()
}

/// Decomposition of a genuine character by repeatedly removing the
/// irreducible whose highest weight maximizes the height functional.
pub fn peel_decompose(rs: &RootSystem, ws: &WeightSystem) -> Result<BTreeMap<Weight, BigInt>> {
    let coweights = rs.coweight_basis();
    let height_covector = Covector(
        (0..rs.rank())
            .map(|i| coweights.iter().fold(BigRational::zero(), |acc, c| acc + &c.0[i]))
            .collect(),
    );
    let height = |w: &Weight| pairing(w, &height_covector).expect("rank matches");

    let mut rest = ws.clone();
    let mut out = BTreeMap::new();
    while !rest.is_empty() {
        let (top, m) = rest
            .iter()
            .max_by(|(a, _), (b, _)| height(a).cmp(&height(b)).then_with(|| a.cmp(b)))
            .map(|(w, m)| (w.clone(), m.clone()))
            .unwrap();
        if !rs.is_dominant(&top) || !m.is_positive() {
            return Err(Error::Config(format!(
                "character is not genuine: top weight {top} has multiplicity {m}"
            )));
        }
        let irrep = repweights::weight_system(rs, &top)?;
        for (w, k) in irrep.iter() {
            rest.add(w.clone(), -(k * &m));
        }
        out.insert(top, m);
    }
    Ok(out)
}

/// The virtual character `∏_j ψ^j(χ_λ)^{a_j} ψ^j(χ_λ*)^{b_j}`.
pub fn moment_character(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    cap: usize,
) -> Result<WeightSystem> {
    let ws = repweights::weight_system(rs, lam)?;
    let ws_dual = dual(&ws);
    let mut factors = Vec::new();
    for (base, cycle) in [(&*ws, a), (&ws_dual, b)] {
        for (i, &count) in cycle.exps().iter().enumerate() {
            if count == 0 {
                continue;
            }
            let dilated = adams(base, i as u64 + 1);
            factors.extend(std::iter::repeat_n(dilated, count as usize));
        }
    }
    product_all(factors, rs.rank(), cap)
}

/// Exact value of `∫_G ∏_j Tr ρ_λ(g^j)^{a_j} conj(Tr ρ_λ(g^j))^{b_j} dg`.
pub fn exact_moment(rs: &RootSystem, lam: &Weight, a: &CycleType, b: &CycleType) -> Result<BigInt> {
    exact_moment_capped(rs, lam, a, b, DEFAULT_SUPPORT_CAP)
}

pub fn exact_moment_capped(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    cap: usize,
) -> Result<BigInt> {
    let ch = moment_character(rs, lam, a, b, cap)?;
    Ok(trivial_multiplicity(rs, &ch))
}

/// Same integral against a class function `χ_ν`: the multiplicity of `V_ν*`
/// in the moment character.
pub fn exact_moment_against(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    nu: &Weight,
) -> Result<BigInt> {
    let ch = moment_character(rs, lam, a, b, DEFAULT_SUPPORT_CAP)?;
    let f = repweights::weight_system(rs, nu)?;
    Ok(trivial_multiplicity(rs, &product(&ch, &f)))
}

/// One Brauer–Klimyk step: `(Σ c_ν V_ν) ⊗ V_λ` decomposed into irreducibles.
pub fn tensor_with(
    rs: &RootSystem,
    state: &BTreeMap<Weight, BigInt>,
    ws: &WeightSystem,
) -> BTreeMap<Weight, BigInt> {
    let rho = rs.rho();
    let mut out: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for (nu, c) in state {
        let shifted = nu + rho;
        for (mu, m) in ws.iter() {
            let (dom, sign) = rs.to_dominant(&(&shifted + mu));
            if !rs.is_strictly_dominant(&dom) {
                continue;
            }
            let term = c * m;
            let entry = out.entry(&dom - rho).or_default();
            if sign > 0 {
                *entry += term;
            } else {
                *entry -= term;
            }
        }
    }
    out.retain(|_, m| !m.is_zero());
    out
}

/// `dim [V_λ^{⊗N}]^G` by iterated dominant-chamber tensor decomposition.
pub fn invariant_dimension(rs: &RootSystem, lam: &Weight, n: u64) -> Result<BigInt> {
    let ws = repweights::weight_system(rs, lam)?;
    let mut state = BTreeMap::from([(Weight::zero(rs.rank()), BigInt::one())]);
    for _ in 0..n {
        state = tensor_with(rs, &state, &ws);
    }
    Ok(state.remove(&Weight::zero(rs.rank())).unwrap_or_default())
}
