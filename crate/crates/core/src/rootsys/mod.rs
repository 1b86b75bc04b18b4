//! Root data, lattices and the finite group `Λ/I` for simply connected
//! compact semisimple groups.
//!
//! Coordinates are always taken relative to a fixed ℤ-basis of the integral
//! lattice `I` (covectors) and its dual basis (weights). For the standard
//! construction that basis is the simple coroots, so weight coordinates are
//! fundamental-weight coordinates. [`RootSystem::rebased`] switches to any
//! other ℤ-basis of `I`; every routine in the crate goes through pairings
//! with stored roots and coroots, so nothing assumes the standard basis.

mod snf;
mod types;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, rat, RatMatrix};

pub use snf::{smith_normal_form, SmithForm};
pub use types::{parse_group, SimpleFactor, SimpleType};

/// An integral weight: coordinates in the basis of `t*` dual to the I-basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Weight(pub Vec<i64>);

impl Weight {
    pub fn zero(rank: usize) -> Self {
        Weight(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn scaled(&self, k: i64) -> Weight {
        Weight(self.0.iter().map(|x| x * k).collect())
    }

    pub fn to_rational(&self) -> Vec<BigRational> {
        self.0.iter().map(|&x| rat(x)).collect()
    }

    /// Parses comma-separated coordinates such as `"1,1"`.
    pub fn parse(s: &str) -> Result<Weight> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("bad weight coordinate {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(i64::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

/// An element of `t`, coordinates in the fixed ℤ-basis of `I`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Covector(pub Vec<BigRational>);

impl Covector {
    pub fn from_ints(v: &[i64]) -> Self {
        Covector(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(linalg::rat_to_f64).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    /// Representative with every coordinate in `[0, 1)`.
    pub fn reduced_mod_lattice(&self) -> Covector {
        Covector(self.0.iter().map(|x| x - x.floor()).collect())
    }
}

impl fmt::Display for Covector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Canonical pairing `t* × t → ℚ`.
pub fn pairing(mu: &Weight, x: &Covector) -> Result<BigRational> {
    if mu.rank() != x.rank() {
        return Err(Error::RankMismatch { expected: mu.rank(), got: x.rank() });
    }
    Ok(mu
        .0
        .iter()
        .zip(&x.0)
        .fold(BigRational::zero(), |acc, (&m, c)| acc + c * BigInt::from(m)))
}

fn int_dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `Π(G) = Λ/I` with explicit coset representatives `ψ_h`.
#[derive(Debug, Clone)]
pub struct FundamentalGroup {
    pub order: usize,
    /// Elementary divisors of `Λ/I` greater than one.
    pub invariants: Vec<i64>,
    /// Representatives reduced to `[0,1)^rank`; index 0 is the identity.
    pub elements: Vec<Covector>,
}

impl FundamentalGroup {
    pub fn identity_index(&self) -> usize {
        0
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    factors: Vec<SimpleFactor>,
    rank: usize,
    dim_g: usize,
    /// `cartan[i][j] = ⟨α_i, α_j∨⟩`; independent of the lattice basis.
    cartan: Vec<Vec<i64>>,
    simple_roots: Vec<Weight>,
    simple_coroots: Vec<Vec<i64>>,
    positive_roots: Vec<Weight>,
    positive_coroots: Vec<Vec<i64>>,
    /// Simple-root coordinates of each positive root.
    root_expansions: Vec<Vec<i64>>,
    rho: Weight,
    fundamental_weights: Vec<Weight>,
    /// Integer multiple of a W-invariant form on `t*` in weight coordinates.
    form: Vec<Vec<i64>>,
    /// Inverse of the matrix whose rows are the simple roots; its columns
    /// are the fundamental coweights, a ℤ-basis of `Λ`.
    root_matrix_inverse: RatMatrix,
    weyl_order: u128,
}

impl RootSystem {
    /// Direct sum of the given simple factors in the coroot basis.
    pub fn build(factors: &[SimpleFactor]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Config("a semisimple group needs at least one simple factor".into()));
        }
        let rank: usize = factors.iter().map(|f| f.rank).sum();
        let mut gram = vec![vec![rat(0); rank]; rank];
        let mut offset = 0;
        for f in factors {
            let g = f.gram();
            for i in 0..f.rank {
                for j in 0..f.rank {
                    gram[offset + i][offset + j] = g[i][j].clone();
                }
            }
            offset += f.rank;
        }
        let cartan: Vec<Vec<i64>> = (0..rank)
            .map(|i| {
                (0..rank)
                    .map(|j| {
                        let v = rat(2) * &gram[i][j] / &gram[j][j];
                        v.to_integer().to_i64().expect("Cartan entries are small integers")
                    })
                    .collect()
            })
            .collect();

        let identity: Vec<Vec<i64>> =
            (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        let simple_roots: Vec<Weight> = cartan.iter().cloned().map(Weight).collect();
        let weyl_order = factors.iter().map(SimpleFactor::weyl_order).product();

        let root_expansions = positive_root_expansions(&cartan);
        let positive_roots: Vec<Weight> = root_expansions
            .iter()
            .map(|c| Weight((0..rank).map(|j| (0..rank).map(|i| c[i] * cartan[i][j]).sum()).collect()))
            .collect();
        let positive_coroots: Vec<Vec<i64>> = root_expansions
            .iter()
            .map(|c| {
                let norm = (0..rank).fold(rat(0), |acc, i| {
                    (0..rank).fold(acc, |acc, j| acc + &gram[i][j] * BigInt::from(c[i] * c[j]))
                });
                (0..rank)
                    .map(|i| {
                        let v = &gram[i][i] * BigInt::from(c[i]) / &norm;
                        assert!(v.is_integer(), "coroot coordinates are integral");
                        v.to_integer().to_i64().unwrap()
                    })
                    .collect()
            })
            .collect();

        let dim_g = 2 * positive_roots.len() + rank;
        let rho = Weight(vec![1; rank]);
        let mut rs = RootSystem {
            factors: factors.to_vec(),
            rank,
            dim_g,
            cartan,
            simple_roots,
            simple_coroots: identity.clone(),
            positive_roots,
            positive_coroots,
            root_expansions,
            rho,
            fundamental_weights: identity.into_iter().map(Weight).collect(),
            form: Vec::new(),
            root_matrix_inverse: Vec::new(),
            weyl_order,
        };
        rs.finish(&gram)?;
        Ok(rs)
    }

    pub fn parse(spec: &str) -> Result<Self> {
        Self::build(&parse_group(spec)?)
    }

    /// Derives the basis-dependent caches from the simple roots.
    fn finish(&mut self, gram: &RatMatrix) -> Result<()> {
        let r: RatMatrix = self.simple_roots.iter().map(Weight::to_rational).collect();
        let r_inv = linalg::inverse(&r)
            .ok_or_else(|| Error::Internal("simple roots are linearly dependent".into()))?;
        // (μ,ν) = μᵀ Q ν with Q = R⁻¹ B R⁻ᵀ
        let q = linalg::mat_mul(&linalg::mat_mul(&r_inv, gram), &linalg::transpose(&r_inv));
        let lcm = q
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        self.form = q
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| (x * &lcm).to_integer().to_i64().expect("form entries fit in i64"))
                    .collect()
            })
            .collect();
        self.root_matrix_inverse = r_inv;
        Ok(())
    }

    fn gram(&self) -> RatMatrix {
        let r: RatMatrix = self.simple_roots.iter().map(Weight::to_rational).collect();
        let q: RatMatrix = linalg::rat_matrix(&self.form);
        linalg::mat_mul(&linalg::mat_mul(&r, &q), &linalg::transpose(&r))
    }

    /// Same root system expressed in another ℤ-basis of `I`.
    ///
    /// Column `j` of `basis` holds the coordinates of the new `j`-th basis
    /// vector in the current basis; the matrix must be unimodular.
    pub fn rebased(&self, basis: &[Vec<i64>]) -> Result<RootSystem> {
        if basis.len() != self.rank || basis.iter().any(|r| r.len() != self.rank) {
            return Err(Error::RankMismatch { expected: self.rank, got: basis.len() });
        }
        let inv = linalg::unimodular_inverse(basis)
            .ok_or_else(|| Error::Config("basis change is not unimodular".into()))?;
        let n = self.rank;
        let weight_map = |w: &Weight| Weight((0..n).map(|j| (0..n).map(|i| basis[i][j] * w.0[i]).sum()).collect());
        let covector_map = |x: &Vec<i64>| (0..n).map(|i| int_dot(&inv[i], x)).collect::<Vec<i64>>();
        let gram = self.gram();
        let mut rs = RootSystem {
            factors: self.factors.clone(),
            rank: n,
            dim_g: self.dim_g,
            cartan: self.cartan.clone(),
            simple_roots: self.simple_roots.iter().map(weight_map).collect(),
            simple_coroots: self.simple_coroots.iter().map(covector_map).collect(),
            positive_roots: self.positive_roots.iter().map(weight_map).collect(),
            positive_coroots: self.positive_coroots.iter().map(covector_map).collect(),
            root_expansions: self.root_expansions.clone(),
            rho: weight_map(&self.rho),
            fundamental_weights: self.fundamental_weights.iter().map(weight_map).collect(),
            form: Vec::new(),
            root_matrix_inverse: Vec::new(),
            weyl_order: self.weyl_order,
        };
        rs.finish(&gram)?;
        Ok(rs)
    }

    /// Maps a covector written in the current basis into a rebased system.
    pub fn covector_into_basis(x: &Covector, basis: &[Vec<i64>]) -> Result<Covector> {
        let inv = linalg::unimodular_inverse(basis)
            .ok_or_else(|| Error::Config("basis change is not unimodular".into()))?;
        Ok(Covector(linalg::mat_vec(&linalg::rat_matrix(&inv), &x.0)))
    }

    pub fn factors(&self) -> &[SimpleFactor] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim_g(&self) -> usize {
        self.dim_g
    }

    /// Number of positive roots.
    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> Vec<Covector> {
        self.simple_coroots.iter().map(|c| Covector::from_ints(c)).collect()
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn positive_coroots(&self) -> Vec<Covector> {
        self.positive_coroots.iter().map(|c| Covector::from_ints(c)).collect()
    }

    pub(crate) fn positive_coroot_coords(&self) -> &[Vec<i64>] {
        &self.positive_coroots
    }

    /// Simple-root coordinates of the positive roots, in the order of
    /// [`positive_roots`](Self::positive_roots).
    pub fn root_expansions(&self) -> &[Vec<i64>] {
        &self.root_expansions
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn weyl_order(&self) -> u128 {
        self.weyl_order
    }

    /// Integer multiple of a W-invariant inner product on weights.
    pub fn form(&self, a: &Weight, b: &Weight) -> i64 {
        a.0.iter()
            .zip(&self.form)
            .map(|(x, row)| x * int_dot(row, &b.0))
            .sum()
    }

    pub fn check_rank(&self, mu: &Weight) -> Result<()> {
        if mu.rank() == self.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch { expected: self.rank, got: mu.rank() })
        }
    }

    /// `Σ c_i ω_i` in the current coordinates.
    pub fn weight_from_fundamental(&self, coords: &[i64]) -> Result<Weight> {
        if coords.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: coords.len() });
        }
        let mut out = Weight::zero(self.rank);
        for (c, w) in coords.iter().zip(&self.fundamental_weights) {
            for (o, x) in out.0.iter_mut().zip(&w.0) {
                *o += c * x;
            }
        }
        Ok(out)
    }

    /// `⟨μ, α_i∨⟩` for every simple coroot.
    pub fn fundamental_coords(&self, mu: &Weight) -> Vec<i64> {
        self.simple_coroots.iter().map(|c| int_dot(&mu.0, c)).collect()
    }

    pub fn is_dominant(&self, mu: &Weight) -> bool {
        self.simple_coroots.iter().all(|c| int_dot(&mu.0, c) >= 0)
    }

    /// Interior of the dominant chamber.
    pub fn is_strictly_dominant(&self, mu: &Weight) -> bool {
        self.simple_coroots.iter().all(|c| int_dot(&mu.0, c) > 0)
    }

    pub fn reflect(&self, i: usize, mu: &Weight) -> Weight {
        let k = int_dot(&mu.0, &self.simple_coroots[i]);
        Weight(mu.0.iter().zip(&self.simple_roots[i].0).map(|(m, a)| m - k * a).collect())
    }

    /// `s_i(x) = x − ⟨α_i, x⟩ α_i∨`.
    pub fn reflect_covector(&self, i: usize, x: &Covector) -> Covector {
        let k = pairing(&self.simple_roots[i], x).expect("rank checked by caller");
        Covector(
            x.0.iter()
                .zip(&self.simple_coroots[i])
                .map(|(c, &a)| c - &k * BigInt::from(a))
                .collect(),
        )
    }

    /// Dominant representative of the W-orbit of `mu` and the sign of a
    /// Weyl element carrying `mu` onto it.
    pub fn to_dominant(&self, mu: &Weight) -> (Weight, i32) {
        let mut w = mu.clone();
        let mut sign = 1;
        while let Some(i) = self.simple_coroots.iter().position(|c| int_dot(&w.0, c) < 0) {
            w = self.reflect(i, &w);
            sign = -sign;
        }
        (w, sign)
    }

    /// Full W-orbit by traversal under simple reflections.
    pub fn weyl_orbit(&self, mu: &Weight) -> BTreeSet<Weight> {
        let mut seen: HashSet<Weight> = HashSet::new();
        let mut queue = VecDeque::from([mu.clone()]);
        seen.insert(mu.clone());
        while let Some(w) = queue.pop_front() {
            for i in 0..self.rank {
                let r = self.reflect(i, &w);
                if seen.insert(r.clone()) {
                    queue.push_back(r);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// `κ(x) = ∏_{α∈Φ₊} ⟨α, x⟩`.
    pub fn kappa(&self, x: &Covector) -> Result<BigRational> {
        self.positive_roots
            .iter()
            .try_fold(BigRational::one(), |acc, a| Ok(acc * pairing(a, x)?))
    }

    pub fn kappa_f64(&self, x: &[f64]) -> f64 {
        self.positive_roots
            .iter()
            .map(|a| a.0.iter().zip(x).map(|(&m, y)| m as f64 * y).sum::<f64>())
            .product()
    }

    /// Simple-root coordinates of a weight (rational in general).
    pub fn root_coordinates(&self, mu: &Weight) -> Vec<BigRational> {
        let v = mu.to_rational();
        // μ = Σ c_i α_i, i.e. μᵀ = cᵀ R
        (0..self.rank)
            .map(|j| {
                (0..self.rank).fold(BigRational::zero(), |acc, i| acc + &v[i] * &self.root_matrix_inverse[i][j])
            })
            .collect()
    }

    /// Membership in the root lattice `Λ*`.
    pub fn in_root_lattice(&self, mu: &Weight) -> bool {
        self.root_coordinates(mu).iter().all(BigRational::is_integer)
    }

    /// Order of `mu` in `I*/Λ*`: the least `m ≥ 1` with `m·mu ∈ Λ*`.
    pub fn root_lattice_order(&self, mu: &Weight) -> u64 {
        self.root_coordinates(mu)
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
            .to_u64()
            .unwrap_or(u64::MAX)
    }

    /// Fundamental coweights as covectors: a ℤ-basis of `Λ`.
    pub fn coweight_basis(&self) -> Vec<Covector> {
        (0..self.rank)
            .map(|j| Covector(self.root_matrix_inverse.iter().map(|row| row[j].clone()).collect()))
            .collect()
    }

    /// `Λ/I` through the Smith normal form of the simple-root matrix.
    pub fn fundamental_group(&self) -> FundamentalGroup {
        let r: Vec<Vec<i64>> = self.simple_roots.iter().map(|w| w.0.clone()).collect();
        let snf = smith_normal_form(&r);
        let left_inv = linalg::unimodular_inverse(&snf.left).expect("SNF transform is unimodular");
        let divisors = snf.invariants.clone();
        let order: usize = divisors.iter().map(|&d| d as usize).product();

        let mut elements = Vec::with_capacity(order);
        let mut z = vec![0i64; self.rank];
        loop {
            // y = U⁻¹ z represents a class of ℤ^r / Rℤ^r; x = R⁻¹ y ∈ Λ
            let y: Vec<BigRational> = left_inv.iter().map(|row| rat(int_dot(row, &z))).collect();
            let x = Covector(linalg::mat_vec(&self.root_matrix_inverse, &y));
            elements.push(x.reduced_mod_lattice());
            let mut k = 0;
            loop {
                if k == self.rank {
                    let invariants = divisors.into_iter().filter(|&d| d > 1).collect();
                    return FundamentalGroup { order, invariants, elements };
                }
                z[k] += 1;
                if z[k] < divisors[k] {
                    break;
                }
                z[k] = 0;
                k += 1;
            }
        }
    }
}

/// Positive roots in simple-root coordinates, ordered by height then
/// lexicographically.
fn positive_root_expansions(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut found: BTreeSet<(i64, Vec<i64>)> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        found.insert((1, e.clone()));
        queue.push_back(e);
    }
    while let Some(c) = queue.pop_front() {
        for i in 0..n {
            // ⟨β, α_i∨⟩ = Σ_j c_j ⟨α_j, α_i∨⟩
            let p: i64 = (0..n).map(|j| c[j] * cartan[j][i]).sum();
            if p >= 0 {
                continue;
            }
            let mut next = c.clone();
            next[i] -= p;
            let h = next.iter().sum();
            if found.insert((h, next.clone())) {
                queue.push_back(next);
            }
        }
    }
    found.into_iter().map(|(_, c)| c).collect()
}
