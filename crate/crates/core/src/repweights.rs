//! Weight systems of irreducible representations: Freudenthal's recursion,
//! Weyl's dimension formula and the covariance form `A_λ`.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{self, RatMatrix};
use crate::rootsys::{Covector, RootSystem, Weight};

/// A finite multiset of weights with signed multiplicities: a (possibly
/// virtual) character of the maximal torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightSystem {
    rank: usize,
    entries: HashMap<Weight, BigInt>,
    is_virtual: bool,
}

impl WeightSystem {
    pub fn empty(rank: usize) -> Self {
        Self { rank, entries: HashMap::new(), is_virtual: false }
    }

    /// The trivial character `{0: 1}`.
    pub fn trivial(rank: usize) -> Self {
        let mut ws = Self::empty(rank);
        ws.entries.insert(Weight::zero(rank), BigInt::one());
        ws
    }

    pub fn from_entries<I>(rank: usize, entries: I) -> Self
    where
        I: IntoIterator<Item = (Weight, BigInt)>,
    {
        let mut ws = Self::empty(rank);
        for (w, m) in entries {
            ws.add(w, m);
        }
        ws.is_virtual = ws.entries.values().any(Signed::is_negative);
        ws
    }

    pub(crate) fn with_virtual(mut self, is_virtual: bool) -> Self {
        self.is_virtual = is_virtual;
        self
    }

    /// Adds `m` to the multiplicity of `w`, dropping the entry at zero.
    pub fn add(&mut self, w: Weight, m: BigInt) {
        if m.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.entries.entry(w) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += m;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(m);
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_virtual(&self) -> bool {
        self.is_virtual
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn multiplicity(&self, w: &Weight) -> BigInt {
        self.entries.get(w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &BigInt)> {
        self.entries.iter()
    }

    /// Entries in ascending weight order.
    pub fn sorted(&self) -> Vec<(Weight, BigInt)> {
        let mut v: Vec<_> = self.entries.iter().map(|(w, m)| (w.clone(), m.clone())).collect();
        v.sort();
        v
    }

    /// `Σ_μ m(μ)`, the value of the character at the identity.
    pub fn total(&self) -> BigInt {
        self.entries.values().sum()
    }

    /// `Σ_μ m(μ)·μ`.
    pub fn weighted_sum(&self) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rank];
        for (w, m) in &self.entries {
            for (o, &c) in out.iter_mut().zip(w.coords()) {
                *o += m * c;
            }
        }
        out
    }

    /// Largest `|μ_i|` over the support, per coordinate axis.
    pub fn max_abs_coords(&self) -> Vec<i64> {
        let mut out = vec![0; self.rank];
        for w in self.entries.keys() {
            for (o, c) in out.iter_mut().zip(w.coords()) {
                *o = (*o).max(c.abs());
            }
        }
        out
    }
}

fn check_dominant(rs: &RootSystem, lam: &Weight) -> Result<()> {
    rs.check_rank(lam)?;
    if rs.is_dominant(lam) {
        Ok(())
    } else {
        Err(Error::NotDominant { weight: lam.to_string() })
    }
}

/// Weyl's dimension formula `∏_{α>0} ⟨λ+ρ, α∨⟩ / ⟨ρ, α∨⟩`.
pub fn weyl_dimension(rs: &RootSystem, lam: &Weight) -> Result<BigInt> {
    check_dominant(rs, lam)?;
    let shifted = lam + rs.rho();
    let pair = |w: &Weight, c: &[i64]| -> i64 { w.coords().iter().zip(c).map(|(a, b)| a * b).sum() };
    let mut value = BigRational::one();
    for c in rs.positive_coroot_coords() {
        value *= BigRational::new(pair(&shifted, c).into(), pair(rs.rho(), c).into());
    }
    debug_assert!(value.is_integer());
    Ok(value.to_integer())
}

/// Interior of the Weyl chamber: every `⟨λ, α_i∨⟩ ≥ 1`.
pub fn is_regular(rs: &RootSystem, lam: &Weight) -> bool {
    rs.is_strictly_dominant(lam)
}

/// Dominant weights of `V_λ` with their multiplicities (Freudenthal).
///
/// Dominant weights are reached from `λ` by subtracting positive roots
/// while staying dominant, and are processed by increasing depth below `λ`
/// so every multiplicity on the right-hand side is already known.
pub fn dominant_multiplicities(rs: &RootSystem, lam: &Weight) -> Result<BTreeMap<Weight, i64>> {
    check_dominant(rs, lam)?;
    let heights: Vec<i64> = rs.root_expansions().iter().map(|c| c.iter().sum()).collect();

    let mut depth: HashMap<Weight, i64> = HashMap::new();
    depth.insert(lam.clone(), 0);
    let mut queue = VecDeque::from([lam.clone()]);
    while let Some(mu) = queue.pop_front() {
        let d = depth[&mu];
        for (alpha, h) in rs.positive_roots().iter().zip(&heights) {
            let nu = &mu - alpha;
            if rs.is_dominant(&nu) && !depth.contains_key(&nu) {
                depth.insert(nu.clone(), d + h);
                queue.push_back(nu);
            }
        }
    }
    let mut order: Vec<(i64, Weight)> = depth.iter().map(|(w, &d)| (d, w.clone())).collect();
    order.sort();

    let rho = rs.rho();
    let shifted = lam + rho;
    let top = rs.form(&shifted, &shifted) as i128;
    let mut mult: HashMap<Weight, i128> = HashMap::new();
    mult.insert(lam.clone(), 1);
    for (_, mu) in order.iter().skip(1) {
        let mut sum: i128 = 0;
        for alpha in rs.positive_roots() {
            let mut nu = mu + alpha;
            loop {
                let (dom, _) = rs.to_dominant(&nu);
                let Some(&m) = mult.get(&dom) else {
                    break;
                };
                sum += m * rs.form(&nu, alpha) as i128;
                nu = &nu + alpha;
            }
        }
        let mr = mu + rho;
        let denom = top - rs.form(&mr, &mr) as i128;
        if denom <= 0 || (2 * sum) % denom != 0 {
            return Err(Error::Internal(format!(
                "Freudenthal recursion produced a non-integral multiplicity at {mu}"
            )));
        }
        mult.insert(mu.clone(), 2 * sum / denom);
    }
    mult.into_iter()
        .map(|(w, m)| {
            i64::try_from(m)
                .map(|m| (w, m))
                .map_err(|_| Error::Internal("multiplicity overflow".into()))
        })
        .collect()
}

type CacheKey = (Vec<Weight>, Weight);

fn cache() -> &'static RwLock<HashMap<CacheKey, Arc<WeightSystem>>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, Arc<WeightSystem>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn populate_lock() -> &'static Mutex<()> {
    static LOCK: OnceLock<Mutex<()>> = OnceLock::new();
    LOCK.get_or_init(Default::default)
}

/// Complete weight system of `V_λ`, memoized process-wide.
pub fn weight_system(rs: &RootSystem, lam: &Weight) -> Result<Arc<WeightSystem>> {
    let key = (rs.simple_roots().to_vec(), lam.clone());
    if let Some(ws) = cache().read().unwrap().get(&key) {
        return Ok(ws.clone());
    }
    let _guard = populate_lock().lock().unwrap();
    if let Some(ws) = cache().read().unwrap().get(&key) {
        return Ok(ws.clone());
    }
    let ws = Arc::new(compute_weight_system(rs, lam)?);
    cache().write().unwrap().insert(key, ws.clone());
    Ok(ws)
}

fn compute_weight_system(rs: &RootSystem, lam: &Weight) -> Result<WeightSystem> {
    let dominant = dominant_multiplicities(rs, lam)?;
    let mut ws = WeightSystem::empty(rs.rank());
    for (mu, m) in dominant {
        for w in rs.weyl_orbit(&mu) {
            ws.add(w, BigInt::from(m));
        }
    }
    Ok(ws)
}

/// `A_λ = (1/dim V_λ) Σ m(μ) μ⊗μ` as a map `t → t*` in the dual bases.
#[derive(Debug, Clone, PartialEq)]
pub struct ALambda {
    pub matrix: RatMatrix,
}

impl ALambda {
    pub fn det(&self) -> BigRational {
        linalg::det(&self.matrix)
    }

    /// `A⁻¹ μ` as an element of `t`.
    pub fn solve(&self, mu: &Weight) -> Result<Covector> {
        linalg::solve(&self.matrix, &mu.to_rational())
            .map(Covector)
            .ok_or_else(|| Error::NotPositiveDefinite("A_λ is singular".into()))
    }

    pub fn is_positive_definite(&self) -> bool {
        linalg::is_positive_definite(&self.matrix)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        self.matrix.iter().map(|r| r.iter().map(linalg::rat_to_f64).collect()).collect()
    }
}

pub fn a_lambda(rs: &RootSystem, lam: &Weight) -> Result<ALambda> {
    let ws = weight_system(rs, lam)?;
    let n = rs.rank();
    let dim = ws.total();
    let mut acc = vec![vec![BigInt::zero(); n]; n];
    for (mu, m) in ws.iter() {
        let c = mu.coords();
        for i in 0..n {
            for j in 0..n {
                acc[i][j] += m * (c[i] * c[j]);
            }
        }
    }
    let matrix: RatMatrix = acc
        .into_iter()
        .map(|row| row.into_iter().map(|x| BigRational::new(x, dim.clone())).collect())
        .collect();
    let a = ALambda { matrix };
    if is_regular(rs, lam) && !a.is_positive_definite() {
        return Err(Error::Internal(format!("A_λ for regular λ = {lam} is not positive definite")));
    }
    Ok(a)
}

/// `dim V_λ` as a float, for callers that only need magnitudes.
pub fn dimension_f64(rs: &RootSystem, lam: &Weight) -> Result<f64> {
    Ok(weyl_dimension(rs, lam)?.to_f64().unwrap_or(f64::INFINITY))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    #[test]
    fn dimension_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(weyl_dimension(&a1, &w(&[1])).unwrap(), 2.into());
        let a2 = RootSystem::parse("A2").unwrap();
        assert_eq!(weyl_dimension(&a2, &w(&[1, 1])).unwrap(), 8.into());
        for spec in ["B2", "G2", "A3", "F4"] {
            let rs = RootSystem::parse(spec).unwrap();
            let expected = BigInt::from(2).pow(rs.num_positive_roots() as u32);
            assert_eq!(weyl_dimension(&rs, rs.rho()).unwrap(), expected, "{spec}");
        }
        assert!(weyl_dimension(&a2, &w(&[1, -1])).is_err());
    }

    #[test]
    fn a1_weight_systems() {
        let a1 = RootSystem::parse("A1").unwrap();
        let std = weight_system(&a1, &w(&[1])).unwrap();
        assert_eq!(std.sorted(), vec![(w(&[-1]), 1.into()), (w(&[1]), 1.into())]);
        let adj = weight_system(&a1, &w(&[2])).unwrap();
        assert_eq!(
            adj.sorted(),
            vec![(w(&[-2]), 1.into()), (w(&[0]), 1.into()), (w(&[2]), 1.into())]
        );
    }

    #[test]
    fn a2_adjoint_has_double_zero_weight() {
        let a2 = RootSystem::parse("A2").unwrap();
        let adj = weight_system(&a2, &w(&[1, 1])).unwrap();
        assert_eq!(adj.len(), 7);
        assert_eq!(adj.multiplicity(&w(&[0, 0])), 2.into());
        for root in a2.positive_roots() {
            assert_eq!(adj.multiplicity(root), 1.into());
            assert_eq!(adj.multiplicity(&-root), 1.into());
        }
        assert_eq!(adj.total(), 8.into());
    }

    #[test]
    fn regularity() {
        let a1 = RootSystem::parse("A1").unwrap();
        let a2 = RootSystem::parse("A2").unwrap();
        assert!(is_regular(&a1, &w(&[1])));
        assert!(!is_regular(&a2, &w(&[1, 0])));
        assert!(is_regular(&a2, &w(&[1, 1])));
    }

    #[test]
    fn a_lambda_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(a_lambda(&a1, &w(&[1])).unwrap().matrix, vec![vec![rat(1)]]);
        assert_eq!(
            a_lambda(&a1, &w(&[2])).unwrap().matrix,
            vec![vec![BigRational::new(8.into(), 3.into())]]
        );
        let a2 = RootSystem::parse("A2").unwrap();
        let a = a_lambda(&a2, &w(&[1, 1])).unwrap();
        assert_eq!(a.matrix[0][0], a.matrix[1][1]);
        assert_eq!(a.matrix[0][1], a.matrix[1][0]);
        assert!(a.is_positive_definite());
    }

    #[test]
    fn e6_minuscule_and_g2_adjoint() {
        let e6 = RootSystem::parse("E6").unwrap();
        let ws = weight_system(&e6, &w(&[1, 0, 0, 0, 0, 0])).unwrap();
        assert_eq!(ws.len(), 27);
        let g2 = RootSystem::parse("G2").unwrap();
        // highest root of G2 is ω₂ in Bourbaki numbering
        let adj = weight_system(&g2, &w(&[0, 1])).unwrap();
        assert_eq!(adj.total(), 14.into());
        assert_eq!(adj.multiplicity(&w(&[0, 0])), 2.into());
    }

    /// Weyl character formula as a multiplication identity:
    /// `χ_λ · Σ_w sgn(w) e^{wρ} = Σ_w sgn(w) e^{w(λ+ρ)}`.
    fn alternant(rs: &RootSystem, mu: &Weight) -> HashMap<Weight, i64> {
        let mut out = HashMap::from([(mu.clone(), 1i64)]);
        let mut queue = VecDeque::from([mu.clone()]);
        while let Some(x) = queue.pop_front() {
            let s = out[&x];
            for i in 0..rs.rank() {
                let y = rs.reflect(i, &x);
                if !out.contains_key(&y) {
                    out.insert(y.clone(), -s);
                    queue.push_back(y);
                }
            }
        }
        out
    }

    #[test]
    fn freudenthal_matches_weyl_character_formula() {
        for spec in ["A1", "A2", "B2"] {
            let rs = RootSystem::parse(spec).unwrap();
            let rank = rs.rank();
            let bound = if rank == 1 { 12 } else { 4 };
            let coords: Vec<Vec<i64>> = if rank == 1 {
                (0..=bound).map(|a| vec![a]).collect()
            } else {
                (0..=bound).flat_map(|a| (0..=bound).map(move |b| vec![a, b])).collect()
            };
            for c in coords {
                let lam = w(&c);
                if weyl_dimension(&rs, &lam).unwrap() > 200.into() {
                    continue;
                }
                let ws = weight_system(&rs, &lam).unwrap();
                let denom = alternant(&rs, rs.rho());
                let numer = alternant(&rs, &(&lam + rs.rho()));
                let mut product: HashMap<Weight, i64> = HashMap::new();
                for (mu, m) in ws.iter() {
                    for (nu, s) in &denom {
                        *product.entry(mu + nu).or_default() += m.to_i64().unwrap() * s;
                    }
                }
                product.retain(|_, v| *v != 0);
                assert_eq!(product, numer, "{spec} λ={lam}");
            }
        }
    }

    #[test]
    fn weight_systems_are_invariant_and_balanced() {
        let rs = RootSystem::parse("B2").unwrap();
        let ws = weight_system(&rs, &w(&[2, 1])).unwrap();
        assert!(ws.weighted_sum().iter().all(Zero::is_zero));
        let seen: std::collections::HashSet<Weight> = ws.iter().map(|(mu, _)| mu.clone()).collect();
        for mu in &seen {
            for i in 0..2 {
                assert_eq!(ws.multiplicity(mu), ws.multiplicity(&rs.reflect(i, mu)));
            }
        }
    }
}
