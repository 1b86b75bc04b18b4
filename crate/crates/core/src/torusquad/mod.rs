//! Moment integrals through Weyl's integration formula on the maximal torus.
//!
//! The integrand is a trigonometric polynomial in the torus coordinates, so
//! a uniform grid on the unit cube whose per-axis size exceeds the largest
//! frequency integrates it exactly. Phases are integers mod `L = lcm(M_i)`
//! and are looked up in a table of `L`-th roots of unity; all accumulation
//! is in double-double so that large cancelling sums (odd tensor powers)
//! come out at the `1e-8` absolute level.

pub mod dd;

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
use num::complex::Complex64;
use num::integer::lcm;
use num::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::asymptotics::ClassFunction;
use crate::charring::{adams, CycleType};
use crate::error::{Error, Result};
use crate::repweights::{weight_system, weyl_dimension, WeightSystem};
use crate::rootsys::{RootSystem, Weight};
use dd::{root_of_unity, CDd, Dd};

/// Refuse the quadrature once `ln` of the integrand's sup norm passes this.
pub const DEFAULT_LOG_CAP: f64 = 600.0;
/// Largest grid, in points, the quadrature will evaluate.
pub const MAX_GRID_POINTS: u64 = 200_000_000;
/// Largest phase table `L = lcm(M_i)`.
pub const MAX_PHASE_TABLE: u64 = 1 << 24;
const IMAG_TOLERANCE: f64 = 1e-10;
const CHUNK: usize = 4096;

/// Uniform grid `n/M` on the unit cube of the integral lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusGrid {
    pub sizes: Vec<u64>,
    pub bandwidth_bound: Vec<u64>,
}

fn next_smooth(n: u64) -> u64 {
    (n.max(1)..)
        .find(|&m| {
            let mut m = m;
            for p in [2, 3, 5] {
                while m % p == 0 {
                    m /= p;
                }
            }
            m == 1
        })
        .unwrap()
}

impl TorusGrid {
    /// Smallest 5-smooth sizes above the bandwidth.
    pub fn for_bandwidth(bandwidth_bound: Vec<u64>) -> Self {
        let sizes = bandwidth_bound.iter().map(|&b| next_smooth(b + 1)).collect();
        Self { sizes, bandwidth_bound }
    }

    /// Explicit sizes; refused unless every axis clears its bandwidth.
    pub fn with_sizes(sizes: Vec<u64>, bandwidth_bound: Vec<u64>) -> Result<Self> {
        let grid = Self { sizes, bandwidth_bound };
        grid.check()?;
        Ok(grid)
    }

    pub fn check(&self) -> Result<()> {
        if self.sizes.len() != self.bandwidth_bound.len() {
            return Err(Error::RankMismatch { expected: self.bandwidth_bound.len(), got: self.sizes.len() });
        }
        for (axis, (&m, &b)) in self.sizes.iter().zip(&self.bandwidth_bound).enumerate() {
            if m <= b {
                return Err(Error::GridTooSmall { axis, have: m, need: b + 1 });
            }
        }
        Ok(())
    }

    pub fn num_points(&self) -> u64 {
        self.sizes.iter().product()
    }

    /// Same grid with every axis doubled.
    pub fn doubled(&self) -> Self {
        Self { sizes: self.sizes.iter().map(|m| 2 * m).collect(), bandwidth_bound: self.bandwidth_bound.clone() }
    }
}

/// `Σ m(μ) e^{2πi⟨μ,φ⟩}` at real torus coordinates `φ`.
pub fn character_at(ws: &WeightSystem, phi: &[f64]) -> Complex64 {
    ws.iter()
        .map(|(mu, m)| {
            let t: f64 = mu.coords().iter().zip(phi).map(|(&a, b)| a as f64 * b).sum();
            let theta = 2.0 * PI * t.rem_euclid(1.0);
            Complex64::new(theta.cos(), theta.sin()) * m.to_f64().unwrap_or(f64::NAN)
        })
        .sum()
}

/// `|Δ(φ)|² = ∏_{α>0} |2 sin(π⟨α,φ⟩)|²`.
pub fn weyl_denominator_sq(rs: &RootSystem, phi: &[f64]) -> f64 {
    rs.positive_roots()
        .iter()
        .map(|a| {
            let t: f64 = a.coords().iter().zip(phi).map(|(&c, x)| c as f64 * x).sum();
            let s = 2.0 * (PI * t.rem_euclid(1.0)).sin();
            s * s
        })
        .product()
}

fn f_bandwidth(rs: &RootSystem, f: &ClassFunction) -> Result<Vec<u64>> {
    f.validate(rs)?;
    let mut out = vec![0u64; rs.rank()];
    for (nu, _) in f.terms() {
        let ws = weight_system(rs, nu)?;
        for (o, m) in out.iter_mut().zip(ws.max_abs_coords()) {
            *o = (*o).max(m as u64);
        }
    }
    Ok(out)
}

/// Per-axis frequency bound of `∏χ(jφ)^{Nα_j} ∏χ̄(jφ)^{Nβ_j} f |Δ|²`.
pub fn bandwidth(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    n: u64,
    f: &ClassFunction,
) -> Result<Vec<u64>> {
    let ws = weight_system(rs, lam)?;
    let k = n * (a.weight() + b.weight());
    let fb = f_bandwidth(rs, f)?;
    Ok((0..rs.rank())
        .map(|i| {
            let delta: u64 = rs.positive_roots().iter().map(|r| r.coords()[i].unsigned_abs()).sum();
            k * ws.max_abs_coords()[i] as u64 + delta + fb[i]
        })
        .collect())
}

/// Outcome of a grid quadrature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    /// Imaginary part of the normalized sum; zero in exact arithmetic.
    pub imag: f64,
    pub grid: TorusGrid,
}

/// Integer phase data of a weight system on a given grid.
struct PhaseWeights {
    steps: Vec<Vec<u64>>,
    mults: Vec<f64>,
}

impl PhaseWeights {
    fn new(ws: &WeightSystem, sizes: &[u64], l: u64) -> Self {
        let mut entries: Vec<_> = ws.iter().collect();
        entries.sort();
        let steps = entries
            .iter()
            .map(|(mu, _)| {
                mu.coords()
                    .iter()
                    .zip(sizes)
                    .map(|(&c, &m)| (c as i128 * (l / m) as i128).rem_euclid(l as i128) as u64)
                    .collect()
            })
            .collect();
        let mults = entries.iter().map(|(_, m)| m.to_f64().unwrap_or(f64::NAN)).collect();
        Self { steps, mults }
    }

    /// `Σ m(μ) e^{2πi j⟨μ, n/M⟩}`.
    fn eval(&self, index: &[u64], j: u64, l: u64, table: &[CDd]) -> CDd {
        let mut acc = CDd::ZERO;
        for (steps, &m) in self.steps.iter().zip(&self.mults) {
            let mut phase: u128 = 0;
            for (s, &n) in steps.iter().zip(index) {
                phase += *s as u128 * n as u128;
            }
            let phase = ((phase % l as u128) * j as u128 % l as u128) as usize;
            acc = acc + table[phase].scale_f64(m);
        }
        acc
    }
}

/// `(1/|W|) ∫_T ∏_j χ_λ(jφ)^{Nα_j} ∏_j χ̄_λ(jφ)^{Nβ_j} f(φ) |Δ(φ)|² dφ` on `grid`.
#[allow(clippy::too_many_arguments)]
pub fn quad_moment(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    n: u64,
    f: &ClassFunction,
    grid: &TorusGrid,
    log_cap: f64,
) -> Result<QuadResult> {
    let rank = rs.rank();
    let needed = bandwidth(rs, lam, a, b, n, f)?;
    if grid.sizes.len() != rank {
        return Err(Error::RankMismatch { expected: rank, got: grid.sizes.len() });
    }
    TorusGrid { sizes: grid.sizes.clone(), bandwidth_bound: needed.clone() }.check()?;

    let dim = weyl_dimension(rs, lam)?;
    let log_magnitude = (n * (a.size() + b.size())) as f64 * crate::linalg::ln_bigint_abs(&dim);
    if log_magnitude > log_cap {
        return Err(Error::Overflow { log_magnitude, cap: log_cap });
    }

    let total = grid.num_points();
    if total > MAX_GRID_POINTS {
        return Err(Error::SizeCap(format!("grid of {total} points exceeds {MAX_GRID_POINTS}")));
    }
    let l = grid.sizes.iter().fold(1u64, |acc, &m| lcm(acc, m));
    if l > MAX_PHASE_TABLE {
        return Err(Error::SizeCap(format!("phase table lcm(M) = {l} exceeds {MAX_PHASE_TABLE}")));
    }
    let table: Vec<CDd> = (0..l).into_par_iter().map(|k| root_of_unity(k, l)).collect();

    let ws = weight_system(rs, lam)?;
    let lam_phase = PhaseWeights::new(&ws, &grid.sizes, l);
    let mut powers: Vec<(u64, u64, u64)> = Vec::new();
    for j in 1..=a.exps().len().max(b.exps().len()) as u64 {
        let (pa, pb) = (n * a.exp(j as usize), n * b.exp(j as usize));
        if pa + pb > 0 {
            powers.push((j, pa, pb));
        }
    }
    let f_terms = f
        .terms()
        .iter()
        .map(|(nu, c)| Ok((PhaseWeights::new(&*weight_system(rs, nu)?, &grid.sizes, l), *c)))
        .collect::<Result<Vec<_>>>()?;
    let roots: Vec<Vec<u64>> = rs
        .positive_roots()
        .iter()
        .map(|r| {
            r.coords()
                .iter()
                .zip(&grid.sizes)
                .map(|(&c, &m)| (c as i128 * (l / m) as i128).rem_euclid(l as i128) as u64)
                .collect()
        })
        .collect();

    let point = |linear: u64| -> CDd {
        let mut index = vec![0u64; rank];
        let mut rem = linear;
        for (slot, &m) in index.iter_mut().zip(&grid.sizes).rev() {
            *slot = rem % m;
            rem /= m;
        }
        let mut value = CDd::ONE;
        for &(j, pa, pb) in &powers {
            let chi = lam_phase.eval(&index, j, l, &table);
            if pa > 0 {
                value = value * chi.powu(pa);
            }
            if pb > 0 {
                value = value * chi.conj().powu(pb);
            }
        }
        let mut fv = CDd::ZERO;
        for (pw, c) in &f_terms {
            fv = fv + pw.eval(&index, 1, l, &table).scale_f64(*c);
        }
        let mut delta = Dd::ONE;
        for steps in &roots {
            let phase: u128 = steps.iter().zip(&index).map(|(&s, &n)| s as u128 * n as u128).sum();
            let c = table[(phase % l as u128) as usize].re;
            delta = delta * (Dd::from_f64(2.0) - c.mul_f64(2.0));
        }
        (value * fv).scale(delta)
    };

    let chunks = total.div_ceil(CHUNK as u64);
    let partial: Vec<CDd> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK as u64;
            let end = (start + CHUNK as u64).min(total);
            (start..end).fold(CDd::ZERO, |acc, p| acc + point(p))
        })
        .collect();
    let sum = pairwise(&partial);
    let norm = rs.weyl_order() as f64 * total as f64;
    let value = sum.re.div_f64(norm).to_f64();
    let imag = sum.im.div_f64(norm).to_f64();
    if imag.abs() > IMAG_TOLERANCE * value.abs().max(1.0) {
        return Err(Error::ImaginaryResidual { value, imag });
    }
    Ok(QuadResult { value, imag, grid: TorusGrid { sizes: grid.sizes.clone(), bandwidth_bound: needed } })
}

fn pairwise(xs: &[CDd]) -> CDd {
    match xs.len() {
        0 => CDd::ZERO,
        1 => xs[0],
        n => pairwise(&xs[..n / 2]) + pairwise(&xs[n / 2..]),
    }
}

/// Grid defaulting to the computed bandwidth when `sizes` is `None`.
pub fn grid_for(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    n: u64,
    f: &ClassFunction,
    sizes: Option<Vec<u64>>,
) -> Result<TorusGrid> {
    let bw = bandwidth(rs, lam, a, b, n, f)?;
    match sizes {
        Some(s) => {
            if s.len() != bw.len() {
                return Err(Error::RankMismatch { expected: bw.len(), got: s.len() });
            }
            TorusGrid::with_sizes(s, bw)
        }
        None => Ok(TorusGrid::for_bandwidth(bw)),
    }
}

/// `I_N(f, α)` by torus quadrature.
pub fn quad_i_n(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    n: u64,
    f: &ClassFunction,
    grid: &TorusGrid,
) -> Result<QuadResult> {
    quad_moment(rs, lam, a, &CycleType::empty(), n, f, grid, DEFAULT_LOG_CAP)
}

/// `K_N(f, α, β)` by torus quadrature.
pub fn quad_k_n(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    b: &CycleType,
    n: u64,
    f: &ClassFunction,
    grid: &TorusGrid,
) -> Result<QuadResult> {
    quad_moment(rs, lam, a, b, n, f, grid, DEFAULT_LOG_CAP)
}

/// `max_grid |∏_j χ(jφ)^{α_j}|` and the grid points attaining `(dim V_λ)^{|α|}`
/// to relative `1e-12`.
pub fn kernel_sup_on_grid(
    rs: &RootSystem,
    lam: &Weight,
    a: &CycleType,
    sizes: &[u64],
) -> Result<(f64, Vec<Vec<u64>>)> {
    let ws = weight_system(rs, lam)?;
    let bound = weyl_dimension(rs, lam)?.to_f64().unwrap_or(f64::INFINITY).powi(a.size() as i32);
    let factors: Vec<(WeightSystem, u64)> = (1..=a.exps().len())
        .filter(|&j| a.exp(j) > 0)
        .map(|j| (adams(&ws, j as u64), a.exp(j)))
        .collect();
    let total: u64 = sizes.iter().product();
    let mut best = 0.0f64;
    let mut attained = Vec::new();
    for p in 0..total {
        let mut rem = p;
        let mut index = vec![0u64; sizes.len()];
        for (slot, &m) in index.iter_mut().zip(sizes).rev() {
            *slot = rem % m;
            rem /= m;
        }
        let phi: Vec<f64> = index.iter().zip(sizes).map(|(&n, &m)| n as f64 / m as f64).collect();
        let v: f64 = factors.iter().map(|(w, e)| character_at(w, &phi).norm().powi(*e as i32)).product();
        best = best.max(v);
        if (v - bound).abs() <= 1e-12 * bound {
            attained.push(index);
        }
    }
    Ok((best, attained))
}

/// Gauss–Hermite nodes and weights for `∫ e^{-x²} g(x) dx` (Golub–Welsch).
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let jacobi = DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == j || j + 1 == i {
            (i.max(j) as f64 / 2.0).sqrt()
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], PI.sqrt() * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    pairs.into_iter().unzip()
}

/// `∫_t e^{−⟨Hx,x⟩/2} |κ(x)|² dx` by a tensor Gauss–Hermite rule in the
/// eigenbasis of `H`, exact for the degree-`2d` integrand.
pub fn mehta_quadrature(rs: &RootSystem, h: &[Vec<f64>]) -> Result<f64> {
    let r = rs.rank();
    if r > 3 {
        return Err(Error::SizeCap(format!("tensor Gauss rule limited to rank 3, got {r}")));
    }
    if h.len() != r || h.iter().any(|row| row.len() != r) {
        return Err(Error::RankMismatch { expected: r, got: h.len() });
    }
    let m = DMatrix::from_fn(r, r, |i, j| 0.5 * (h[i][j] + h[j][i]));
    if m.clone().cholesky().is_none() {
        return Err(Error::NotPositiveDefinite(format!("{h:?}")));
    }
    let eig = SymmetricEigen::new(m);
    // x = Q D^{-1/2} y, dx = dy / √det H
    let transform = DMatrix::from_fn(r, r, |i, k| eig.eigenvectors[(i, k)] / eig.eigenvalues[k].sqrt());
    let det: f64 = eig.eigenvalues.iter().product();
    let (nodes, weights) = gauss_hermite(rs.num_positive_roots() + 1);
    let q = nodes.len();
    let mut total = 0.0;
    let mut idx = vec![0usize; r];
    loop {
        let y: Vec<f64> = idx.iter().map(|&k| std::f64::consts::SQRT_2 * nodes[k]).collect();
        let w: f64 = idx.iter().map(|&k| std::f64::consts::SQRT_2 * weights[k]).product();
        let x: Vec<f64> = (0..r).map(|i| (0..r).map(|k| transform[(i, k)] * y[k]).sum()).collect();
        total += w * rs.kappa_f64(&x).powi(2);
        let mut pos = 0;
        loop {
            if pos == r {
                return Ok(total / det.sqrt());
            }
            idx[pos] += 1;
            if idx[pos] < q {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
