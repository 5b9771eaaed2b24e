//! Exact numerical checks of the transform and sampling error bounds.
//!
//! Every check computes its left-hand side in full from closed-form sums,
//! `dft_naive` or `fft_pow2`, never from the approximate transforms it is
//! checking. Bounds with an unspecified constant use the frozen values in
//! [`crate::constants`]. Multi-part checks return one [`BoundReport`] per part.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constants::{C_FALL, C_FSL, C_INT};
use crate::dft::{dft_naive, fft_pow2, is_pow2};
use crate::error::{invalid, Error, Result};
use crate::hsp::{separation_z, StepFunctionR};
use crate::qft_modn::fsl_branch;
use crate::sampling::{draw_rng, Fraction};
use crate::statevector::{root_of_unity, StateVector, DEFAULT_MAX_DIM};

/// Tolerance for checks whose exact value is zero.
pub const ZERO_TOL: f64 = 1e-9;

/// Largest decay slope accepted for the block tail masses of the zero bump.
pub const FALLOFF_SLOPE: f64 = -1.8;

/// Largest `N` for the exhaustive circulant eigenvalue check.
pub const CIRCULANT_MAX_N: usize = 64;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// One checked inequality `measured ≤ bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: String,
    pub params: Value,
    pub measured: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
    pub seed: Option<u64>,
}

impl BoundReport {
    pub fn new(theorem: &str, params: Value, measured: f64, bound: f64, seed: Option<u64>) -> Self {
        let margin = if bound != 0.0 {
            measured / bound
        } else if measured == 0.0 {
            0.0
        } else {
            f64::INFINITY
        };
        Self { theorem: theorem.to_string(), params, measured, bound, margin, pass: measured <= bound, seed }
    }

    /// One JSON object on a single line.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// `true` when every report passed.
pub fn all_pass(reports: &[BoundReport]) -> bool {
    reports.iter().all(|r| r.pass)
}

/// `Σ_{k<count} e^{2πi·num·k/den}` in closed form.
fn geom(count: u64, num: i128, den: u128) -> Complex64 {
    let r = num.rem_euclid(den as i128);
    if r == 0 {
        return Complex64::new(count as f64, 0.0);
    }
    let top = root_of_unity((r * count as i128) % den as i128, den) - 1.0;
    top / (root_of_unity(r, den) - 1.0)
}

/// `⌊(M/N)i⌉`.
fn centre(i: u64, n: u64, m: u64) -> u64 {
    ((2 * i as u128 * m as u128 + n as u128) / (2 * n as u128)) as u64
}

/// `|j − c|_M`.
fn cyc(j: u64, c: u64, m: u64) -> u64 {
    let d = (j as i128 - c as i128).rem_euclid(m as i128) as u64;
    d.min(m - d)
}

/// `j` lies in the open window of half-width `M/2N` around `i'`.
fn in_window(j: u64, i: u64, n: u64, m: u64) -> bool {
    2 * n as u128 * (cyc(j, centre(i, n, m), m) as u128) < m as u128
}

/// `|j − (M/N)i|_M`, as a real number.
fn real_gap(j: u64, i: u64, n: u64, m: u64) -> f64 {
    let mn = m as u128 * n as u128;
    let x = (j as i128 * n as i128 - m as i128 * i as i128).rem_euclid(mn as i128) as u128;
    x.min(mn - x) as f64 / n as f64
}

/// `(1/√M) Σ_{i<N} v_i ω_M^{ik}` for every `k < M`.
fn padded_transform(v: &[Complex64], m: usize) -> Result<Vec<Complex64>> {
    if is_pow2(m) {
        let mut p = v.to_vec();
        p.resize(m, ZERO);
        return fft_pow2(&p);
    }
    let s = 1.0 / (m as f64).sqrt();
    Ok((0..m)
        .into_par_iter()
        .map(|k| {
            let mut acc = ZERO;
            for (i, x) in v.iter().enumerate() {
                acc += x * root_of_unity((i as i128 * k as i128) % m as i128, m as u128);
            }
            acc * s
        })
        .collect())
}

/// `F_M` of `v` repeated `R` times.
fn repeated(v: &[Complex64], r: u64, m: u64) -> Result<Vec<Complex64>> {
    let n = v.len() as u64;
    let base = padded_transform(v, m as usize)?;
    let s = 1.0 / (r as f64).sqrt();
    Ok(base
        .iter()
        .enumerate()
        .map(|(k, b)| b * geom(r, (n as i128 * k as i128) % m as i128, m as u128) * s)
        .collect())
}

/// `(F_M F_{RN}^{-1}|Ri⟩)_j`.
fn bump_amp(i: u64, j: u64, n: u64, r: u64, m: u64) -> Complex64 {
    let rn = r * n;
    let mn = m as u128 * n as u128;
    let num = (j as i128 * n as i128 - m as i128 * i as i128).rem_euclid(mn as i128);
    geom(rn, num, mn) / ((m as f64) * (rn as f64)).sqrt()
}

fn check_sizes(n: u64, r: u64, m: u64) -> Result<()> {
    if n < 1 || !r.is_power_of_two() {
        return Err(invalid(format!("need N ≥ 1 and R a power of two, got N = {n}, R = {r}")));
    }
    if m < r * n {
        return Err(invalid(format!("M = {m} < RN = {}", r * n)));
    }
    if m as usize > DEFAULT_MAX_DIM {
        return Err(Error::DimTooLarge { dim: m as u128, max: DEFAULT_MAX_DIM });
    }
    Ok(())
}

fn random_state(n: usize, seed: u64, trial: u64) -> Result<StateVector> {
    StateVector::random(n, &mut draw_rng(seed, trial))
}

fn max_of(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0, f64::max)
}

// ---------------------------------------------------------------------------
// Embedding into a larger modulus

/// `‖F_N v − (renormalized F_M v at ⌊(M/N)j⌉)‖ ≤ C_FSL·N·log2 N/M` over random unit `v`.
pub fn verify_fsl(n: usize, m: usize, trials: u64, seed: u64) -> Result<BoundReport> {
    if m <= n || n < 2 {
        return Err(invalid(format!("need M > N ≥ 2, got N = {n}, M = {m}")));
    }
    let worst = (0..trials)
        .into_par_iter()
        .map(|t| {
            let v = random_state(n, seed, t)?;
            let (_, sub) = fsl_branch(&v, m)?;
            let exact = dft_naive(v.amps());
            Ok(sub.iter().zip(&exact).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    let bound = C_FSL * n as f64 * (n as f64).log2() / m as f64;
    Ok(BoundReport::new("fsl", json!({"N": n, "M": m, "trials": trials}), max_of(worst), bound, Some(seed)))
}

/// `a'_k = √(M/N)·(F_M ĵ)_{k'}` with `ĵ_i = ω_N^{−ij}/√N`.
fn pointmass_amp(j: u64, k: u64, n: u64, m: u64) -> Complex64 {
    let kp = centre(k, n, m);
    let mn = m as u128 * n as u128;
    let num = (kp as i128 * n as i128 - j as i128 * m as i128).rem_euclid(mn as i128);
    geom(n, num, mn) / n as f64
}

/// Both point-mass inequalities for every `j, k < N`, as ratios to their right-hand sides.
pub fn verify_pointmass_claims(n: u64, m: u64) -> Result<Vec<BoundReport>> {
    if n < 1 || m < n {
        return Err(invalid(format!("need M ≥ N ≥ 1, got N = {n}, M = {m}")));
    }
    let ratio = n as f64 / m as f64;
    let mut diag: f64 = 0.0;
    let mut off: f64 = 0.0;
    for j in 0..n {
        diag = diag.max((1.0 - pointmass_amp(j, j, n, m)).norm() / (std::f64::consts::PI * ratio));
        for k in (0..n).filter(|&k| k != j) {
            let gap = cyc(k, j, n) as f64;
            off = off.max(pointmass_amp(j, k, n, m).norm() * gap / ratio);
        }
    }
    let params = json!({"N": n, "M": m});
    Ok(vec![
        BoundReport::new("amp_j", params.clone(), diag, 1.0, None),
        BoundReport::new("amp_knotj", params, off, 1.0, None),
    ])
}

// ---------------------------------------------------------------------------
// Repetition transforms

/// `‖F_M w − Σ_i v̂_i b_0^{(i')}‖ ≤ 4RN/M + 8·log2 N/√R` with the zero bump as witness.
pub fn verify_ftt(n: u64, r: u64, m: u64, trials: u64, seed: u64) -> Result<BoundReport> {
    check_sizes(n, r, m)?;
    let b0: Vec<(i64, Complex64)> = (0..m)
        .filter(|&j| in_window(j, 0, n, m))
        .map(|j| {
            let t = if 2 * j < m { j as i64 } else { j as i64 - m as i64 };
            (t, bump_amp(0, j, n, r, m))
        })
        .collect();
    let dists = (0..trials)
        .map(|t| {
            let v = random_state(n as usize, seed, t)?;
            let what = repeated(v.amps(), r, m)?;
            let vhat = dft_naive(v.amps());
            let mut witness = vec![ZERO; m as usize];
            for (i, vi) in vhat.iter().enumerate() {
                let c = centre(i as u64, n, m) as i64;
                for &(t, b) in &b0 {
                    witness[(c + t).rem_euclid(m as i64) as usize] += vi * b;
                }
            }
            Ok(what.iter().zip(&witness).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;
    let bound = 4.0 * (r * n) as f64 / m as f64 + 8.0 * (n as f64).log2() / (r as f64).sqrt();
    let params = json!({"N": n, "R": r, "M": m, "trials": trials});
    Ok(BoundReport::new("ftt", params, max_of(dists), bound, Some(seed)))
}

/// Binned distribution of `F_M w`: index `j` counts towards the nearest `i'`.
fn binned(what: &[Complex64], n: u64, m: u64) -> Vec<f64> {
    let mut out = vec![0.0; n as usize];
    for (j, a) in what.iter().enumerate() {
        let i = ((2 * j as u128 * n as u128 + m as u128) / (2 * m as u128)) as u64 % n;
        out[i as usize] += a.norm_sqr();
    }
    out
}

/// `‖D_ŵ − D_v̂‖_1 ≤ 8·log2 N/√R` for any `M ≥ RN`.
pub fn verify_ftts(n: u64, r: u64, m: u64, trials: u64, seed: u64) -> Result<BoundReport> {
    check_sizes(n, r, m)?;
    let l1 = (0..trials)
        .map(|t| {
            let v = random_state(n as usize, seed, t)?;
            let dw = binned(&repeated(v.amps(), r, m)?, n, m);
            let dv = dft_naive(v.amps());
            Ok(dw.iter().zip(&dv).map(|(a, b)| (a - b.norm_sqr()).abs()).sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    let bound = 8.0 * (n as f64).log2() / (r as f64).sqrt();
    let params = json!({"N": n, "R": r, "M": m, "trials": trials});
    Ok(BoundReport::new("ftts", params, max_of(l1), bound, Some(seed)))
}

/// Per-index amplitude bound, shift closeness, tail norm and the block decay of the zero bump.
pub fn verify_tail_shift(n: u64, r: u64, m: u64, trials: u64, seed: u64) -> Result<Vec<BoundReport>> {
    check_sizes(n, r, m)?;
    let rn = (r * n) as f64;
    let scale = (m as f64 / rn).sqrt();
    let full: Vec<Vec<Complex64>> =
        (0..n).into_par_iter().map(|i| (0..m).map(|j| bump_amp(i, j, n, r, m)).collect()).collect();

    let mut falloff: f64 = 0.0;
    let mut shift: f64 = 0.0;
    for (i, amps) in full.iter().enumerate() {
        let i = i as u64;
        let c = centre(i, n, m);
        let mut sq = 0.0;
        for (j, a) in amps.iter().enumerate() {
            let j = j as u64;
            let gap = real_gap(j, i, n, m);
            if gap > 0.0 {
                falloff = falloff.max(a.norm() / (scale * 2.0 / gap));
            }
            if in_window(j, i, n, m) {
                let b0 = full[0][((j + m - c) % m) as usize];
                sq += (b0 - a).norm_sqr();
            }
        }
        shift = shift.max(sq.sqrt());
    }

    let tails = (0..trials)
        .map(|t| {
            let v = random_state(n as usize, seed, t)?;
            let vhat = dft_naive(v.amps());
            let mut acc = vec![ZERO; m as usize];
            for (i, (amps, vi)) in full.iter().zip(&vhat).enumerate() {
                for (j, a) in amps.iter().enumerate() {
                    if !in_window(j as u64, i as u64, n, m) {
                        acc[j] += vi * a;
                    }
                }
            }
            Ok(acc.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt())
        })
        .collect::<Result<Vec<f64>>>()?;

    let params = json!({"N": n, "R": r, "M": m, "trials": trials});
    let mut out = vec![
        BoundReport::new("falloff", params.clone(), falloff, 1.0, None),
        BoundReport::new("shiftclose", params.clone(), shift, 4.0 * rn / m as f64, None),
        BoundReport::new("tailbound", params.clone(), max_of(tails), 8.0 * (n as f64).log2() / (r as f64).sqrt(), Some(seed)),
    ];
    out.push(match block_slope(&full[0], r * n, m) {
        Some(slope) => BoundReport::new("falloff-slope", params, slope, FALLOFF_SLOPE, None),
        None => {
            let tail: f64 = full[0].iter().skip(1).map(|a| a.norm_sqr()).sum();
            BoundReport::new("falloff-slope", params, tail, ZERO_TOL, None)
        }
    });
    Ok(out)
}

/// Least-squares slope of `log(mass of block t)` against `log t` for blocks of width
/// `⌈M/RN⌉` on both sides of zero, `2 ≤ t ≤ M/8w`. `None` when the tail carries no mass.
fn block_slope(zero: &[Complex64], rn: u64, m: u64) -> Option<f64> {
    let w = m.div_ceil(rn);
    let top = (m / (8 * w)).min(512);
    if top < 4 {
        return None;
    }
    let mut pts = Vec::new();
    for t in 2..=top {
        let mass: f64 = (t * w..(t + 1) * w)
            .map(|j| zero[j as usize].norm_sqr() + zero[(m - j) as usize].norm_sqr())
            .sum();
        if mass > 0.0 {
            pts.push(((t as f64).ln(), mass.ln()));
        }
    }
    if pts.len() < 3 || pts.iter().all(|p| p.1 < -60.0) {
        return None;
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0, a.1 + p.1));
    let (mx, my) = (sx / k, sy / k);
    let (cov, var) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + (p.0 - mx) * (p.1 - my), a.1 + (p.0 - mx).powi(2)));
    Some(cov / var)
}

/// The matrix `A_{ji} = 1/|j − (M/N)i|_M` outside the window of `i`, zero inside.
fn tail_matrix(n: u64, m: u64) -> Vec<Vec<f64>> {
    (0..m)
        .map(|j| (0..n).map(|i| if in_window(j, i, n, m) { 0.0 } else { 1.0 / real_gap(j, i, n, m) }).collect())
        .collect()
}

/// Approximate circulant bound for random unit `x`, and the exact fact that a
/// nonnegative circulant matrix has operator norm equal to its row sum.
pub fn verify_circulant(n: u64, m: u64, trials: u64, seed: u64) -> Result<Vec<BoundReport>> {
    if m <= 8 * n {
        return Err(invalid(format!("need M > 8N, got N = {n}, M = {m}")));
    }
    if m as usize > DEFAULT_MAX_DIM {
        return Err(Error::DimTooLarge { dim: m as u128, max: DEFAULT_MAX_DIM });
    }
    let a = tail_matrix(n, m);
    let rhs: f64 = a.iter().map(|row| row.iter().sum::<f64>().powi(2)).sum();
    let lhs = (0..trials)
        .map(|t| {
            let x = random_state(n as usize, seed, t)?;
            Ok(a.iter()
                .map(|row| row.iter().zip(x.amps()).map(|(w, xi)| xi * *w).sum::<Complex64>().norm_sqr())
                .sum::<f64>())
        })
        .collect::<Result<Vec<f64>>>()?;
    let params = json!({"N": n, "M": m, "trials": trials});
    Ok(vec![
        BoundReport::new("approxcirculant", params, max_of(lhs), 4.0 / n as f64 * rhs, Some(seed)),
        verify_circulant_norm(CIRCULANT_MAX_N, seed),
    ])
}

/// Largest singular value of an `N×N` real matrix.
fn top_singular(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    let mat = DMatrix::from_fn(n, n, |i, j| rows[i][j]);
    mat.singular_values().iter().cloned().fold(0.0, f64::max)
}

fn circulant(first: &[f64]) -> Vec<Vec<f64>> {
    let n = first.len();
    (0..n).map(|i| (0..n).map(|j| first[(j + n - i) % n]).collect()).collect()
}

/// For every `N ≤ nmax`: a random nonnegative circulant and the point-mass error
/// matrix `πN/M` on the diagonal, `(N/M)/|i−j|_N` off it, with `M = 8N`. Reports the
/// worst relative gap between the top singular value and the row sum.
pub fn verify_circulant_norm(nmax: usize, seed: u64) -> BoundReport {
    let worst = (1..=nmax)
        .into_par_iter()
        .map(|n| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
            let random: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let ratio = 1.0 / 8.0;
            let pm: Vec<f64> = (0..n)
                .map(|k| if k == 0 { std::f64::consts::PI * ratio } else { ratio / cyc(k as u64, 0, n as u64) as f64 })
                .collect();
            [random, pm]
                .iter()
                .map(|first| {
                    let sum: f64 = first.iter().sum();
                    (top_singular(&circulant(first)) - sum).abs() / sum
                })
                .fold(0.0, f64::max)
        })
        .collect::<Vec<f64>>();
    BoundReport::new("circulant-norm", json!({"N_max": nmax}), max_of(worst), ZERO_TOL, Some(seed))
}

// ---------------------------------------------------------------------------
// Step functions on the reals

/// Tail mass, integral-period closeness and rescaled separation for `f` with minimal step at least 1.
///
/// `k` must divide `N`; `t ≥ 0` is the period perturbation; `d` the ambiguity parameter.
pub fn verify_real_lemmas(
    f: &StepFunctionR,
    m: u64,
    n: u64,
    k: u64,
    t: &Fraction,
    d: u32,
) -> Result<Vec<BoundReport>> {
    if f.min_step() < Fraction::from_int(1) {
        return Err(invalid("minimal step must be at least 1; rescale first"));
    }
    if k == 0 || n % k != 0 {
        return Err(invalid(format!("k = {k} must divide N = {n}")));
    }
    if t.num() < &BigInt::from(0) || d == 0 {
        return Err(invalid("need t ≥ 0 and d ≥ 1"));
    }
    let p = f.period().clone();
    let params = json!({
        "M": m, "N": n, "k": k, "t": t.to_string(), "d": d,
        "period": p.to_string(), "steps": f.breakpoints().len(),
    });

    let dist = crate::hsp::real::fourier_distribution_r(f, m, n)?;
    let size = dist.len() as u64;
    let cut = k as u128 * k as u128 * m as u128;
    let tail: f64 = dist
        .iter()
        .enumerate()
        .filter(|&(x, _)| {
            let x = x as u64;
            (x.min(size - x) as u128) > cut
        })
        .map(|(_, q)| q)
        .sum();

    let size_i = size as i64;
    let orig = f.grid_values(n, -size_i / 2, size as usize)?;
    let np = &Fraction::from_int(n) * &p;
    let alpha = &np / &(&np + t);
    let moved = f.rescale(&alpha)?.grid_values(n, -size_i / 2, size as usize)?;
    let differ = orig.iter().zip(&moved).filter(|(a, b)| a != b).count();
    let intcl = 2.0 * differ as f64 / size as f64;
    let intcl_bound = C_INT * t.to_f64() * m as f64 / np.to_f64();

    let need = Fraction::new(1, 2 * d as i64)?;
    let start = (&Fraction::from_int(4 * d as i64) * &p).to_f64().ceil() as u64;
    let mut sep = Fraction::from_int(1);
    let mut periods = BTreeSet::new();
    for big in start..start + 4 {
        let g = f.rescale(&(&p / &Fraction::from_int(big)))?;
        let vals = g.grid_values(1, 0, big as usize)?;
        periods.insert(big);
        sep = sep.min(separation_z(&vals));
    }
    let mut cdn_params = params.clone();
    cdn_params["rescaled_periods"] = json!(periods);

    Ok(vec![
        BoundReport::new("falloff-r", params.clone(), tail, C_FALL / k as f64, None),
        BoundReport::new("intcl", params, intcl, intcl_bound, None),
        BoundReport::new("cdn", cdn_params, need.to_f64(), sep.to_f64(), None),
    ])
}

// ---------------------------------------------------------------------------
// Parameter grids

/// `(N, M)` pairs for the embedding check: just above `4N`, just above `16N`, the
/// power of two above `64N`, and `2^17`.
pub fn fsl_grid() -> Vec<(usize, usize)> {
    [3usize, 5, 12, 30, 100]
        .iter()
        .flat_map(|&n| [4 * n + 1, 16 * n + 3, (64 * n).next_power_of_two(), 1 << 17].map(|m| (n, m)))
        .collect()
}

/// `(N, R, M)` triples for the tail and shift checks; the last has `M = RN`.
pub const TAIL_SHIFT_GRID: [(u64, u64, u64); 5] =
    [(8, 256, 4096), (5, 64, 2048), (12, 128, 6151), (3, 1024, 24576), (7, 64, 448)];

/// `(N, M)` pairs with `M > 8N` for the approximate circulant bound.
pub const CIRCULANT_GRID: [(u64, u64); 4] = [(32, 512), (12, 200), (7, 64), (64, 1024)];

/// `(M, N)` grids for the step-function lemmas.
pub const REAL_GRID: [(u64, u64); 3] = [(64, 1024), (32, 2048), (128, 512)];

/// Divisors `k` and perturbations `t` for the step-function lemmas.
pub const REAL_KS: [u64; 3] = [2, 4, 8];
pub const REAL_TS: [i64; 3] = [1, 4, 16];

/// Square waves of period 2 and 5, and four random step functions with minimal step 1.
pub fn real_families(seed: u64) -> Result<Vec<StepFunctionR>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![
        StepFunctionR::square_wave(Fraction::new(2, 1)?, 4)?,
        StepFunctionR::square_wave(Fraction::new(5, 1)?, 4)?,
    ];
    for (a, b, steps) in [(7i64, 2i64, 3usize), (11, 2, 4), (13, 3, 3), (9, 1, 6)] {
        out.push(StepFunctionR::random(Fraction::new(a, b)?, steps, Fraction::from_int(1), 8, &mut rng)?);
    }
    Ok(out)
}

pub fn suite_fsl(trials: u64, seed: u64) -> Result<Vec<BoundReport>> {
    fsl_grid().into_iter().map(|(n, m)| verify_fsl(n, m, trials, seed)).collect()
}

pub fn suite_tail_shift(trials: u64, seed: u64) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for (n, r, m) in TAIL_SHIFT_GRID {
        out.extend(verify_tail_shift(n, r, m, trials, seed)?);
    }
    Ok(out)
}

pub fn suite_circulant(trials: u64, seed: u64) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for (n, m) in CIRCULANT_GRID {
        let mut r = verify_circulant(n, m, trials, seed)?;
        r.truncate(1);
        out.extend(r);
    }
    out.push(verify_circulant_norm(CIRCULANT_MAX_N, seed));
    Ok(out)
}

/// Step-function lemmas over every family and grid point with `d = 2`, plus the
/// constant-function and `t = 0` zero cases.
pub fn suite_real(seed: u64) -> Result<Vec<BoundReport>> {
    let mut out = Vec::new();
    for f in real_families(seed)? {
        for (m, n) in REAL_GRID {
            for k in REAL_KS {
                for t in REAL_TS {
                    out.extend(verify_real_lemmas(&f, m, n, k, &Fraction::from_int(t), 2)?);
                }
            }
        }
    }
    out.extend(real_zero_cases(seed)?);
    Ok(out)
}

/// Tail of a constant function and the `t = 0` distance, both exactly zero.
pub fn real_zero_cases(seed: u64) -> Result<Vec<BoundReport>> {
    let constant = StepFunctionR::new(Fraction::from_int(1), vec![Fraction::zero()], vec![5], 4)?;
    let dist = crate::hsp::real::fourier_distribution_r(&constant, 64, 1024)?;
    let off_zero: f64 = dist.iter().skip(1).sum();
    let mut out = vec![BoundReport::new("falloff-r-constant", json!({"M": 64, "N": 1024}), off_zero, ZERO_TOL, None)];
    for f in real_families(seed)? {
        let r = verify_real_lemmas(&f, 64, 1024, 2, &Fraction::zero(), 2)?;
        let params = json!({"M": 64, "N": 1024, "period": f.period().to_string()});
        out.push(BoundReport::new("intcl-zero", params, r[1].measured, 0.0, None));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn geom_matches_direct_sum() {
        for (count, num, den) in [(5u64, 3i128, 7u128), (16, 0, 9), (12, 5, 12), (7, -2, 11)] {
            let direct: Complex64 = (0..count).map(|k| root_of_unity(num * k as i128, den)).sum();
            assert!((geom(count, num, den) - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_bump_is_point_mass_when_m_is_rn() {
        let (n, r) = (6u64, 8u64);
        for j in 0..r * n {
            let a = bump_amp(0, j, n, r, r * n);
            let want = if j == 0 { 1.0 } else { 0.0 };
            assert!((a.norm() - want).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_vector_is_the_factor_one_case() {
        let (n, m) = (12u64, 200u64);
        let a = tail_matrix(n, m);
        let rhs: f64 = a.iter().map(|row| row.iter().sum::<f64>().powi(2)).sum();
        let u = 1.0 / (n as f64).sqrt();
        let lhs: f64 = a.iter().map(|row| (row.iter().sum::<f64>() * u).powi(2)).sum();
        assert!((lhs - rhs / n as f64).abs() < 1e-9 * rhs);
    }
}
