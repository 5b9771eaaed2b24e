//! QFTs over `Z_N` for arbitrary `N`: the CRT decomposition for smooth moduli,
//! quantum chirp-z, Fourier-sampling-lemma embedding, the repetition algorithm,
//! and eigenvalue estimation.
//!
//! Chirp-z, FSL and the repetition algorithm are simulated on amplitude vectors.
//! Eigenvalue estimation runs as a gate circuit.

use num_complex::Complex64;
use num_integer::Integer;
use rand::Rng;

use crate::circuits::{register_layout, Circuit, Cost, Gate, Permutation};
use crate::dft::{chirp, dft, fft_pow2, floor_log2, ifft_pow2, is_pow2, multi_dft};
use crate::error::{invalid, Error, Result};
use crate::qft_pow2::build_qft_exact;
use crate::statevector::{
    distribution, l2_distance_slices, root_of_unity, ProbDist, StateVector, DEFAULT_MAX_DIM,
};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn check_dim(state: &StateVector, n: usize) -> Result<()> {
    if state.dim() != n {
        return Err(Error::DimensionMismatch { left: state.dim(), right: n });
    }
    Ok(())
}

/// `⌊(M/N)·i⌉` in exact integer arithmetic.
pub fn nearest_multiple(i: u64, n: u64, m: u64) -> u64 {
    ((2 * i as u128 * m as u128 + n as u128) / (2 * n as u128)) as u64
}

/// Splits `j < M` into the nearest bump centre `i` and the signed offset `t`, with
/// `j = ⌊(M/N)i_raw⌉ + t` and `i = i_raw mod N`.
pub fn split_index(j: u64, n: u64, m: u64) -> (u64, i64) {
    let i_raw = ((2 * j as u128 * n as u128 + m as u128) / (2 * m as u128)) as u64;
    let t = j as i64 - nearest_multiple(i_raw, n, m) as i64;
    (i_raw % n, t)
}

// ---------------------------------------------------------------------------
// Smooth moduli

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmoothFactorization {
    n: u64,
    factors: Vec<u64>,
}

/// Largest factor accepted by [`qft_smooth`].
pub const MAX_SMOOTH_FACTOR: u64 = 1 << 10;

impl SmoothFactorization {
    /// Pairwise-coprime factors, each at least 2 (or the single factor 1 for `N = 1`).
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        if factors.is_empty() {
            return Err(invalid("no factors"));
        }
        for (i, &a) in factors.iter().enumerate() {
            if a < 2 && factors.len() > 1 || a == 0 {
                return Err(invalid(format!("factor {a} must be at least 2")));
            }
            for &b in &factors[..i] {
                if a.gcd(&b) != 1 {
                    return Err(invalid(format!("factors {b} and {a} are not coprime")));
                }
            }
        }
        let n = factors
            .iter()
            .try_fold(1u64, |acc, &f| acc.checked_mul(f))
            .ok_or_else(|| invalid("modulus overflows u64"))?;
        Ok(Self { n, factors })
    }

    /// Factors `N` into its prime powers.
    pub fn prime_powers(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("modulus 0"));
        }
        let mut rest = n;
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= rest {
            if rest % p == 0 {
                let mut q = 1;
                while rest % p == 0 {
                    rest /= p;
                    q *= p;
                }
                out.push(q);
            }
            p += 1;
        }
        if rest > 1 || out.is_empty() {
            out.push(rest);
        }
        Self::new(out)
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    /// `a ↦ (a mod m_i)_i`.
    pub fn crt_iso(&self, a: u64) -> Vec<u64> {
        self.factors.iter().map(|&m| a % m).collect()
    }

    /// `(a_i) ↦ Σ a_i N_i (N_i^{-1} mod m_i) mod N`.
    pub fn crt_inv(&self, residues: &[u64]) -> u64 {
        let n = self.n as u128;
        let mut acc = 0u128;
        for (&a, &m) in residues.iter().zip(&self.factors) {
            let ni = self.n / m;
            let c = mod_inverse(ni % m, m);
            acc = (acc + a as u128 * ni as u128 % n * c as u128) % n;
        }
        acc as u64
    }

    fn row_major(&self, residues: &[u64]) -> usize {
        residues.iter().zip(&self.factors).fold(0usize, |acc, (&r, &m)| acc * m as usize + r as usize)
    }
}

/// Inverse of `a` modulo `m` (`gcd(a, m) = 1`); returns 0 when `m = 1`.
pub fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    e.x.rem_euclid(m as i128) as u64
}

/// QFT over `Z_N` through the CRT isomorphism `Z_N ≅ ⊕ Z_{m_i}`.
pub fn qft_smooth(state: &StateVector, f: &SmoothFactorization) -> Result<StateVector> {
    check_dim(state, f.n as usize)?;
    if let Some(&m) = f.factors.iter().find(|&&m| m > MAX_SMOOTH_FACTOR) {
        return Err(invalid(format!("factor {m} exceeds {MAX_SMOOTH_FACTOR}")));
    }
    let mut table = vec![ZERO; f.n as usize];
    for (a, amp) in state.amps().iter().enumerate() {
        table[f.row_major(&f.crt_iso(a as u64))] = *amp;
    }
    let dims: Vec<usize> = f.factors.iter().map(|&m| m as usize).collect();
    let t = multi_dft(&table, &dims)?;
    let c: Vec<u64> = f.factors.iter().map(|&m| mod_inverse((f.n / m) % m, m)).collect();
    let out = (0..f.n)
        .map(|b| {
            let y: Vec<u64> =
                f.factors.iter().zip(&c).map(|(&m, &ci)| (b % m) * ci % m).collect();
            t[f.row_major(&y)]
        })
        .collect();
    StateVector::from_raw(out)
}

// ---------------------------------------------------------------------------
// Quantum chirp-z

#[derive(Debug, Clone, PartialEq)]
pub enum ChirpzOutcome {
    Success(StateVector),
    Retry,
}

/// One run of the quantum chirp-z procedure.
#[derive(Debug, Clone, PartialEq)]
pub struct ChirpzRun {
    pub outcome: ChirpzOutcome,
    /// Measured difference register.
    pub h: usize,
    /// Shift `κ` applied to correct the output (also reported on retry).
    pub shift: usize,
}

/// Precomputed Fourier-side registers of the chirp-z reduction.
#[derive(Debug, Clone)]
pub struct ChirpzSetup {
    n: usize,
    len: usize,
    beta_hat: Vec<Complex64>,
    gamma_hat: Vec<Complex64>,
}

/// One measured branch `h`.
#[derive(Debug, Clone)]
pub struct ChirpzBranch {
    /// Probability of measuring `h`.
    pub prob: f64,
    /// Probability that the collapse onto `{N, …, 2N−1}` succeeds given `h`.
    pub collapse: f64,
    /// Normalized DFT over `N` of `α_i ω_L^{−ih}` (phases unwound), before the shift.
    pub unwound: Vec<Complex64>,
}

impl ChirpzSetup {
    pub fn new(state: &StateVector) -> Result<Self> {
        let n = state.dim();
        if n < 2 {
            return Err(invalid("chirp-z needs N ≥ 2"));
        }
        let len = 1usize << (floor_log2(n) + 2);
        let mut b = vec![ZERO; len];
        for (i, a) in state.amps().iter().enumerate() {
            b[i] = a * chirp(i, n, 1);
        }
        let s = 1.0 / ((2 * n) as f64).sqrt();
        let mut c = vec![ZERO; len];
        for (i, ci) in c.iter_mut().enumerate().take(2 * n) {
            *ci = chirp(i, n, -1) * s;
        }
        Ok(Self { n, len, beta_hat: fft_pow2(&b)?, gamma_hat: fft_pow2(&c)? })
    }

    /// FFT length `L = 2^{⌊log2 N⌋+2}`.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `P(h) = Σ_u |β̂_u|² |γ̂_{u+h}|²` for every `h`.
    pub fn h_distribution(&self) -> Vec<f64> {
        let l = self.len;
        let pb: Vec<f64> = self.beta_hat.iter().map(|x| x.norm_sqr()).collect();
        let pc: Vec<f64> = self.gamma_hat.iter().map(|x| x.norm_sqr()).collect();
        (0..l).map(|h| (0..l).map(|u| pb[u] * pc[(u + h) % l]).sum()).collect()
    }

    pub fn branch(&self, h: usize) -> Result<ChirpzBranch> {
        let (n, l) = (self.n, self.len);
        if h >= l {
            return Err(invalid(format!("h = {h} outside 0..{l}")));
        }
        let phi: Vec<Complex64> =
            (0..l).map(|u| self.beta_hat[u] * self.gamma_hat[(u + h) % l]).collect();
        let prob: f64 = phi.iter().map(|x| x.norm_sqr()).sum();
        let psi = ifft_pow2(&phi)?;
        let kept: f64 = psi[n..2 * n].iter().map(|x| x.norm_sqr()).sum();
        let collapse = if prob > 0.0 { kept / prob } else { 0.0 };
        let mut unwound: Vec<Complex64> = (n..2 * n)
            .map(|k| psi[k] * chirp(k, n, 1) * root_of_unity(-((k * h) as i128), l as u128))
            .collect();
        let norm = unwound.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            unwound.iter_mut().for_each(|x| *x /= norm);
        }
        Ok(ChirpzBranch { prob, collapse, unwound })
    }

    /// Nearest `κ` with `h/L ≈ κ/N` and whether `|ω_L^h − ω_N^κ| < ε²/N`.
    pub fn correction(&self, h: usize, eps: f64) -> (usize, bool) {
        let (n, l) = (self.n as u128, self.len as u128);
        let kappa = ((2 * h as u128 * n + l) / (2 * l) % n) as usize;
        let gap = (root_of_unity(h as i128, l) - root_of_unity(kappa as i128, n)).norm();
        (kappa, gap < eps * eps / self.n as f64)
    }

    /// Exact success probability `Σ_h P(h)·q_h·[h passes the correction test]`.
    pub fn success_probability(&self, eps: f64) -> Result<f64> {
        let p = self.h_distribution();
        let mut acc = 0.0;
        for (h, &ph) in p.iter().enumerate() {
            if ph > 0.0 && self.correction(h, eps).1 {
                acc += ph * self.branch(h)?.collapse;
            }
        }
        Ok(acc)
    }
}

/// Cyclic shift so that `out_m = v_{(m + κ) mod N}`.
fn shift_down(v: &[Complex64], kappa: usize) -> Vec<Complex64> {
    let n = v.len();
    (0..n).map(|m| v[(m + kappa) % n]).collect()
}

/// Quantum chirp-z over `Z_N`: measures `h`, collapses, unwinds and shifts.
pub fn qft_chirpz_quantum<R: Rng + ?Sized>(
    state: &StateVector,
    n: usize,
    eps: f64,
    rng: &mut R,
) -> Result<ChirpzRun> {
    check_dim(state, n)?;
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(invalid(format!("eps = {eps} must lie in (0, 1]")));
    }
    let setup = ChirpzSetup::new(state)?;
    let h = ProbDist::from_weights(setup.h_distribution())?.sampler().draw(rng);
    let branch = setup.branch(h)?;
    let (kappa, ok) = setup.correction(h, eps);
    let collapsed = rng.gen::<f64>() < branch.collapse;
    let outcome = if collapsed && ok {
        ChirpzOutcome::Success(StateVector::from_raw(shift_down(&branch.unwound, kappa))?)
    } else {
        ChirpzOutcome::Retry
    };
    Ok(ChirpzRun { outcome, h, shift: kappa })
}

// ---------------------------------------------------------------------------
// Fourier sampling lemma embedding

/// Flag probability and renormalized flagged subvector of `F_M` applied to `α` padded to `M`.
pub fn fsl_branch(state: &StateVector, m: usize) -> Result<(f64, Vec<Complex64>)> {
    let n = state.dim();
    if m < n {
        return Err(invalid(format!("M = {m} must be at least N = {n}")));
    }
    if m > DEFAULT_MAX_DIM {
        return Err(Error::DimTooLarge { dim: m as u128, max: DEFAULT_MAX_DIM });
    }
    let mut padded = state.amps().to_vec();
    padded.resize(m, ZERO);
    let big = dft(&padded);
    let mut sub: Vec<Complex64> =
        (0..n).map(|i| big[nearest_multiple(i as u64, n as u64, m as u64) as usize]).collect();
    let p: f64 = sub.iter().map(|x| x.norm_sqr()).sum();
    if p > 0.0 {
        let s = p.sqrt();
        sub.iter_mut().for_each(|x| *x /= s);
    }
    Ok((p, sub))
}

/// `M` for a target error `eps`: the next power of two above `C·N·log2 N / eps`.
pub fn fsl_choose_m(n: usize, eps: f64) -> Result<usize> {
    if !(eps > 0.0) {
        return Err(invalid("eps must be positive"));
    }
    let lg = (n.max(2) as f64).log2();
    let want = crate::constants::C_FSL * n as f64 * lg / eps;
    let m = (want.ceil() as usize).max(2 * n).next_power_of_two();
    if m > DEFAULT_MAX_DIM {
        return Err(Error::DimTooLarge { dim: m as u128, max: DEFAULT_MAX_DIM });
    }
    Ok(m)
}

/// FSL method with an explicit `M`. `None` means the flag was not raised.
pub fn qft_fsl_with_m<R: Rng + ?Sized>(
    state: &StateVector,
    m: usize,
    rng: &mut R,
) -> Result<Option<StateVector>> {
    let (p, sub) = fsl_branch(state, m)?;
    if rng.gen::<f64>() < p {
        Ok(Some(StateVector::from_raw(sub)?))
    } else {
        Ok(None)
    }
}

/// FSL method with `M` from [`fsl_choose_m`].
pub fn qft_fsl<R: Rng + ?Sized>(
    state: &StateVector,
    n: usize,
    eps: f64,
    rng: &mut R,
) -> Result<Option<StateVector>> {
    check_dim(state, n)?;
    qft_fsl_with_m(state, fsl_choose_m(n, eps)?, rng)
}

// ---------------------------------------------------------------------------
// Repetition algorithm

/// `R = 2^r` repetitions transformed over a working modulus `M ≥ RN`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepetitionParams {
    pub n: usize,
    pub r: usize,
    pub m: usize,
}

impl RepetitionParams {
    pub fn new(n: usize, r: usize, m: usize) -> Result<Self> {
        if n < 1 {
            return Err(invalid("N must be positive"));
        }
        if !is_pow2(r) {
            return Err(invalid(format!("R = {r} is not a power of two")));
        }
        let rn = r.checked_mul(n).ok_or_else(|| invalid("RN overflows"))?;
        if m < rn {
            return Err(invalid(format!("M = {m} < RN = {rn}")));
        }
        if m > DEFAULT_MAX_DIM {
            return Err(Error::DimTooLarge { dim: m as u128, max: DEFAULT_MAX_DIM });
        }
        Ok(Self { n, r, m })
    }

    /// `M = 2^{⌈log2(8RN)⌉}`, which makes the shift term at most 1/2.
    pub fn with_pow2_m(n: usize, r: usize) -> Result<Self> {
        Self::new(n, r, (8 * r * n).next_power_of_two())
    }

    /// `4RN/M + 8·log2 N/√R`.
    pub fn bound(&self) -> f64 {
        4.0 * (self.r * self.n) as f64 / self.m as f64 + tail_bound(self.n, self.r)
    }

    /// Half-width of the offset window, `⌈M/2N⌉ + 1`.
    pub fn window_radius(&self) -> usize {
        self.m.div_ceil(2 * self.n) + 1
    }
}

/// `8·log2 N/√R`.
pub fn tail_bound(n: usize, r: usize) -> f64 {
    8.0 * (n as f64).log2() / (r as f64).sqrt()
}

/// `F_M` of `α` repeated `R` times: `w_k = α_{k mod N}/√R` for `k < RN`.
pub fn repeated_transform(state: &StateVector, p: RepetitionParams) -> Result<Vec<Complex64>> {
    check_dim(state, p.n)?;
    let s = 1.0 / (p.r as f64).sqrt();
    let mut w = vec![ZERO; p.m];
    for (k, x) in w.iter_mut().enumerate().take(p.r * p.n) {
        *x = state.amps()[k % p.n] * s;
    }
    Ok(dft(&w))
}

/// `0^M_j = (F_M F_{RN}^{-1}|0⟩)_j` in closed form.
pub fn zero_bump(p: RepetitionParams, j: usize) -> Complex64 {
    let rn = (p.r * p.n) as f64;
    let scale = 1.0 / (rn * p.m as f64).sqrt();
    let jm = j % p.m;
    if jm == 0 {
        return Complex64::new(rn * scale, 0.0);
    }
    // Σ_{k<RN} e^{2πi k j/M} = e^{iπ(RN−1)θ} sin(πRNθ)/sin(πθ), θ = j/M.
    let m = p.m as u128;
    let rn_u = (p.r * p.n) as u128;
    let num = (std::f64::consts::PI * ((rn_u * jm as u128) % (2 * m)) as f64 / p.m as f64).sin();
    let den = (std::f64::consts::PI * jm as f64 / p.m as f64).sin();
    let phase = root_of_unity(((rn_u - 1) * jm as u128 % (2 * m)) as i128, 2 * m);
    phase * (num / den * scale)
}

/// The witness bump `b_0`: `0^M` restricted to `|j|_M < M/2N`, indexed by signed offset.
pub fn witness_bump(p: RepetitionParams) -> Vec<(i64, Complex64)> {
    let (m, n) = (p.m as i64, p.n as i64);
    let mut out = Vec::new();
    let rad = p.window_radius() as i64;
    for t in -rad..=rad {
        if (2 * t * n).abs() < m {
            out.push((t, zero_bump(p, t.rem_euclid(m) as usize)));
        }
    }
    out
}

/// Diagnostics of one run of the repetition algorithm.
#[derive(Debug, Clone)]
pub struct ApproxQftOutput {
    pub params: RepetitionParams,
    /// `ŵ^M`, indexed by `j < M`.
    pub transformed: Vec<Complex64>,
    /// `‖ŵ^M − Σ_i v̂_i b_0^{(i')}‖` with `i' = ⌊(M/N)i⌉`.
    pub witness_distance: f64,
    /// `4RN/M + 8·log2 N/√R`.
    pub bound: f64,
    /// The witness residual `b_0` over the offset window, centred at index `window_radius`.
    pub residual: Vec<Complex64>,
}

impl ApproxQftOutput {
    /// Probability of each offset `t`, indexed by `t + window_radius`.
    pub fn offset_distribution(&self) -> Vec<f64> {
        let p = self.params;
        let rad = p.window_radius() as i64;
        let mut out = vec![0.0; 2 * rad as usize + 1];
        for (j, a) in self.transformed.iter().enumerate() {
            let (_, t) = split_index(j as u64, p.n as u64, p.m as u64);
            out[(t + rad) as usize] += a.norm_sqr();
        }
        out
    }

    /// Probability of each `i` after rounding, the output distribution of Fourier sampling.
    pub fn binned_distribution(&self) -> Vec<f64> {
        let p = self.params;
        let mut out = vec![0.0; p.n];
        for (j, a) in self.transformed.iter().enumerate() {
            out[split_index(j as u64, p.n as u64, p.m as u64).0 as usize] += a.norm_sqr();
        }
        out
    }

    /// Renormalized row of the joint state at offset `t`, or `None` if it carries no mass.
    pub fn row(&self, t: i64) -> Option<Vec<Complex64>> {
        let p = self.params;
        let (n, m) = (p.n as u64, p.m as u64);
        let mut v: Vec<Complex64> = (0..n)
            .map(|i| {
                let j = (nearest_multiple(i, n, m) as i64 + t).rem_euclid(m as i64) as u64;
                if split_index(j, n, m) == (i, t) {
                    self.transformed[j as usize]
                } else {
                    ZERO
                }
            })
            .collect();
        let s = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if s <= 0.0 {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= s);
        Some(v)
    }
}

/// Repetition algorithm: spread, transform over `M`, and compare with the `b_0` witness.
pub fn approx_qft_zn(state: &StateVector, p: RepetitionParams) -> Result<ApproxQftOutput> {
    if !state.is_normalized(crate::statevector::INPUT_NORM_TOL) {
        return Err(Error::NotNormalized { norm_sqr: state.norm_sqr() });
    }
    let transformed = repeated_transform(state, p)?;
    let vhat = dft(state.amps());
    let bump = witness_bump(p);
    let (n, m) = (p.n as u64, p.m as u64);
    let mut witness = vec![ZERO; p.m];
    for (i, vi) in vhat.iter().enumerate() {
        let centre = nearest_multiple(i as u64, n, m) as i64;
        for &(t, b) in &bump {
            witness[(centre + t).rem_euclid(m as i64) as usize] += vi * b;
        }
    }
    let witness_distance = l2_distance_slices(&transformed, &witness)?;
    let rad = p.window_radius() as i64;
    let mut residual = vec![ZERO; 2 * rad as usize + 1];
    for &(t, b) in &bump {
        residual[(t + rad) as usize] = b;
    }
    Ok(ApproxQftOutput { params: p, transformed, witness_distance, bound: p.bound(), residual })
}

/// Runs [`approx_qft_zn`], measures the offset and returns the collapsed `i` register with `t`.
pub fn approx_qft_zn_measured<R: Rng + ?Sized>(
    state: &StateVector,
    p: RepetitionParams,
    rng: &mut R,
) -> Result<(StateVector, i64)> {
    let out = approx_qft_zn(state, p)?;
    let rad = p.window_radius() as i64;
    let t = ProbDist::from_weights(out.offset_distribution())?.sampler().draw(rng) as i64 - rad;
    let row = out.row(t).ok_or_else(|| invalid("sampled an empty offset"))?;
    Ok((StateVector::from_raw(row)?, t))
}

// ---------------------------------------------------------------------------
// Eigenvalue estimation

/// `|î⟩ = Σ_j ω_N^{ij}|j⟩/√N`.
pub fn fourier_basis_state(n: usize, i: usize) -> Result<StateVector> {
    if i >= n {
        return Err(invalid(format!("index {i} outside Z_{n}")));
    }
    let s = 1.0 / (n as f64).sqrt();
    StateVector::from_raw((0..n).map(|j| root_of_unity((i * j) as i128, n as u128) * s).collect())
}

/// `Σ_i α_i|i⟩|0⟩ → Σ_i α_i|i⟩|î⟩` on `Z_N × Z_N`, first register most significant.
pub fn fbs_map(state: &StateVector) -> Result<StateVector> {
    let n = state.dim();
    let dim = n.checked_mul(n).filter(|&d| d <= DEFAULT_MAX_DIM);
    let dim = dim.ok_or(Error::DimTooLarge { dim: (n as u128) * n as u128, max: DEFAULT_MAX_DIM })?;
    let s = 1.0 / (n as f64).sqrt();
    let mut out = vec![ZERO; dim];
    for (i, a) in state.amps().iter().enumerate() {
        // Uniform superposition over j, then the phase ij/N kicked into the amplitude.
        for j in 0..n {
            out[i * n + j] = a * s * root_of_unity((i * j) as i128, n as u128);
        }
    }
    StateVector::from_raw(out)
}

fn bits_for(n: usize) -> usize {
    (usize::BITS - (n.max(2) - 1).leading_zeros()) as usize
}

/// Eigenvalue-estimation circuit for `U = +1 mod N` with a `k_bits` control register.
///
/// Layout: control (high wires) then target. The control register gets Hadamards,
/// controlled `U^{2^m}` gadgets, then the forward QFT over `2^{k_bits}`.
pub fn build_eigen_estimation(n: usize, k_bits: usize) -> Result<Circuit> {
    if n < 2 || k_bits < 1 {
        return Err(invalid("need N ≥ 2 and at least one control bit"));
    }
    let tb = bits_for(n);
    let regs = register_layout(&[k_bits, tb]);
    let (ctl, tgt) = (regs[0].clone(), regs[1].clone());
    let mut c = Circuit::new(k_bits + tb);
    c.push_stage(ctl.clone().map(Gate::Hadamard).collect())?;
    let tmask = (1u64 << tb) - 1;
    let nn = n as u64;
    for m in 0..k_bits {
        let step = ((1u128 << m) % n as u128) as u64;
        let apply = move |v: u64, s: u64| {
            let x = v & tmask;
            if v >> tb == 0 || x >= nn {
                return v;
            }
            ((x + s) % nn) | (v & !tmask)
        };
        let g = Permutation::new(
            format!("cadd_mod({step},{n})"),
            vec![tgt.clone(), ctl.start + m..ctl.start + m + 1],
            move |v| apply(v, step),
            move |v| apply(v, (nn - step) % nn),
            Cost { size: tb as u64, depth: bits_for(tb) as u64 },
        )?;
        c.push_gate(Gate::Permutation(g))?;
    }
    let map: Vec<usize> = ctl.collect();
    c.then(&build_qft_exact(k_bits).embed(k_bits + tb, &map)?)
}

/// Exact distribution of the control register on input `|0⟩|î⟩`.
pub fn eigenvalue_distribution(n: usize, k_bits: usize, i: usize) -> Result<ProbDist> {
    let c = build_eigen_estimation(n, k_bits)?;
    let tb = bits_for(n);
    let mut target = fourier_basis_state(n, i)?.into_amps();
    target.resize(1 << tb, ZERO);
    let input = crate::statevector::tensor(
        &StateVector::basis(1 << k_bits, 0)?,
        &StateVector::from_raw(target)?,
    )?;
    let out = c.apply(&input)?;
    let joint = distribution(&out)?;
    let mut marg = vec![0.0; 1 << k_bits];
    for (idx, p) in joint.probs().iter().enumerate() {
        marg[idx >> tb] += p;
    }
    ProbDist::from_weights(marg)
}

/// Samples an estimate `x` of `2^{k_bits}·i/N`.
pub fn eigenvalue_estimate<R: Rng + ?Sized>(
    n: usize,
    k_bits: usize,
    i: usize,
    rng: &mut R,
) -> Result<u64> {
    Ok(eigenvalue_distribution(n, k_bits, i)?.sampler().draw(rng) as u64)
}
