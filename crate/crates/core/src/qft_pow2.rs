//! Circuits for the QFT over `Z_{2^n}`: the exact product-form circuit, its
//! truncated variant, and the parallel QFS / COPY / FPE construction.

use num_complex::Complex64;
use rand::Rng;

use crate::circuits::{arith_gadget, register_layout, reverse, ArithKind, Circuit, Gate};
use crate::error::{invalid, Result};
use crate::statevector::{mod_distance_int, StateVector};

/// Keep controlled rotations `R_k` only for `k ≤ kmax`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub kmax: u32,
}

impl TruncationPolicy {
    pub fn new(kmax: u32, n: usize) -> Result<Self> {
        if kmax < 2 || kmax as usize > n {
            return Err(invalid(format!("kmax = {kmax} must satisfy 2 ≤ kmax ≤ n = {n}")));
        }
        Ok(Self { kmax })
    }
}

fn reversal(n: usize) -> Vec<usize> {
    (0..n).map(|w| n - 1 - w).collect()
}

fn qft_with_cutoff(n: usize, kmax: u32) -> Circuit {
    // Target t (1-based, most significant first) lives on wire n − t. Gate G_tc is
    // H for c = t and CR_{c−t+1} controlled by c otherwise; stage s holds G_tc with t + c = s.
    let wire = |t: usize| n - t;
    let mut c = Circuit::new(n);
    for s in 2..=2 * n {
        let mut stage = Vec::new();
        for t in 1..=n {
            if s < 2 * t || s - t > n {
                continue;
            }
            let ctl = s - t;
            if ctl == t {
                stage.push(Gate::Hadamard(wire(t)));
            } else {
                let k = (ctl - t + 1) as u32;
                if k <= kmax {
                    stage.push(Gate::controlled_rotation(k, wire(ctl), wire(t)));
                }
            }
        }
        c.push_stage(stage).expect("schedule keeps stages disjoint");
    }
    c.set_output_relabel(reversal(n)).expect("valid permutation");
    c
}

/// Exact QFT over `2^n`: size `n(n+1)/2`, `2n − 1` stages, output order matching `dft_naive`.
pub fn build_qft_exact(n: usize) -> Circuit {
    qft_with_cutoff(n, u32::MAX)
}

pub fn build_qft_truncated(n: usize, policy: TruncationPolicy) -> Circuit {
    qft_with_cutoff(n, policy.kmax)
}

/// `|j⟩|0⟩ → |j⟩|ĵ⟩` on `2n` wires, input register high.
///
/// One Hadamard stage, then stage `d` applies `R_d` from input bit `b` to output
/// bit `n − d − b`. Truncation keeps `d ≤ kmax`.
pub fn build_qfs(n: usize, policy: Option<TruncationPolicy>) -> Circuit {
    let regs = register_layout(&[n, n]);
    let (inp, out) = (regs[0].clone(), regs[1].clone());
    let dmax = policy.map_or(n, |p| (p.kmax as usize).min(n));
    let mut c = Circuit::new(2 * n);
    c.push_stage(out.clone().map(Gate::Hadamard).collect()).expect("disjoint");
    for d in 1..=dmax {
        let stage = (0..=n - d)
            .map(|b| Gate::controlled_rotation(d as u32, inp.start + b, out.start + (n - d - b)))
            .collect();
        c.push_stage(stage).expect("disjoint");
    }
    c
}

/// `|ĵ⟩|0⟩ → |ĵ⟩|ĵ⟩` on `2n` wires: Hadamards on the second register, then first −= second.
pub fn copy_fourier(n: usize) -> Circuit {
    let regs = register_layout(&[n, n]);
    let mut c = Circuit::new(2 * n);
    c.push_stage(regs[1].clone().map(Gate::Hadamard).collect()).expect("disjoint");
    c.then(&fourier_label_add(n)).expect("same width")
}

/// First register −= second (mod `2^n`), which maps `|ĵ⟩|k̂⟩ → |ĵ⟩|(j+k)^⟩`.
pub fn fourier_label_add(n: usize) -> Circuit {
    let regs = register_layout(&[n, n]);
    let mut c = Circuit::new(2 * n);
    c.push_gate(arith_gadget(ArithKind::Sub, &[regs[1].clone(), regs[0].clone()]).expect("valid gadget"))
        .expect("disjoint");
    c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FpeParams {
    pub n: usize,
    pub k: usize,
}

impl FpeParams {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || n == 0 || n % (2 * k) != 0 {
            return Err(invalid(format!("FPE needs 2k | n, got n = {n}, k = {k}")));
        }
        Ok(Self { n, k })
    }

    fn windows(&self) -> Vec<Window> {
        let (n, k) = (self.n, self.k);
        let mut ws = Vec::new();
        for w in 0..n / (2 * k) {
            ws.push(Window { copy: 0, offset: 2 * k * w, exact: w + 1 == n / (2 * k) });
        }
        for w in 0..(n / (2 * k)).saturating_sub(1) {
            ws.push(Window { copy: 1, offset: k + 2 * k * w, exact: false });
        }
        ws
    }
}

/// One mod-`2^{2k}` transform window. `offset` counts bits of `j` from the most
/// significant end; the window sees copy qubits of weight `2^offset .. 2^{offset+2k−1}`.
#[derive(Debug, Clone, Copy)]
struct Window {
    copy: usize,
    offset: usize,
    exact: bool,
}

/// `|j⟩|ĵ⟩|ĵ⟩|ĵ⟩ → |0⟩|ĵ⟩^3` approximately, on `4n` wires laid out `[j, c1, c2, c3]`.
///
/// Inverse transforms mod `2^{2k}` run on `n/2k` windows of `c1` and on `n/2k − 1`
/// windows of `c2` shifted by `k` bits. The leading `k` bits of each estimate are
/// xored into the matching block of `j`; the last `c1` window has an integral
/// phase and xors all `2k` of its bits. The transforms are then undone.
pub fn build_fpe(params: FpeParams) -> Result<Circuit> {
    let (n, k) = (params.n, params.k);
    let regs = register_layout(&[n, n, n, n]);
    let jreg = regs[0].clone();
    let iqft = reverse(&build_qft_exact(2 * k));
    let mut parts = Vec::new();
    let mut xors = Vec::new();
    for win in params.windows() {
        let base = regs[1 + win.copy].start + win.offset;
        parts.push((iqft.clone(), (base..base + 2 * k).collect::<Vec<_>>()));
        let (src, dst) = if win.exact {
            (base..base + 2 * k, jreg.start..jreg.start + 2 * k)
        } else {
            let top = jreg.start + n - win.offset;
            (base + k..base + 2 * k, top - k..top)
        };
        xors.push(arith_gadget(ArithKind::XorInto, &[src, dst])?);
    }
    let forward = Circuit::parallel(4 * n, &parts)?;
    let mut mid = Circuit::new(4 * n);
    mid.push_stage(xors)?;
    forward.then(&mid)?.then(&reverse(&forward))
}

fn fejer(delta: f64, d: f64) -> f64 {
    let frac = delta - delta.round();
    if frac == 0.0 {
        return if (delta.round() as i64).rem_euclid(d as i64) == 0 { 1.0 } else { 0.0 };
    }
    let num = (std::f64::consts::PI * delta).sin();
    let den = d * (std::f64::consts::PI * delta / d).sin();
    (num / den).powi(2)
}

/// Probability that every FPE window estimates its block of `j` correctly.
///
/// This equals the overlap of the FPE output with `|0⟩|ĵ⟩^3`.
pub fn fpe_success_probability(params: FpeParams, j: u64) -> f64 {
    let (n, k) = (params.n, params.k);
    let d = (1u64 << (2 * k)) as f64;
    let mut p = 1.0;
    for win in params.windows() {
        let low = n - win.offset - 2 * k;
        let jm = j & ((1u64 << (n - win.offset)) - 1);
        let big_j = jm as f64 / (1u64 << low) as f64;
        let int_j = jm >> low;
        let pw: f64 = if win.exact {
            1.0
        } else {
            let top = int_j >> k;
            ((top << k)..((top + 1) << k)).map(|x| fejer(big_j - x as f64, d)).sum()
        };
        p *= pw;
    }
    p
}

/// Squared L2 error of the FPE output on basis input `j`: `2(1 − P_j)`.
pub fn fpe_sq_error(params: FpeParams, j: u64) -> f64 {
    2.0 * (1.0 - fpe_success_probability(params, j))
}

/// `k`-bit blocks of `j`, most significant first.
pub fn blocks(params: FpeParams, j: u64) -> Vec<u64> {
    let (n, k) = (params.n, params.k);
    (1..=n / k).map(|i| (j >> (n - k * i)) & ((1u64 << k) - 1)).collect()
}

/// `min(1, Σ_{1<i<n/k} 1/|j_i|_{2^k})²` with 1-based blocks.
pub fn fpe_error_bound(params: FpeParams, j: u64) -> f64 {
    let b = blocks(params, j);
    let m = b.len();
    let mut s = 0.0;
    for &blk in b.iter().take(m.saturating_sub(1)).skip(1) {
        let dist = mod_distance_int(blk as i128, 1 << params.k);
        if dist == 0 {
            return 1.0;
        }
        s += 1.0 / dist as f64;
    }
    s.min(1.0).powi(2)
}

/// `j` is bad when some block satisfies `|j_i|_{2^k} < 2^{k/2}`.
pub fn in_bad_set(params: FpeParams, j: u64) -> bool {
    let thr = 2f64.powf(params.k as f64 / 2.0);
    blocks(params, j).iter().any(|&b| (mod_distance_int(b as i128, 1 << params.k) as f64) < thr)
}

/// UQFT on `4n` wires: QFS, two copies, FPE, then the copies undone.
/// Input `|α⟩|0⟩^3` becomes approximately `|0⟩|α̂⟩|0⟩|0⟩`.
pub fn build_uqft(params: FpeParams, qfs: Option<TruncationPolicy>) -> Result<Circuit> {
    let n = params.n;
    let regs = register_layout(&[n, n, n, n]);
    let w = 4 * n;
    let pair = |a: usize, b: usize| -> Vec<usize> { regs[b].clone().chain(regs[a].clone()).collect() };
    let qfs_c = build_qfs(n, qfs).embed(w, &pair(0, 1))?;
    let copy = copy_fourier(n);
    let c12 = copy.embed(w, &pair(1, 2))?;
    let c13 = copy.embed(w, &pair(1, 3))?;
    qfs_c
        .then(&c12)?
        .then(&c13)?
        .then(&build_fpe(params)?)?
        .then(&reverse(&c13))?
        .then(&reverse(&c12))
}

/// Approximate parallel QFT with a random input shift.
#[derive(Debug, Clone)]
pub struct Pqft {
    pub params: FpeParams,
    pub shift: u64,
}

pub fn pqft<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<Pqft> {
    let params = FpeParams::new(n, k)?;
    let shift = rng.gen_range(0..1u64 << n);
    Ok(Pqft { params, shift })
}

impl Pqft {
    /// Gate-level circuit: add the shift, UQFT, then remove the phase `ω^{sy}` from the output.
    pub fn circuit(&self) -> Result<Circuit> {
        let n = self.params.n;
        let regs = register_layout(&[n, n, n, n]);
        let mut pre = Circuit::new(4 * n);
        pre.push_gate(arith_gadget(ArithKind::AddConst(self.shift), &[regs[0].clone()])?)?;
        let mut post = Circuit::new(4 * n);
        for c in 0..n {
            if self.shift >> c & 1 == 1 {
                let stage = (0..n - c)
                    .map(|b| Gate::Rotation { k: (n - b - c) as u32, wire: regs[1].start + b, inverse: true })
                    .collect();
                post.push_stage(stage)?;
            }
        }
        pre.then(&build_uqft(self.params, None)?)?.then(&post)
    }

    /// Exact squared error of the full output against `|0⟩|α̂⟩|0⟩|0⟩`.
    pub fn sq_error(&self, alpha: &StateVector) -> f64 {
        let n = self.params.n;
        let mask = (1u64 << n) - 1;
        alpha
            .amps()
            .iter()
            .enumerate()
            .map(|(j, a)| a.norm_sqr() * fpe_sq_error(self.params, (j as u64 + self.shift) & mask))
            .sum()
    }
}

/// Squared error averaged over all `2^n` shifts.
pub fn pqft_expected_sq_error(params: FpeParams, alpha: &StateVector) -> f64 {
    let size = 1u64 << params.n;
    let errs: Vec<f64> = (0..size).map(|j| fpe_sq_error(params, j)).collect();
    let mean = errs.iter().sum::<f64>() / size as f64;
    // Every input index meets each shifted error exactly once.
    mean * alpha.norm_sqr()
}

/// Applies an `n`-wire circuit to every basis state; column `j` is the image of `|j⟩`.
pub fn circuit_columns(c: &Circuit) -> Result<Vec<Vec<Complex64>>> {
    let dim = 1usize << c.width();
    (0..dim).map(|j| Ok(c.apply(&StateVector::basis(dim, j)?)?.into_amps())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_sizes() {
        for n in 1..=20 {
            let c = build_qft_exact(n);
            assert_eq!(c.size(), n * (n + 1) / 2);
            assert!(c.depth() <= 2 * n + 1);
        }
    }

    #[test]
    fn last_window_exact() {
        let p = FpeParams::new(8, 4).unwrap();
        for j in 0..256 {
            assert_eq!(fpe_success_probability(p, j), 1.0);
        }
    }
}
