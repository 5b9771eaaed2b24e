//! Classical reference transforms: naive DFT, radix-2 FFT, chirp-z and cyclic convolution.
//!
//! All transforms are unitary with kernel `ω_N^{jk}/√N`, `ω_N = e^{2πi/N}`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::statevector::root_of_unity;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn naive(v: &[Complex64], sign: i128) -> Vec<Complex64> {
    let n = v.len();
    let roots: Vec<Complex64> = (0..n).map(|m| root_of_unity(sign * m as i128, n as u128)).collect();
    let scale = 1.0 / (n as f64).sqrt();
    let row = |k: usize| -> Complex64 {
        let mut acc = ZERO;
        let mut idx = 0usize;
        for x in v {
            acc += x * roots[idx];
            idx += k;
            if idx >= n {
                idx -= n;
            }
        }
        acc * scale
    };
    if n >= 512 {
        (0..n).into_par_iter().map(row).collect()
    } else {
        (0..n).map(row).collect()
    }
}

/// `out_k = (1/√N) Σ_j v_j ω_N^{jk}` by direct summation.
pub fn dft_naive(v: &[Complex64]) -> Vec<Complex64> {
    naive(v, 1)
}

/// Inverse of [`dft_naive`].
pub fn idft_naive(v: &[Complex64]) -> Vec<Complex64> {
    naive(v, -1)
}

pub fn is_pow2(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// `floor(log2 n)` for `n ≥ 1`.
pub fn floor_log2(n: usize) -> u32 {
    usize::BITS - 1 - n.leading_zeros()
}

/// Unnormalized in-place decimation-in-frequency transform.
///
/// Each pass splits the block into `v_0` (top bit 0) and `v_1` and writes
/// `w_j = v_{0j} + v_{1j}` into the first half and
/// `z_j = ω^{.0j} v_{0j} + ω^{.1j} v_{1j} = ω^j (v_{0j} − v_{1j})` into the second.
/// `w` feeds the even outputs and `z` the odd ones, so results come out bit-reversed.
fn dif_unnormalized(buf: &mut [Complex64], sign: i128) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    let roots: Vec<Complex64> =
        (0..n / 2).map(|m| root_of_unity(sign * m as i128, n as u128)).collect();
    let mut half = n / 2;
    let mut stride = 1;
    while half >= 1 {
        let butterfly = |block: &mut [Complex64]| {
            let (lo, hi) = block.split_at_mut(half);
            for j in 0..half {
                let a = lo[j];
                let b = hi[j];
                lo[j] = a + b;
                hi[j] = (a - b) * roots[j * stride];
            }
        };
        if n >= 1 << 14 {
            buf.par_chunks_mut(2 * half).for_each(butterfly);
        } else {
            buf.chunks_mut(2 * half).for_each(butterfly);
        }
        half /= 2;
        stride *= 2;
    }
    bit_reverse_permute(buf);
}

fn bit_reverse_permute(buf: &mut [Complex64]) {
    let n = buf.len();
    let bits = floor_log2(n);
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if i < j {
            buf.swap(i, j);
        }
    }
}

fn pow2_transform(v: &[Complex64], sign: i128) -> Result<Vec<Complex64>> {
    if !is_pow2(v.len()) {
        return Err(Error::InvalidParameter(format!("length {} is not a power of two", v.len())));
    }
    let mut buf = v.to_vec();
    dif_unnormalized(&mut buf, sign);
    let s = 1.0 / (v.len() as f64).sqrt();
    buf.iter_mut().for_each(|x| *x *= s);
    Ok(buf)
}

/// Radix-2 FFT with the same normalization and sign as [`dft_naive`].
pub fn fft_pow2(v: &[Complex64]) -> Result<Vec<Complex64>> {
    pow2_transform(v, 1)
}

/// Inverse of [`fft_pow2`].
pub fn ifft_pow2(v: &[Complex64]) -> Result<Vec<Complex64>> {
    pow2_transform(v, -1)
}

/// `ω_N^{s·i²/2} = e^{s·πi·i²/N}`, with `i²` reduced mod `2N` first.
pub fn chirp(i: usize, n: usize, s: i128) -> Complex64 {
    let two_n = 2 * n as u128;
    let sq = (i as u128 * i as u128) % two_n;
    root_of_unity(s * sq as i128, two_n)
}

/// DFT over any `N` through a length-`2^{n+2}` convolution, `n = floor(log2 N)`.
pub fn chirpz(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.len();
    if n <= 1 {
        return v.to_vec();
    }
    let len = 1usize << (floor_log2(n) + 2);
    let mut b = vec![ZERO; len];
    for (i, a) in v.iter().enumerate() {
        b[i] = a * chirp(i, n, 1);
    }
    // c must cover lags up to 2N − 1 so every d_k with N ≤ k < 2N is complete.
    let mut c = vec![ZERO; len];
    for (i, ci) in c.iter_mut().enumerate().take(2 * n) {
        *ci = chirp(i, n, -1);
    }
    dif_unnormalized(&mut b, 1);
    dif_unnormalized(&mut c, 1);
    for (x, y) in b.iter_mut().zip(&c) {
        *x *= y;
    }
    dif_unnormalized(&mut b, -1);
    let scale = 1.0 / (len as f64 * (n as f64).sqrt());
    (0..n).map(|m| b[m + n] * chirp(m + n, n, 1) * scale).collect()
}

/// Inverse chirp-z, by conjugation symmetry.
pub fn ichirpz(v: &[Complex64]) -> Vec<Complex64> {
    let conj: Vec<Complex64> = v.iter().map(|x| x.conj()).collect();
    chirpz(&conj).into_iter().map(|x| x.conj()).collect()
}

/// Fast unitary DFT of any length: radix-2 when possible, chirp-z otherwise.
pub fn dft(v: &[Complex64]) -> Vec<Complex64> {
    if is_pow2(v.len()) {
        fft_pow2(v).expect("power of two")
    } else {
        chirpz(v)
    }
}

/// Fast inverse of [`dft`].
pub fn idft(v: &[Complex64]) -> Vec<Complex64> {
    if is_pow2(v.len()) {
        ifft_pow2(v).expect("power of two")
    } else {
        ichirpz(v)
    }
}

/// Cyclic convolution `out_g = Σ_{h+k ≡ g (mod N)} a_h b_k`.
pub fn convolve(a: &[Complex64], b: &[Complex64]) -> Result<Vec<Complex64>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    let n = a.len();
    Ok((0..n)
        .map(|g| (0..n).map(|h| a[h] * b[(g + n - h) % n]).sum())
        .collect())
}

/// Unitary DFT over `⊕ Z_{d_i}` on a row-major array (first factor most significant).
pub fn multi_dft(data: &[Complex64], dims: &[usize]) -> Result<Vec<Complex64>> {
    let total: usize = dims.iter().product();
    if total != data.len() {
        return Err(Error::DimensionMismatch { left: data.len(), right: total });
    }
    let mut out = data.to_vec();
    let mut stride = total;
    for &d in dims {
        stride /= d;
        let mut line = vec![ZERO; d];
        for outer in 0..total / (d * stride) {
            for inner in 0..stride {
                let base = outer * d * stride + inner;
                for (t, x) in line.iter_mut().enumerate() {
                    *x = out[base + t * stride];
                }
                for (t, y) in dft(&line).into_iter().enumerate() {
                    out[base + t * stride] = y;
                }
            }
        }
    }
    Ok(out)
}
