//! Fourier sampling with known and unknown moduli, exact fractions and
//! nearest-fraction rounding.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dft::dft;
use crate::error::{invalid, Error, Result};
use crate::qft_modn::{approx_qft_zn, RepetitionParams};
use crate::statevector::{distribution, root_of_unity, ProbDist, StateVector};

/// Reduced fraction with positive denominator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl Fraction {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let (mut num, mut den) = (num.into(), den.into());
        if den.is_zero() {
            return Err(invalid("zero denominator"));
        }
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        let g = num.gcd(&den);
        if !g.is_one() {
            num /= &g;
            den /= &g;
        }
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Self { num: BigInt::zero(), den: BigInt::one() }
    }

    pub fn num(&self) -> &BigInt {
        &self.num
    }

    pub fn den(&self) -> &BigInt {
        &self.den
    }

    pub fn to_f64(&self) -> f64 {
        let (n, d) = (self.num.to_f64().unwrap_or(f64::NAN), self.den.to_f64().unwrap_or(f64::NAN));
        n / d
    }

    /// `|self − other|` as an exact fraction.
    pub fn abs_diff(&self, other: &Fraction) -> Fraction {
        let num = (&self.num * &other.den - &other.num * &self.den).abs();
        Fraction::new(num, &self.den * &other.den).expect("nonzero denominators")
    }
}

impl Fraction {
    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Self { num: n.into(), den: BigInt::one() }
    }

    /// Largest integer `≤ self`.
    pub fn floor(&self) -> BigInt {
        self.num.div_floor(&self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::ops::Add for &Fraction {
    type Output = Fraction;
    fn add(self, o: &Fraction) -> Fraction {
        Fraction::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den).expect("nonzero")
    }
}

impl std::ops::Sub for &Fraction {
    type Output = Fraction;
    fn sub(self, o: &Fraction) -> Fraction {
        Fraction::new(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den).expect("nonzero")
    }
}

impl std::ops::Mul for &Fraction {
    type Output = Fraction;
    fn mul(self, o: &Fraction) -> Fraction {
        Fraction::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero")
    }
}

impl std::ops::Div for &Fraction {
    type Output = Fraction;
    /// Panics when `o` is zero.
    fn div(self, o: &Fraction) -> Fraction {
        Fraction::new(&self.num * &o.den, &self.den * &o.num).expect("division by zero")
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.num * &other.den).cmp(&(&other.num * &self.den))
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = Error;

    /// Accepts `<int>` or `<int>/<int>` with a nonzero denominator.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::Parse { line: 1, msg: format!("{msg}: {s:?}") };
        let int = |t: &str| -> Result<BigInt> {
            let digits = t.strip_prefix('-').unwrap_or(t);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("malformed integer"));
            }
            t.parse::<BigInt>().map_err(|_| bad("malformed integer"))
        };
        match s.split_once('/') {
            None => Fraction::new(int(s)?, 1),
            Some((n, d)) => {
                let d = int(d)?;
                if d.is_zero() {
                    return Err(bad("zero denominator"));
                }
                Fraction::new(int(n)?, d)
            }
        }
    }
}

/// Nearest fraction `p/q` to `x` with `q < t`; ties go to the smaller denominator.
///
/// Walks the Stern–Brocot tree in batched steps to the two neighbours of `x`
/// among fractions with denominator at most `t − 1`, then picks the closer one.
pub fn cf_round(x: &Fraction, t: u64) -> Result<Fraction> {
    if t < 2 {
        return Err(invalid(format!("denominator bound T = {t} must be at least 2")));
    }
    if x.num.is_negative() || x.num >= x.den {
        return Err(invalid(format!("{x} is outside [0, 1)")));
    }
    let q_max = BigInt::from(t - 1);
    if x.den <= q_max {
        return Ok(x.clone());
    }
    let (a, b) = (&x.num, &x.den);
    let (mut lp, mut lq) = (BigInt::zero(), BigInt::one());
    let (mut hp, mut hq) = (BigInt::one(), BigInt::one());
    loop {
        // Raise lo: largest k with (lp + k·hp)/(lq + k·hq) ≤ x.
        let num = a * &lq - b * &lp;
        let den = b * &hp - a * &hq;
        let k = &num / &den;
        let kq = (&q_max - &lq) / &hq;
        if k > kq {
            lp += &kq * &hp;
            lq += &kq * &hq;
            break;
        }
        lp += &k * &hp;
        lq += &k * &hq;
        // Lower hi: largest k with (hp + k·lp)/(hq + k·lq) > x.
        let num2 = b * &hp - a * &hq;
        let den2 = a * &lq - b * &lp;
        let k2 = (&num2 + &den2 - 1) / &den2 - 1;
        let kq2 = (&q_max - &hq) / &lq;
        if k2 > kq2 {
            hp += &kq2 * &lp;
            hq += &kq2 * &lq;
            break;
        }
        hp += &k2 * &lp;
        hq += &k2 * &lq;
    }
    let lo = Fraction::new(lp, lq)?;
    let hi = Fraction::new(hp, hq)?;
    Ok(match x.abs_diff(&lo).cmp(&x.abs_diff(&hi)) {
        Ordering::Less => lo,
        Ordering::Greater => hi,
        Ordering::Equal => {
            if lo.den <= hi.den {
                lo
            } else {
                hi
            }
        }
    })
}

// ---------------------------------------------------------------------------
// Sample batches

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sample {
    Index(u64),
    Fraction(Fraction),
}

impl fmt::Display for Sample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sample::Index(i) => write!(f, "{i}"),
            Sample::Fraction(x) => write!(f, "{x}"),
        }
    }
}

/// Samples with the seed and parameters that reproduce them.
///
/// Text form: a `seed=<u64>` line, an optional `# params k=v ...` line, then one
/// sample per line as `<index>` or `<num>/<den>`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SampleBatch {
    pub seed: u64,
    pub params: BTreeMap<String, u64>,
    pub samples: Vec<Sample>,
}

impl SampleBatch {
    pub fn to_text(&self) -> String {
        let mut s = format!("seed={}\n", self.seed);
        if !self.params.is_empty() {
            s.push_str("# params");
            for (k, v) in &self.params {
                s.push_str(&format!(" {k}={v}"));
            }
            s.push('\n');
        }
        for x in &self.samples {
            s.push_str(&format!("{x}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let err = |line: usize, msg: String| Error::Parse { line, msg };
        let (_, head) = lines.next().ok_or_else(|| err(1, "empty input".into()))?;
        let seed = head
            .strip_prefix("seed=")
            .and_then(|v| if v.bytes().all(|b| b.is_ascii_digit()) { v.parse::<u64>().ok() } else { None })
            .ok_or_else(|| err(1, format!("expected seed=<u64>, got {head:?}")))?;
        let mut batch = SampleBatch { seed, ..Default::default() };
        for (no, line) in lines {
            if let Some(rest) = line.strip_prefix("# params") {
                if !batch.params.is_empty() || !batch.samples.is_empty() {
                    return Err(err(no, "params line must follow the seed".into()));
                }
                for kv in rest.split_whitespace() {
                    let (k, v) = kv.split_once('=').ok_or_else(|| err(no, format!("bad param {kv:?}")))?;
                    let v = v.parse::<u64>().map_err(|_| err(no, format!("bad value in {kv:?}")))?;
                    if k.is_empty() || batch.params.insert(k.to_string(), v).is_some() {
                        return Err(err(no, format!("bad or repeated key in {kv:?}")));
                    }
                }
                continue;
            }
            let sample = if line.contains('/') {
                Sample::Fraction(line.parse().map_err(|_| err(no, format!("bad fraction {line:?}")))?)
            } else if !line.is_empty() && line.bytes().all(|b| b.is_ascii_digit()) {
                Sample::Index(line.parse().map_err(|_| err(no, format!("index out of range {line:?}")))?)
            } else {
                return Err(err(no, format!("bad sample {line:?}")));
            };
            batch.samples.push(sample);
        }
        Ok(batch)
    }
}

/// RNG for draw `i` of a batch seeded with `seed`.
pub fn draw_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(i);
    r
}

// ---------------------------------------------------------------------------
// Known modulus

/// Exact output distribution of Fourier sampling with known `N`: the binned `|ŵ^M|²`.
pub fn known_sample_distribution(state: &StateVector, r: usize, m: usize) -> Result<ProbDist> {
    let p = RepetitionParams::new(state.dim(), r, m)?;
    ProbDist::from_weights(approx_qft_zn(state, p)?.binned_distribution())
}

/// Samples `i ∈ [0, N)`: transform the `R`-fold repetition over `M`, measure `j`, round `j·N/M`.
pub fn fourier_sample_known<R: Rng + ?Sized>(
    state: &StateVector,
    r: usize,
    m: usize,
    rng: &mut R,
) -> Result<u64> {
    Ok(known_sample_distribution(state, r, m)?.sampler().draw(rng) as u64)
}

/// `count` draws of [`fourier_sample_known`], one derived stream per draw.
pub fn fourier_sample_known_batch(
    state: &StateVector,
    r: usize,
    m: usize,
    count: usize,
    seed: u64,
) -> Result<SampleBatch> {
    let sampler = known_sample_distribution(state, r, m)?.sampler();
    let samples = (0..count as u64)
        .into_par_iter()
        .map(|i| Sample::Index(sampler.draw(&mut draw_rng(seed, i)) as u64))
        .collect();
    let params = [("N", state.dim()), ("R", r), ("M", m)].iter().map(|(k, v)| (k.to_string(), *v as u64)).collect();
    Ok(SampleBatch { seed, params, samples })
}

// ---------------------------------------------------------------------------
// Unknown modulus

/// `Σ_{i<M} α_{i mod N}|i⟩`, normalized.
pub fn repeat_state(alpha: &StateVector, m: usize) -> Result<StateVector> {
    let n = alpha.dim();
    StateVector::normalized((0..m).map(|i| alpha.amps()[i % n]).collect())
}

/// Exact distribution of the fractions returned by [`fourier_sample_unknown`].
pub fn unknown_sample_distribution(state: &StateVector, t: u64) -> Result<BTreeMap<Fraction, f64>> {
    let m = state.dim();
    let p = distribution(&StateVector::from_raw(dft(state.amps()))?)?;
    let mut out = BTreeMap::new();
    for (k, &pk) in p.probs().iter().enumerate() {
        if pk > 0.0 {
            *out.entry(cf_round(&Fraction::new(k as u64, m as u64)?, t)?).or_insert(0.0) += pk;
        }
    }
    Ok(out)
}

/// Measures the transform over `M = dim(state)` and rounds `k/M` to a fraction with denominator below `t`.
pub fn fourier_sample_unknown<R: Rng + ?Sized>(state: &StateVector, t: u64, rng: &mut R) -> Result<Fraction> {
    let m = state.dim() as u64;
    let p = distribution(&StateVector::from_raw(dft(state.amps()))?)?;
    let k = p.sampler().draw(rng) as u64;
    cf_round(&Fraction::new(k, m)?, t)
}

// ---------------------------------------------------------------------------
// Periodic coset states

/// The state `Σ_{a∈A} Σ_{s: a+sN<M} |a + sN⟩` (normalized), sampled in the
/// Fourier basis over `Z_M` without materializing it.
#[derive(Debug, Clone)]
pub struct CosetState {
    n: u64,
    m: u64,
    offsets: Vec<u64>,
    counts: Vec<u64>,
    total: u64,
    g: u64,
    m_red: u64,
    inv: u64,
    cmax: u64,
    central: Vec<(i64, f64)>,
    central_weight: f64,
    tails: [(u64, u64, f64); 2],
}

/// `Σ_{r=a}^{b} 1/r²`.
fn inv_sq_sum(a: u64, b: u64) -> f64 {
    if a > b {
        return 0.0;
    }
    const DIRECT: u64 = 1 << 12;
    let tail_from = |x: f64| 1.0 / x + 1.0 / (2.0 * x * x) + 1.0 / (6.0 * x.powi(3)) - 1.0 / (30.0 * x.powi(5));
    if b - a <= DIRECT {
        return (a..=b).rev().map(|r| 1.0 / (r as f64 * r as f64)).sum();
    }
    let mid = a + DIRECT;
    let head: f64 = (a..mid).rev().map(|r| 1.0 / (r as f64 * r as f64)).sum();
    head + tail_from(mid as f64) - tail_from((b + 1) as f64)
}

/// `min(c², M'²/4r²)`, an upper bound on `|Σ_{s<c} e^{2πi s r/M'}|²`.
fn envelope(cmax: u64, m_red: u64, r: i64) -> f64 {
    let c2 = (cmax as f64).powi(2);
    if r == 0 {
        return c2;
    }
    let q = m_red as f64 / (2.0 * r.unsigned_abs() as f64);
    c2.min(q * q)
}

/// Draws `r ∈ [a, b]` with probability ∝ `1/r²` (requires `a ≥ 2`).
fn draw_inv_sq<R: Rng + ?Sized>(a: u64, b: u64, rng: &mut R) -> u64 {
    let (lo, hi) = ((a - 1) as f64, b as f64);
    loop {
        let u: f64 = rng.gen();
        let x = 1.0 / (1.0 / lo - u * (1.0 / lo - 1.0 / hi));
        let r = (x.ceil() as u64).clamp(a, b);
        // The continuous proposal gives r weight 1/(r(r−1)); thin it to 1/r².
        if rng.gen::<f64>() * r as f64 <= (r - 1) as f64 {
            return r;
        }
    }
}

impl CosetState {
    /// `offsets` must be distinct residues in `[0, N)` and `N ≤ M`.
    pub fn new(n: u64, m: u64, mut offsets: Vec<u64>) -> Result<Self> {
        if n == 0 || n > m {
            return Err(invalid(format!("need 1 ≤ N ≤ M, got N = {n}, M = {m}")));
        }
        offsets.sort_unstable();
        offsets.dedup();
        if offsets.is_empty() || *offsets.last().unwrap() >= n {
            return Err(invalid("offsets must be nonempty residues mod N"));
        }
        let counts: Vec<u64> = offsets.iter().map(|&a| (m - a).div_ceil(n)).collect();
        let total = counts.iter().sum();
        let cmax = *counts.iter().max().unwrap();
        let g = n.gcd(&m);
        let m_red = m / g;
        let inv = crate::qft_modn::mod_inverse((n / g) % m_red, m_red);
        let half = m_red / 2;
        let k0 = (m_red / (2 * cmax)).max(16).min(half);
        let lo = -((m_red.div_ceil(2) - 1).min(k0) as i64);
        let central: Vec<(i64, f64)> = (lo..=k0 as i64).map(|r| (r, envelope(cmax, m_red, r))).collect();
        let central_weight = central.iter().map(|x| x.1).sum();
        let scale = (m_red as f64).powi(2) / 4.0;
        let pos = (k0 + 1, half, scale * inv_sq_sum(k0 + 1, half));
        let neg_hi = m_red.div_ceil(2) - 1;
        let neg = (k0 + 1, neg_hi, scale * inv_sq_sum(k0 + 1, neg_hi));
        Ok(Self { n, m, offsets, counts, total, g, m_red, inv, cmax, central, central_weight, tails: [pos, neg] })
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// `Σ_{s<c} ω_M^{k s N}`.
    fn geometric(&self, phi: u64, c: u64) -> Complex64 {
        if phi == 0 {
            return Complex64::new(c as f64, 0.0);
        }
        let m = self.m as u128;
        let pi = std::f64::consts::PI;
        let num = (pi * ((c as u128 * phi as u128) % (2 * m)) as f64 / self.m as f64).sin();
        let den = (pi * phi as f64 / self.m as f64).sin();
        root_of_unity((((c - 1) as u128 * phi as u128) % (2 * m)) as i128, 2 * m) * (num / den)
    }

    /// Unnormalized amplitude `Σ_a ω_M^{ka} Σ_s ω_M^{ksN}`.
    fn raw_amplitude(&self, k: u64) -> Complex64 {
        let phi = ((k as u128 * self.n as u128) % self.m as u128) as u64;
        self.offsets
            .iter()
            .zip(&self.counts)
            .map(|(&a, &c)| {
                root_of_unity(((k as u128 * a as u128) % self.m as u128) as i128, self.m as u128)
                    * self.geometric(phi, c)
            })
            .sum()
    }

    /// Fourier amplitude at `k` of the normalized state.
    pub fn amplitude(&self, k: u64) -> Complex64 {
        self.raw_amplitude(k) / ((self.m as f64) * self.total as f64).sqrt()
    }

    pub fn probability(&self, k: u64) -> f64 {
        self.amplitude(k).norm_sqr()
    }

    fn draw_residue<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        let [pos, neg] = self.tails;
        let total = self.central_weight + pos.2 + neg.2;
        let mut u = rng.gen::<f64>() * total;
        if u < self.central_weight {
            for &(r, w) in &self.central {
                if u < w {
                    return r;
                }
                u -= w;
            }
            return self.central.last().unwrap().0;
        }
        u -= self.central_weight;
        if u < pos.2 {
            draw_inv_sq(pos.0, pos.1, rng) as i64
        } else if neg.2 > 0.0 {
            -(draw_inv_sq(neg.0, neg.1, rng) as i64)
        } else {
            self.central.last().unwrap().0
        }
    }

    /// Exact draw of a measurement outcome `k ∈ [0, M)` by rejection from a `min(c², 1/4θ²)` envelope.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let bound = (self.offsets.len() as f64).powi(2);
        loop {
            let r = self.draw_residue(rng);
            let rr = r.rem_euclid(self.m_red as i64) as u64;
            let k0 = ((rr as u128 * self.inv as u128) % self.m_red as u128) as u64;
            let k = k0 + rng.gen_range(0..self.g) * self.m_red;
            let w = self.raw_amplitude(k).norm_sqr();
            if rng.gen::<f64>() * bound * envelope(self.cmax, self.m_red, r) <= w {
                return k;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(n: i64, d: i64) -> Fraction {
        Fraction::new(n, d).unwrap()
    }

    #[test]
    fn reduces_and_orders() {
        assert_eq!(f(6, -8), f(-3, 4));
        assert!(f(1, 3) < f(1, 2));
        assert_eq!("10/4".parse::<Fraction>().unwrap(), f(5, 2));
        assert!("1/0".parse::<Fraction>().is_err());
        assert!("1/+2".parse::<Fraction>().is_err());
    }

    #[test]
    fn cf_round_examples() {
        assert_eq!(cf_round(&f(1, 3), 10).unwrap(), f(1, 3));
        assert_eq!(cf_round(&f(85, 256), 8).unwrap(), f(1, 3));
        assert_eq!(cf_round(&f(0, 1), 5).unwrap(), f(0, 1));
        assert_eq!(cf_round(&f(255, 256), 8).unwrap(), f(1, 1));
    }

    #[test]
    fn inv_sq_sum_matches_direct() {
        let direct: f64 = (5u64..=3_000_000).rev().map(|r| 1.0 / (r as f64).powi(2)).sum();
        assert!((inv_sq_sum(5, 3_000_000) - direct).abs() < 1e-14);
    }
}
