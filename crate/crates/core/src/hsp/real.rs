//! Periodic step functions on `ℝ` with rational period and breakpoints, the
//! continuous `D` metric, and period finding over `ℝ`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::index::sample as sample_indices;
use rand::Rng;

use super::oracle::QueryCounter;
use crate::dft::fft_pow2;
use crate::error::{invalid, Error, Result};
use crate::sampling::{cf_round, Fraction};
use crate::statevector::{ProbDist, Sampler};

/// Largest `M·N` that period finding over `ℝ` will tabulate.
pub const MAX_GRID: u64 = 1 << 24;

/// Most period repetitions [`distance_r`] will walk through.
pub const MAX_REPEATS: u64 = 1 << 16;

fn frac(n: impl Into<BigInt>, d: impl Into<BigInt>) -> Fraction {
    Fraction::new(n, d).expect("nonzero denominator")
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| invalid("rational too large for grid evaluation"))
}

/// `f : ℝ → [0, 1)` with values `v/2^bits`, stored as the integers `v`.
/// The step starting at `breakpoints[i]` carries `values[i]`; if the first
/// breakpoint is positive, `[0, breakpoints[0])` carries the last value.
#[derive(Debug, Clone)]
pub struct StepFunctionR {
    period: Fraction,
    breakpoints: Vec<Fraction>,
    values: Vec<u64>,
    bits: u32,
    pub queries: QueryCounter,
}

impl StepFunctionR {
    pub fn new(period: Fraction, breakpoints: Vec<Fraction>, values: Vec<u64>, bits: u32) -> Result<Self> {
        if !period.num().is_positive() {
            return Err(invalid("period must be positive"));
        }
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(invalid("need one value per breakpoint and at least one step"));
        }
        if bits == 0 || bits > 63 {
            return Err(invalid(format!("bits = {bits} must lie in 1..=63")));
        }
        if breakpoints[0].num().is_negative() || breakpoints.last().unwrap() >= &period {
            return Err(invalid("breakpoints must lie in [0, p)"));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("breakpoints must be strictly increasing"));
        }
        if let Some(v) = values.iter().find(|&&v| v >> bits != 0) {
            return Err(invalid(format!("value {v} has more than {bits} bits")));
        }
        Ok(Self { period, breakpoints, values, bits, queries: QueryCounter::default() })
    }

    /// Two equal steps with values `0` and `2^bits − 1`.
    pub fn square_wave(period: Fraction, bits: u32) -> Result<Self> {
        let half = &period / &frac(2, 1);
        Self::new(period, vec![Fraction::zero(), half], vec![0, (1 << bits) - 1], bits)
    }

    /// `steps` steps on a grid of spacing `min_step`, so every step is at least
    /// `min_step` long; neighbouring values differ.
    pub fn random<R: Rng + ?Sized>(period: Fraction, steps: usize, min_step: Fraction, bits: u32, rng: &mut R) -> Result<Self> {
        if steps == 0 || !min_step.num().is_positive() || bits < 2 {
            return Err(invalid("need steps ≥ 1, min_step > 0, bits ≥ 2"));
        }
        let slots = (&period / &min_step).floor().to_usize().unwrap_or(0);
        if slots < steps {
            return Err(invalid("period too short for that many steps"));
        }
        let mut starts: Vec<usize> = sample_indices(rng, slots - 1, steps - 1).into_iter().map(|s| s + 1).collect();
        starts.push(0);
        starts.sort_unstable();
        let breakpoints = starts.iter().map(|&s| &min_step * &Fraction::from_int(s as u64)).collect();
        let mut values: Vec<u64> = Vec::with_capacity(steps);
        for i in 0..steps {
            loop {
                let v = rng.gen_range(0..1u64 << bits);
                let prev_ok = i == 0 || values[i - 1] != v;
                let wrap_ok = i + 1 < steps || steps == 1 || values[0] != v;
                if prev_ok && wrap_ok {
                    values.push(v);
                    break;
                }
            }
        }
        Self::new(period, breakpoints, values, bits)
    }

    pub fn period(&self) -> &Fraction {
        &self.period
    }

    pub fn breakpoints(&self) -> &[Fraction] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn step_lengths(&self) -> Vec<Fraction> {
        let b = &self.breakpoints;
        let mut out: Vec<Fraction> = b.windows(2).map(|w| &w[1] - &w[0]).collect();
        out.push(&(&self.period - b.last().unwrap()) + &b[0]);
        out
    }

    pub fn min_step(&self) -> Fraction {
        self.step_lengths().into_iter().min().expect("at least one step")
    }

    /// `p` divided by the number of steps.
    pub fn avg_step(&self) -> Fraction {
        &self.period / &Fraction::from_int(self.values.len() as u64)
    }

    fn lookup(&self, r: &Fraction) -> u64 {
        let idx = self.breakpoints.partition_point(|b| b <= r);
        if idx == 0 {
            *self.values.last().unwrap()
        } else {
            self.values[idx - 1]
        }
    }

    /// `f(x)` without touching the query counter.
    pub fn peek(&self, x: &Fraction) -> u64 {
        let q = Fraction::from_int((x / &self.period).floor());
        let r = x - &(&q * &self.period);
        self.lookup(&r)
    }

    pub fn eval(&self, x: &Fraction) -> u64 {
        self.queries.bump();
        self.peek(x)
    }

    /// Leading `t` bits of `f(x)`, truncated.
    pub fn eval_t(&self, x: &Fraction, t: u32) -> u64 {
        self.eval(x) >> self.bits.saturating_sub(t)
    }

    /// `x ↦ f(αx)`.
    pub fn rescale(&self, alpha: &Fraction) -> Result<Self> {
        if !alpha.num().is_positive() {
            return Err(invalid("scale must be positive"));
        }
        let bp = self.breakpoints.iter().map(|b| b / alpha).collect();
        Self::new(&self.period / alpha, bp, self.values.clone(), self.bits)
    }

    /// `f(i/denom)` for `i ∈ [lo, lo + len)`, by integer arithmetic over a common denominator.
    pub fn grid_values(&self, denom: u64, lo: i64, len: usize) -> Result<Vec<u64>> {
        let mut d = self.period.den().clone();
        for b in &self.breakpoints {
            d = d.lcm(b.den());
        }
        let scale = |x: &Fraction| to_i128(&(x.num() * (&d / x.den()) * BigInt::from(denom)));
        let period = scale(&self.period)?;
        let bps = self.breakpoints.iter().map(scale).collect::<Result<Vec<_>>>()?;
        let dd = to_i128(&d)?;
        let top = (lo as i128 + len as i128).abs().max((lo as i128).abs());
        top.checked_mul(dd).ok_or_else(|| invalid("grid too fine for exact evaluation"))?;
        Ok((0..len as i128)
            .map(|i| {
                let r = ((lo as i128 + i) * dd).rem_euclid(period);
                let idx = bps.partition_point(|&b| b <= r);
                if idx == 0 {
                    *self.values.last().unwrap()
                } else {
                    self.values[idx - 1]
                }
            })
            .collect())
    }
}

/// `lcm(a/b, c/d) = lcm(a, c)/gcd(b, d)` for reduced positive fractions.
pub fn lcm_period(p: &Fraction, q: &Fraction) -> Fraction {
    frac(p.num().lcm(q.num()), p.den().gcd(q.den()))
}

/// Measure of `{x ∈ [0, L) : f_n(x) ≠ g_n(x)}` over `L`, `L` the lcm of the periods.
pub fn distance_r(f: &StepFunctionR, g: &StepFunctionR) -> Result<Fraction> {
    let l = lcm_period(&f.period, &g.period);
    let mut points = Vec::new();
    for h in [f, g] {
        let reps = (&l / &h.period).floor().to_u64().filter(|&r| r <= MAX_REPEATS).ok_or(Error::Incommensurable)?;
        for r in 0..reps {
            let base = &h.period * &Fraction::from_int(r);
            points.extend(h.breakpoints.iter().map(|b| &base + b));
        }
    }
    points.push(Fraction::zero());
    points.push(l.clone());
    points.sort();
    points.dedup();
    let mut diff = Fraction::zero();
    for w in points.windows(2) {
        if f.peek(&w[0]) != g.peek(&w[0]) {
            diff = &diff + &(&w[1] - &w[0]);
        }
    }
    Ok(&diff / &l)
}

// ---------------------------------------------------------------------------

/// Parameters for period finding over `ℝ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodRParams {
    /// `M`, a power of two.
    pub m: u64,
    /// `N`, a power of two above `M`; the grid spacing is `1/N`.
    pub n: u64,
    /// Ratios `k_1/k_i` are rounded to denominators below this.
    pub denom_bound: u64,
    /// Samples with `|k| <` this are discarded.
    pub threshold: u64,
    /// Samples with `|k| >` this are discarded: the range `(J/2^n)·M` in which the
    /// falloff bound keeps almost all mass, `J` the denominator bound.
    pub range: u64,
    pub samples: usize,
}

impl PeriodRParams {
    pub fn new(m: u64, n: u64, denom_bound: u64, threshold: u64, range: u64, samples: usize) -> Result<Self> {
        if !m.is_power_of_two() || !n.is_power_of_two() || n <= m {
            return Err(invalid(format!("M = {m}, N = {n}: need powers of two with N > M")));
        }
        if m.checked_mul(n).filter(|&g| g <= MAX_GRID).is_none() {
            return Err(Error::DimTooLarge { dim: m as u128 * n as u128, max: MAX_GRID as usize });
        }
        if denom_bound < 2 || samples == 0 {
            return Err(invalid("need denom_bound ≥ 2 and at least one sample"));
        }
        if range < threshold {
            return Err(invalid("range must not be below the threshold"));
        }
        Ok(Self { m, n, denom_bound, threshold, range, samples })
    }

    /// Desk-scale defaults from a sweep over `p ∈ {5/2, 7/3, 11/4}`: `M = 2^{min(n+6, 10)}`,
    /// `N = 16M`, denominator bound `J = 2^n`, threshold `M/2^{m+n}`, range `J·M/2^n`
    /// and `n²` samples.
    pub fn tuned(n_bits: u32, m_bits: u32) -> Result<Self> {
        if n_bits == 0 || n_bits > 20 {
            return Err(invalid(format!("n = {n_bits} must lie in 1..=20")));
        }
        let m = 1u64 << (n_bits + 6).min(10);
        let j = 1u64 << n_bits;
        let threshold = m.checked_shr(m_bits + n_bits).unwrap_or(0).max(1);
        Self::new(m, 16 * m, j, threshold, (m * j) >> n_bits, (n_bits * n_bits) as usize)
    }
}

/// `⌊log2 x⌋` and the `m` bits of `x` starting at its leading one.
pub fn leading_bits(x: &Fraction, m: u32) -> Result<(i64, u64)> {
    if !x.num().is_positive() || m == 0 || m > 63 {
        return Err(invalid("need x > 0 and 1 ≤ m ≤ 63"));
    }
    let e = (x.num().bits() as i64) - (x.den().bits() as i64);
    let pow = |k: i64| if k >= 0 { frac(BigInt::one() << k as usize, 1) } else { frac(1, BigInt::one() << (-k) as usize) };
    let e = if x < &pow(e) { e - 1 } else { e };
    let bits = (x / &pow(e - m as i64 + 1)).floor();
    Ok((e, bits.to_u64().expect("m bits")))
}

#[derive(Debug, Clone)]
pub struct PeriodROutcome {
    pub range: u64,
    pub estimate: Fraction,
    pub exponent: i64,
    pub leading: u64,
    pub j1: BigInt,
    pub k1: i64,
    pub valid: usize,
    pub discarded: usize,
    pub threshold: u64,
}

/// Exact outcome distribution of `F_{MN} Σ_{i ∈ ±MN/2} |i⟩|f(i/denom)⟩` over register indices.
pub fn fourier_distribution_r(f: &StepFunctionR, m: u64, denom: u64) -> Result<Vec<f64>> {
    let size = m.checked_mul(denom).filter(|&g| g <= MAX_GRID && g.is_power_of_two());
    let size = size.ok_or_else(|| invalid("M·N must be a power of two within the grid cap"))? as usize;
    let half = (size / 2) as i64;
    let vals = f.grid_values(denom, -half, size)?;
    let mut labels = vals.clone();
    labels.sort_unstable();
    labels.dedup();
    let a = 1.0 / (size as f64).sqrt();
    let mut total = vec![0.0; size];
    for v in labels {
        let mut buf = vec![Complex64::new(0.0, 0.0); size];
        for (j, &y) in vals.iter().enumerate() {
            if y == v {
                // Register index of i = j − MN/2.
                buf[(j + size / 2) % size] = Complex64::new(a, 0.0);
            }
        }
        for (t, z) in total.iter_mut().zip(fft_pow2(&buf)?) {
            *t += z.norm_sqr();
        }
    }
    Ok(total)
}

/// The quantum part of period finding over `ℝ`, tabulated once for repeated runs.
pub struct PeriodRSetup<'a> {
    f: &'a StepFunctionR,
    params: PeriodRParams,
    shift: u32,
    sampler: Sampler,
}

impl<'a> PeriodRSetup<'a> {
    /// Queries `f` on the grid `i/(N·2^k)`, which turns average step `2^{-k}` into `1`.
    pub fn new(f: &'a StepFunctionR, k: u32, params: PeriodRParams) -> Result<Self> {
        let denom = params.n.checked_shl(k).filter(|&d| d >> k == params.n).ok_or_else(|| invalid("k too large"))?;
        let dist = fourier_distribution_r(f, params.m, denom)?;
        Ok(Self { f, params, shift: k, sampler: ProbDist::from_weights(dist)?.sampler() })
    }

    pub fn params(&self) -> &PeriodRParams {
        &self.params
    }

    pub fn set_samples(&mut self, samples: usize) {
        self.params.samples = samples.max(1);
    }

    /// Signed Fourier sample `k ∈ [−MN/2, MN/2)`.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        self.f.queries.bump();
        let size = (self.params.m * self.params.n) as i64;
        let k = self.sampler.draw(rng) as i64;
        if k >= size / 2 {
            k - size
        } else {
            k
        }
    }

    /// Samples, discards small outcomes, rounds `k_1/k_i`, takes the lcm of the
    /// numerators as `j_1` and reports the leading `m` bits of `M·j_1/k_1`.
    pub fn run<R: Rng + ?Sized>(&self, m_bits: u32, rng: &mut R) -> Result<PeriodROutcome> {
        let p = &self.params;
        let draws: Vec<i64> = (0..p.samples).map(|_| self.draw(rng)).collect();
        let keep = |k: &i64| (p.threshold.max(1)..=p.range).contains(&k.unsigned_abs());
        let valid: Vec<i64> = draws.iter().copied().filter(keep).collect();
        let discarded = draws.len() - valid.len();
        let Some(&k1) = valid.first() else {
            return Err(Error::AlgorithmFailure("all samples discarded; retry".into()));
        };
        let mut j1 = BigInt::one();
        for &ki in &valid[1..] {
            let ratio = frac(k1.unsigned_abs(), ki.unsigned_abs());
            let whole = Fraction::from_int(ratio.floor());
            let rest = cf_round(&(&ratio - &whole), p.denom_bound)?;
            j1 = j1.lcm((&whole + &rest).num());
        }
        if j1.is_zero() {
            return Err(Error::AlgorithmFailure("a ratio rounded to zero; retry".into()));
        }
        let scale = frac(BigInt::one() << self.shift as usize, 1);
        let estimate = &(&frac(p.m, k1.unsigned_abs()) * &Fraction::from_int(j1.clone())) / &scale;
        let (exponent, leading) = leading_bits(&estimate, m_bits)?;
        Ok(PeriodROutcome { estimate, exponent, leading, j1, k1, valid: valid.len(), discarded, threshold: p.threshold, range: p.range })
    }
}

/// One full run; `n` bounds the period (`p < 2^n`) and `k` the average step (`≥ 2^{-k}`).
pub fn period_r<R: Rng + ?Sized>(
    f: &StepFunctionR,
    n: u32,
    k: u32,
    m: u32,
    params: PeriodRParams,
    rng: &mut R,
) -> Result<PeriodROutcome> {
    if n >= 63 || f.period() >= &Fraction::from_int(1u64 << n) {
        return Err(invalid(format!("period {} is not below 2^{n}", f.period())));
    }
    PeriodRSetup::new(f, k, params)?.run(m, rng)
}
