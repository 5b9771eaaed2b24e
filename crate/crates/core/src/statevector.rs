//! Dense statevectors, measurement distributions and distances.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest amplitude count any operation will allocate.
pub const DEFAULT_MAX_DIM: usize = 1 << 26;

/// Tolerance on the squared norm when an input must be normalized.
pub const INPUT_NORM_TOL: f64 = 1e-6;

/// Tolerance used by self-checks on freshly computed states.
pub const SELF_NORM_TOL: f64 = 1e-9;

const PAR_THRESHOLD: usize = 1 << 14;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amp: Vec<Complex64>,
}

impl StateVector {
    /// Wraps amplitudes after checking the squared norm is 1 within [`INPUT_NORM_TOL`].
    pub fn new(amp: Vec<Complex64>) -> Result<Self> {
        let s = Self::from_raw(amp)?;
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(s)
    }

    /// Wraps amplitudes with no norm check (sub-unit vectors, residuals).
    pub fn from_raw(amp: Vec<Complex64>) -> Result<Self> {
        if amp.is_empty() {
            return Err(Error::InvalidParameter("dim must be at least 1".into()));
        }
        if amp.len() > DEFAULT_MAX_DIM {
            return Err(Error::DimTooLarge { dim: amp.len() as u128, max: DEFAULT_MAX_DIM });
        }
        Ok(Self { amp })
    }

    /// Scales `amp` to unit norm. Fails on the zero vector.
    pub fn normalized(mut amp: Vec<Complex64>) -> Result<Self> {
        let n = amp.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if n == 0.0 {
            return Err(Error::NotNormalized { norm_sqr: 0.0 });
        }
        amp.iter_mut().for_each(|a| *a /= n);
        Self::from_raw(amp)
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidParameter(format!("basis index {index} >= dim {dim}")));
        }
        let mut amp = vec![Complex64::new(0.0, 0.0); dim];
        amp[index] = Complex64::new(1.0, 0.0);
        Self::from_raw(amp)
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        let a = 1.0 / (dim as f64).sqrt();
        Self::from_raw(vec![Complex64::new(a, 0.0); dim])
    }

    /// Haar-like random unit vector: i.i.d. Gaussian components, normalized.
    pub fn random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<Self> {
        let amp = (0..dim).map(|_| Complex64::new(gaussian(rng), gaussian(rng))).collect();
        Self::normalized(amp)
    }

    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amp
    }

    pub fn amps_mut(&mut self) -> &mut [Complex64] {
        &mut self.amp
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amp
    }

    pub fn norm_sqr(&self) -> f64 {
        if self.amp.len() >= PAR_THRESHOLD {
            self.amp.par_iter().map(|a| a.norm_sqr()).sum()
        } else {
            self.amp.iter().map(|a| a.norm_sqr()).sum()
        }
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amp.iter().zip(&other.amp).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Standard normal variate via Box–Muller.
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Euclidean distance between two amplitude slices of equal length.
pub fn l2_distance_slices(a: &[Complex64], b: &[Complex64]) -> Result<f64> {
    check_dims(a.len(), b.len())?;
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt())
}

pub fn l2_distance(a: &StateVector, b: &StateVector) -> Result<f64> {
    l2_distance_slices(&a.amp, &b.amp)
}

/// Probability distribution over `0..len`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist {
    p: Vec<f64>,
}

impl ProbDist {
    /// Accepts weights summing to 1 within `1e-9`.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidParameter("empty distribution".into()));
        }
        if p.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
            return Err(Error::InvalidParameter("negative or non-finite probability".into()));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > SELF_NORM_TOL {
            return Err(Error::InvalidParameter(format!("probabilities sum to {s}")));
        }
        Ok(Self { p })
    }

    /// Normalizes nonnegative weights with positive total.
    pub fn from_weights(mut w: Vec<f64>) -> Result<Self> {
        let s: f64 = w.iter().sum();
        if !(s > 0.0) {
            return Err(Error::InvalidParameter("weights have no mass".into()));
        }
        w.iter_mut().for_each(|x| *x /= s);
        Self::new(w)
    }

    pub fn point_mass(len: usize, at: usize) -> Result<Self> {
        if at >= len {
            return Err(Error::InvalidParameter(format!("point mass {at} outside 0..{len}")));
        }
        let mut p = vec![0.0; len];
        p[at] = 1.0;
        Self::new(p)
    }

    pub fn support_size(&self) -> usize {
        self.p.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.p
    }

    /// Cumulative table for repeated draws.
    pub fn sampler(&self) -> Sampler {
        let mut acc = 0.0;
        let cdf = self
            .p
            .iter()
            .map(|&x| {
                acc += x;
                acc
            })
            .collect();
        Sampler { cdf }
    }
}

/// Inverse-CDF sampler built from a [`ProbDist`].
#[derive(Debug, Clone)]
pub struct Sampler {
    cdf: Vec<f64>,
}

impl Sampler {
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().unwrap();
        let u = rng.gen::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.cdf.len() - 1)
    }
}

pub fn distribution(a: &StateVector) -> Result<ProbDist> {
    let n2 = a.norm_sqr();
    if (n2 - 1.0).abs() > INPUT_NORM_TOL {
        return Err(Error::NotNormalized { norm_sqr: n2 });
    }
    ProbDist::new(a.amp.iter().map(|x| x.norm_sqr() / n2).collect())
}

pub fn sample<R: Rng + ?Sized>(d: &ProbDist, rng: &mut R) -> usize {
    d.sampler().draw(rng)
}

pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    tensor_with_limit(a, b, DEFAULT_MAX_DIM)
}

/// Tensor product with an explicit dimension cap.
pub fn tensor_with_limit(a: &StateVector, b: &StateVector, max_dim: usize) -> Result<StateVector> {
    let dim = a.dim() as u128 * b.dim() as u128;
    if dim > max_dim as u128 {
        return Err(Error::DimTooLarge { dim, max: max_dim });
    }
    let mut amp = Vec::with_capacity(dim as usize);
    for x in &a.amp {
        amp.extend(b.amp.iter().map(|y| x * y));
    }
    StateVector::from_raw(amp)
}

/// Σ|p_i − q_i|, padding the shorter distribution with zeros.
pub fn l1_distance(d1: &ProbDist, d2: &ProbDist) -> f64 {
    l1_distance_slices(&d1.p, &d2.p)
}

pub fn l1_distance_slices(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    (0..n)
        .map(|i| (p.get(i).copied().unwrap_or(0.0) - q.get(i).copied().unwrap_or(0.0)).abs())
        .sum()
}

/// |x|_N = min(x mod N, N − x mod N) for real x.
pub fn mod_distance(x: f64, n: f64) -> f64 {
    let r = x.rem_euclid(n);
    r.min(n - r)
}

/// Integer |x|_N.
pub fn mod_distance_int(x: i128, n: u64) -> u64 {
    let r = x.rem_euclid(n as i128) as u64;
    r.min(n - r)
}

/// `e^{2πi num/den}` with the argument reduced exactly before the float conversion.
pub fn root_of_unity(num: i128, den: u128) -> Complex64 {
    let r = num.rem_euclid(den as i128) as f64 / den as f64;
    Complex64::from_polar(1.0, std::f64::consts::TAU * r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn hadamard_distance() {
        let zero = StateVector::basis(2, 0).unwrap();
        let h = StateVector::uniform(2).unwrap();
        let d = l2_distance(&zero, &h).unwrap();
        assert!((d - (2.0 - 2f64.sqrt()).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn l1_padding() {
        let a = ProbDist::new(vec![0.5, 0.5]).unwrap();
        let b = ProbDist::new(vec![0.75, 0.25]).unwrap();
        assert!((l1_distance(&a, &b) - 0.5).abs() < 1e-15);
        let c = ProbDist::new(vec![0.5, 0.25, 0.25]).unwrap();
        assert!((l1_distance(&a, &c) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sampler_skips_zero_cells() {
        let d = ProbDist::new(vec![0.0, 0.0, 1.0, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            assert_eq!(sample(&d, &mut rng), 2);
        }
    }

    #[test]
    fn dim_cap() {
        let a = StateVector::uniform(8).unwrap();
        assert!(matches!(tensor_with_limit(&a, &a, 32), Err(Error::DimTooLarge { .. })));
    }
}
