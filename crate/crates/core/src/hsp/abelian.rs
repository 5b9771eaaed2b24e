//! Fourier sampling over finite abelian groups and the hidden subgroup algorithm,
//! standard and relaxed, plus the reduction for `⊕ Z_{p_i} ⊕ Z^m`.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::Rng;

use super::group::{generators_of, perp_elements, GroupSpec, SubgroupSpec};
use super::oracle::{OracleAbelian, PeriodicZ};
use super::period::period_z;
use crate::dft::multi_dft;
use crate::error::{invalid, Result};
use crate::statevector::{ProbDist, Sampler};

/// Multiplier `c` in the `c·n²` (or `c·n²d²`) sample count.
pub const DEFAULT_SAMPLE_FACTOR: f64 = 4.0;

fn dims(group: &GroupSpec) -> Vec<usize> {
    group.orders().iter().map(|&p| p as usize).collect()
}

/// `|F_G 1_A|²/|G|` for the class `A` of elements carrying one label.
fn class_weights(members: &[usize], group: &GroupSpec, order: usize) -> Result<Vec<f64>> {
    let mut v = vec![Complex64::new(0.0, 0.0); order];
    let a = 1.0 / (order as f64).sqrt();
    for &x in members {
        v[x] = Complex64::new(a, 0.0);
    }
    Ok(multi_dft(&v, &dims(group))?.iter().map(|z| z.norm_sqr()).collect())
}

fn classes(table: &[u64]) -> BTreeMap<u64, Vec<usize>> {
    let mut out: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for (x, &v) in table.iter().enumerate() {
        out.entry(v).or_default().push(x);
    }
    out
}

/// Exact `D_{F_G|α⟩}` over `G` (row-major indices) for `|α⟩ = Σ_x |x⟩|f(x)⟩`.
pub fn exact_distribution(oracle: &OracleAbelian) -> Result<Vec<f64>> {
    let group = oracle.group();
    let order = oracle.table().len();
    let mut total = vec![0.0; order];
    for members in classes(oracle.table()).values() {
        for (t, w) in total.iter_mut().zip(class_weights(members, group, order)?) {
            *t += w;
        }
    }
    Ok(total)
}

/// Draws Fourier samples, caching the conditional distribution of each observed label.
pub struct FourierSampler<'a> {
    oracle: &'a OracleAbelian,
    classes: BTreeMap<u64, Vec<usize>>,
    cache: HashMap<u64, Sampler>,
}

impl<'a> FourierSampler<'a> {
    pub fn new(oracle: &'a OracleAbelian) -> Self {
        Self { oracle, classes: classes(oracle.table()), cache: HashMap::new() }
    }

    /// One superposition query, a measurement of the value register, `F_G`, then a
    /// measurement of the group register.
    pub fn draw<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Vec<u64>> {
        let table = self.oracle.superposition();
        let x = rng.gen_range(0..table.len());
        let v = table[x];
        if !self.cache.contains_key(&v) {
            let w = class_weights(&self.classes[&v], self.oracle.group(), table.len())?;
            self.cache.insert(v, ProbDist::from_weights(w)?.sampler());
        }
        let y = self.cache[&v].draw(rng);
        Ok(self.oracle.group().element(y))
    }
}

#[derive(Debug, Clone)]
pub struct HspResult {
    pub subgroup: SubgroupSpec,
    pub samples: Vec<Vec<u64>>,
    pub queries: u64,
}

/// Number of Fourier samples: `⌈c·n²·d²⌉` with `n = ⌈log2 |G|⌉` and `d = 1` when standard.
pub fn sample_count(order: usize, d: Option<u32>, c: f64) -> usize {
    let n = (order.max(2) as f64).log2().ceil();
    let d = d.unwrap_or(1) as f64;
    (c * n * n * d * d).ceil() as usize
}

pub fn hsp_abelian<R: Rng + ?Sized>(oracle: &OracleAbelian, rng: &mut R, relaxed_d: Option<u32>) -> Result<HspResult> {
    hsp_abelian_with(oracle, relaxed_d, DEFAULT_SAMPLE_FACTOR, rng)
}

/// Samples `D_{F_G|α⟩}` and returns the perp of the sampled span.
pub fn hsp_abelian_with<R: Rng + ?Sized>(
    oracle: &OracleAbelian,
    relaxed_d: Option<u32>,
    c: f64,
    rng: &mut R,
) -> Result<HspResult> {
    if !(c > 0.0) {
        return Err(invalid("sample factor must be positive"));
    }
    let group = oracle.group();
    let start = oracle.queries.get();
    let count = sample_count(oracle.table().len(), relaxed_d, c);
    let mut sampler = FourierSampler::new(oracle);
    let samples = (0..count).map(|_| sampler.draw(rng)).collect::<Result<Vec<_>>>()?;
    let spanned = SubgroupSpec::new(samples.clone(), group)?;
    let subgroup = generators_of(&perp_elements(&spanned, group)?, group)?;
    Ok(HspResult { subgroup, samples, queries: oracle.queries.get() - start })
}

// ---------------------------------------------------------------------------

/// `f` on `⊕ Z_{p_i} ⊕ Z^m`, stored as a finite oracle over `⊕ Z_{p_i} ⊕ Z_{N_j}`
/// where `N_j e_j` lies in the hidden subgroup.
#[derive(Debug, Clone)]
pub struct OracleFg {
    finite: Vec<u64>,
    quotient: OracleAbelian,
}

impl OracleFg {
    /// `quotient` is over `finite ++ z_periods`.
    pub fn new(finite: Vec<u64>, quotient: OracleAbelian) -> Result<Self> {
        let orders = quotient.group().orders();
        if orders.len() < finite.len() || orders[..finite.len()] != finite[..] {
            return Err(invalid("quotient group must start with the finite orders"));
        }
        Ok(Self { finite, quotient })
    }

    pub fn free_rank(&self) -> usize {
        self.quotient.group().orders().len() - self.finite.len()
    }

    fn reduce(&self, g: &[i64]) -> Vec<u64> {
        g.iter().zip(self.quotient.group().orders()).map(|(&x, &p)| x.rem_euclid(p as i64) as u64).collect()
    }

    pub fn eval(&self, g: &[i64]) -> u64 {
        self.quotient.query(&self.reduce(g))
    }

    /// Ground truth generators over `Z^{k+m}`; tests only.
    pub fn hidden(&self) -> Vec<Vec<i64>> {
        lift(&self.quotient.hidden().generators, self.finite.len(), self.quotient.group().orders())
    }
}

fn lift(gens: &[Vec<u64>], k: usize, orders: &[u64]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = gens.iter().map(|g| g.iter().map(|&x| x as i64).collect()).collect();
    for (j, &nj) in orders.iter().enumerate().skip(k) {
        let mut e = vec![0i64; orders.len()];
        e[j] = nj as i64;
        out.push(e);
    }
    out
}

#[derive(Debug, Clone)]
pub struct FgResult {
    pub periods: Vec<u64>,
    pub generators: Vec<Vec<i64>>,
}

/// Finds the period `N_j` of `f` along each `Z` axis, then solves the finite
/// problem on `⊕ Z_{p_i} ⊕ Z_{N_j}` and adds `N_j e_j` to its generators.
pub fn hsp_finitely_generated<R: Rng + ?Sized>(oracle: &OracleFg, t: u64, rng: &mut R) -> Result<FgResult> {
    let k = oracle.finite.len();
    let width = k + oracle.free_rank();
    let mut periods = Vec::new();
    for j in k..width {
        let bound = oracle.quotient.group().orders()[j];
        let axis: Vec<u64> = (0..bound as i64)
            .map(|x| {
                let mut g = vec![0i64; width];
                g[j] = x;
                oracle.eval(&g)
            })
            .collect();
        periods.push(period_z(&PeriodicZ::from_values(axis)?, t, rng, None)?.period);
    }
    let mut orders = oracle.finite.clone();
    orders.extend(&periods);
    let group = GroupSpec::finite(orders.clone())?;
    let order = group.enumerable(super::oracle::MAX_ORACLE_GROUP)?;
    let table: Vec<u64> = (0..order)
        .map(|i| oracle.eval(&group.element(i).iter().map(|&x| x as i64).collect::<Vec<_>>()))
        .collect();
    let finite = OracleAbelian::from_table(group, table, oracle.quotient.ambiguity())?;
    let res = hsp_abelian(&finite, rng, oracle.quotient.ambiguity())?;
    Ok(FgResult { generators: lift(&res.subgroup.generators, k, &orders), periods })
}
