//! Black-box hidden-subgroup oracles with atomic query counters.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, Ordering};

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

use super::distance::{separation_finite, separation_z};
use super::group::{GroupSpec, SubgroupSpec};
use crate::error::{invalid, Error, Result};
use crate::sampling::Fraction;

/// Largest group an abelian oracle may be tabulated over.
pub const MAX_ORACLE_GROUP: u128 = 1 << 20;

/// Counts oracle invocations; a superposition query counts once.
#[derive(Debug, Default)]
pub struct QueryCounter(AtomicU64);

impl QueryCounter {
    pub fn get(&self) -> u64 {
        self.0.load(Ordering::Relaxed)
    }

    pub(crate) fn bump(&self) {
        self.0.fetch_add(1, Ordering::Relaxed);
    }

    pub fn reset(&self) {
        self.0.store(0, Ordering::Relaxed);
    }
}

impl Clone for QueryCounter {
    fn clone(&self) -> Self {
        Self(AtomicU64::new(self.get()))
    }
}

/// Fresh distinct labels, one per class, in random order.
fn random_labels<R: Rng + ?Sized>(classes: usize, rng: &mut R) -> Vec<u64> {
    let mut labels: Vec<u64> = (0..classes as u64).collect();
    labels.shuffle(rng);
    labels
}

/// Merges pairs of labels at random while `keep` accepts the merged table.
/// Stops after `target` merges or when every attempt has been tried.
fn merge_labels<R: Rng + ?Sized>(
    table: &mut [u64],
    target: usize,
    rng: &mut R,
    keep: impl Fn(&[u64]) -> bool,
) -> usize {
    let mut merges = 0;
    let mut attempts = 0;
    let distinct: BTreeSet<u64> = table.iter().copied().collect();
    let budget = 4 * distinct.len();
    while merges < target && attempts < budget {
        attempts += 1;
        let labels: Vec<u64> = table.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        if labels.len() < 2 {
            break;
        }
        let pick: Vec<&u64> = labels.choose_multiple(rng, 2).collect();
        let (from, to) = (*pick[0], *pick[1]);
        let trial: Vec<u64> = table.iter().map(|&v| if v == from { to } else { v }).collect();
        if keep(&trial) {
            table.copy_from_slice(&trial);
            merges += 1;
        }
    }
    merges
}

// ---------------------------------------------------------------------------

/// `f : {0,1}^n → {0,1}^n` with `f(x) = f(x ⊕ b)`.
#[derive(Debug, Clone)]
pub struct OracleZ2n {
    n: u32,
    table: Vec<u64>,
    hidden: u64,
    pub queries: QueryCounter,
}

impl OracleZ2n {
    pub const MAX_BITS: u32 = 20;

    fn check_bits(n: u32) -> Result<()> {
        if n == 0 || n > Self::MAX_BITS {
            return Err(invalid(format!("n = {n} must lie in 1..={}", Self::MAX_BITS)));
        }
        Ok(())
    }

    /// Random function that is 2-1 on the cosets of `{0, b}` (1-1 when `b = 0`).
    pub fn from_secret<R: Rng + ?Sized>(n: u32, b: u64, rng: &mut R) -> Result<Self> {
        Self::check_bits(n)?;
        let size = 1u64 << n;
        if b >= size {
            return Err(invalid(format!("secret {b} has more than {n} bits")));
        }
        let mut table = vec![u64::MAX; size as usize];
        let mut labels = random_labels(size as usize, rng).into_iter();
        for x in 0..size {
            if table[x as usize] == u64::MAX {
                let l = labels.next().expect("enough labels");
                table[x as usize] = l;
                table[(x ^ b) as usize] = l;
            }
        }
        Ok(Self { n, table, hidden: b, queries: QueryCounter::default() })
    }

    /// Validates the promise and recovers `b` by brute force.
    pub fn from_table(n: u32, table: Vec<u64>) -> Result<Self> {
        Self::check_bits(n)?;
        let size = 1usize << n;
        if table.len() != size {
            return Err(Error::InconsistentOracle(format!("table has {} entries, expected {size}", table.len())));
        }
        if let Some(v) = table.iter().find(|&&v| v >= size as u64) {
            return Err(Error::InconsistentOracle(format!("value {v} has more than {n} bits")));
        }
        let b = (1..size).find(|&x| table[x] == table[0]).unwrap_or(0) as u64;
        let mut count: BTreeMap<u64, usize> = BTreeMap::new();
        for &v in &table {
            *count.entry(v).or_default() += 1;
        }
        let want = if b == 0 { 1 } else { 2 };
        let ok = count.values().all(|&c| c == want) && (0..size).all(|x| table[x] == table[x ^ b as usize]);
        if !ok {
            return Err(Error::InconsistentOracle("f is neither 1-1 nor 2-1 on cosets of a single {0, b}".into()));
        }
        Ok(Self { n, table, hidden: b, queries: QueryCounter::default() })
    }

    pub fn bits(&self) -> u32 {
        self.n
    }

    /// Ground truth; tests only.
    pub fn hidden(&self) -> u64 {
        self.hidden
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn query(&self, x: u64) -> u64 {
        self.queries.bump();
        self.table[x as usize]
    }

    /// One superposition query: the full graph of `f`.
    pub(crate) fn superposition(&self) -> &[u64] {
        self.queries.bump();
        &self.table
    }
}

// ---------------------------------------------------------------------------

/// `f_H` on a finite abelian group, tabulated row-major.
#[derive(Debug, Clone)]
pub struct OracleAbelian {
    group: GroupSpec,
    table: Vec<u64>,
    hidden: SubgroupSpec,
    distinct_cosets: bool,
    d: Option<u32>,
    pub queries: QueryCounter,
}

impl OracleAbelian {
    fn coset_table<R: Rng + ?Sized>(group: &GroupSpec, hidden: &SubgroupSpec, rng: &mut R) -> Result<Vec<u64>> {
        let order = group.enumerable(MAX_ORACLE_GROUP)?;
        let h = hidden.span(group)?;
        let mut table = vec![u64::MAX; order];
        let mut labels = random_labels(order / h.len(), rng).into_iter();
        for x in 0..order {
            if table[x] == u64::MAX {
                let l = labels.next().expect("one label per coset");
                let gx = group.element(x);
                for &hi in &h {
                    table[group.index(&group.add(&gx, &group.element(hi)))] = l;
                }
            }
        }
        Ok(table)
    }

    /// Constant and distinct on the cosets of `hidden`.
    pub fn from_subgroup<R: Rng + ?Sized>(group: GroupSpec, hidden: SubgroupSpec, rng: &mut R) -> Result<Self> {
        let table = Self::coset_table(&group, &hidden, rng)?;
        Ok(Self { group, table, hidden, distinct_cosets: true, d: None, queries: QueryCounter::default() })
    }

    /// Starts from distinct coset labels and merges labels while `f` stays in `C_{1/d}`.
    pub fn relaxed<R: Rng + ?Sized>(group: GroupSpec, hidden: SubgroupSpec, d: u32, rng: &mut R) -> Result<Self> {
        if d == 0 {
            return Err(invalid("d must be positive"));
        }
        let mut table = Self::coset_table(&group, &hidden, rng)?;
        let bound = Fraction::new(1, d)?;
        let keep = |t: &[u64]| separation_finite(t, &group, &hidden).map(|s| s > bound).unwrap_or(false);
        if !keep(&table) {
            return Err(invalid(format!("no labelling of these cosets lies in C_1/{d}")));
        }
        let classes = table.iter().collect::<BTreeSet<_>>().len();
        let merges = merge_labels(&mut table, classes / 2, rng, keep);
        Ok(Self {
            group,
            table,
            hidden,
            distinct_cosets: merges == 0,
            d: Some(d),
            queries: QueryCounter::default(),
        })
    }

    /// Takes an explicit table and recovers the stabilizer `H = {h : f(x + h) = f(x) ∀x}`.
    pub fn from_table(group: GroupSpec, table: Vec<u64>, d: Option<u32>) -> Result<Self> {
        let order = group.enumerable(MAX_ORACLE_GROUP)?;
        if table.len() != order {
            return Err(Error::InconsistentOracle(format!("table has {} entries, expected {order}", table.len())));
        }
        let stab: Vec<usize> = (0..order)
            .filter(|&h| table[h] == table[0])
            .filter(|&h| {
                let gh = group.element(h);
                (0..order).all(|x| table[group.index(&group.add(&group.element(x), &gh))] == table[x])
            })
            .collect();
        let hidden = super::group::generators_of(&stab, &group)?;
        let classes = table.iter().collect::<BTreeSet<_>>().len();
        let distinct_cosets = classes * stab.len() == order;
        if let Some(d) = d {
            let s = separation_finite(&table, &group, &hidden)?;
            if s <= Fraction::new(1, d)? {
                return Err(Error::InconsistentOracle(format!("separation {s} is not above 1/{d}")));
            }
        } else if !distinct_cosets {
            return Err(Error::InconsistentOracle("labels are not distinct on cosets; give relaxed_d".into()));
        }
        Ok(Self { group, table, hidden, distinct_cosets, d, queries: QueryCounter::default() })
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    /// Ground truth; tests only.
    pub fn hidden(&self) -> &SubgroupSpec {
        &self.hidden
    }

    pub fn distinct_cosets(&self) -> bool {
        self.distinct_cosets
    }

    pub fn ambiguity(&self) -> Option<u32> {
        self.d
    }

    pub fn table(&self) -> &[u64] {
        &self.table
    }

    pub fn query(&self, g: &[u64]) -> u64 {
        self.queries.bump();
        self.table[self.group.index(g)]
    }

    pub(crate) fn superposition(&self) -> &[u64] {
        self.queries.bump();
        &self.table
    }
}

// ---------------------------------------------------------------------------

/// Periodic `f : Z → Z` given by its values on one period.
#[derive(Debug, Clone)]
pub struct PeriodicZ {
    values: Vec<u64>,
    period: u64,
    pub queries: QueryCounter,
}

impl PeriodicZ {
    /// The table may repeat internally; the period is the smallest shift that fixes it.
    pub fn from_values(values: Vec<u64>) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return Err(invalid("empty period table"));
        }
        let period = (1..=n)
            .filter(|q| n % q == 0)
            .find(|&q| (0..n).all(|x| values[x] == values[(x + q) % n]))
            .expect("n itself fixes the table") as u64;
        let values = values[..period as usize].to_vec();
        Ok(Self { values, period, queries: QueryCounter::default() })
    }

    /// 1-1 within the period.
    pub fn one_to_one<R: Rng + ?Sized>(period: u64, rng: &mut R) -> Result<Self> {
        if period == 0 {
            return Err(invalid("period must be positive"));
        }
        Self::from_values(random_labels(period as usize, rng))
    }

    /// Starts 1-1 and merges values while `f` stays in `C_{1/d}`.
    pub fn relaxed<R: Rng + ?Sized>(period: u64, d: u32, rng: &mut R) -> Result<Self> {
        if period == 0 || d == 0 {
            return Err(invalid("period and d must be positive"));
        }
        let mut values = random_labels(period as usize, rng);
        let bound = Fraction::new(1, d)?;
        merge_labels(&mut values, period as usize / 2, rng, |t| separation_z(t) > bound);
        Self::from_values(values)
    }

    /// Ground truth; tests only.
    pub fn period(&self) -> u64 {
        self.period
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn is_one_to_one(&self) -> bool {
        self.values.iter().collect::<BTreeSet<_>>().len() == self.values.len()
    }

    pub fn eval(&self, x: i64) -> u64 {
        self.queries.bump();
        self.peek(x)
    }

    pub(crate) fn peek(&self, x: i64) -> u64 {
        self.values[x.mod_floor(&(self.period as i64)) as usize]
    }

    /// One superposition query over `[0, M)` followed by measuring the value register:
    /// the residues mod the period that share the observed value.
    pub(crate) fn measured_coset<R: Rng + ?Sized>(&self, m: u64, rng: &mut R) -> Vec<u64> {
        self.queries.bump();
        let x = rng.gen_range(0..m);
        let v = self.peek(x as i64);
        (0..self.period).filter(|&r| self.values[r as usize] == v).collect()
    }
}
