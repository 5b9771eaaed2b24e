//! Text description of an oracle: `key=value` tokens separated by whitespace or
//! newlines, `#` starting a comment. Example:
//!
//! ```text
//! kind=abelian
//! orders=3,5
//! subgroup=1,0
//! seed=7
//! ```
//!
//! | kind         | keys                                                                  |
//! |--------------|-----------------------------------------------------------------------|
//! | `simon`      | `n`, then `table=v,...` or `secret=b seed=s`                          |
//! | `abelian`    | `orders=p,...`, then `table=v,...` or `subgroup=g;g seed=s`, optional `relaxed_d` |
//! | `periodic_z` | `table=v,...` or `period=N seed=s`, optional `relaxed_d`              |
//! | `step_r`     | `period=a/b breakpoints=x,... values=v,... bits=n`                    |

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::group::{GroupSpec, SubgroupSpec};
use super::oracle::{OracleAbelian, OracleZ2n, PeriodicZ};
use super::real::StepFunctionR;
use crate::error::{Error, Result};
use crate::sampling::Fraction;

/// Longest period a `periodic_z` description may generate.
pub const MAX_PERIOD: u64 = 1 << 20;

/// Most steps a `step_r` description may list.
pub const MAX_STEPS: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleSpec {
    Simon { n: u32, table: Option<Vec<u64>>, secret: u64, seed: u64 },
    Abelian { orders: Vec<u64>, table: Option<Vec<u64>>, subgroup: Vec<Vec<u64>>, seed: u64, relaxed_d: Option<u32> },
    PeriodicZ { table: Option<Vec<u64>>, period: u64, seed: u64, relaxed_d: Option<u32> },
    StepR { period: Fraction, breakpoints: Vec<Fraction>, values: Vec<u64>, bits: u32 },
}

#[derive(Debug, Clone)]
pub enum Oracle {
    Simon(OracleZ2n),
    Abelian(OracleAbelian),
    PeriodicZ(PeriodicZ),
    StepR(StepFunctionR),
}

struct Fields {
    map: BTreeMap<String, (usize, String)>,
    last_line: usize,
}

impl Fields {
    fn err(line: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line, msg: msg.into() }
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn required(&mut self, key: &str) -> Result<(usize, String)> {
        self.take(key).ok_or_else(|| Self::err(self.last_line, format!("missing key `{key}`")))
    }

    fn num<T: std::str::FromStr>(line: usize, key: &str, s: &str) -> Result<T> {
        s.parse().map_err(|_| Self::err(line, format!("`{key}`: cannot parse `{s}`")))
    }

    fn list<T: std::str::FromStr>(line: usize, key: &str, s: &str) -> Result<Vec<T>> {
        if s.is_empty() {
            return Ok(Vec::new());
        }
        s.split(',').map(|x| Self::num(line, key, x)).collect()
    }

    fn opt_num<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.take(key).map(|(l, s)| Self::num(l, key, &s)).transpose()
    }

    fn req_num<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (l, s) = self.required(key)?;
        Self::num(l, key, &s)
    }

    fn opt_list<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>> {
        self.take(key).map(|(l, s)| Self::list(l, key, &s)).transpose()
    }

    fn finish(self) -> Result<()> {
        match self.map.into_iter().next() {
            Some((k, (l, _))) => Err(Self::err(l, format!("unexpected key `{k}`"))),
            None => Ok(()),
        }
    }
}

fn tokenize(text: &str) -> Result<Fields> {
    let mut map = BTreeMap::new();
    let mut last_line = 1;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let body = line.split('#').next().unwrap_or("");
        for tok in body.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| Fields::err(line_no, format!("expected key=value, got `{tok}`")))?;
            if k.is_empty() {
                return Err(Fields::err(line_no, "empty key"));
            }
            if map.insert(k.to_string(), (line_no, v.to_string())).is_some() {
                return Err(Fields::err(line_no, format!("duplicate key `{k}`")));
            }
            last_line = line_no;
        }
    }
    Ok(Fields { map, last_line })
}

impl OracleSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let mut f = tokenize(text)?;
        let (kl, kind) = f.required("kind")?;
        let spec = match kind.as_str() {
            "simon" => {
                let n = f.req_num("n")?;
                let table = f.opt_list("table")?;
                let (secret, seed) = if table.is_some() { (0, 0) } else { (f.req_num("secret")?, f.req_num("seed")?) };
                OracleSpec::Simon { n, table, secret, seed }
            }
            "abelian" => {
                let (ol, os) = f.required("orders")?;
                let orders = Fields::list(ol, "orders", &os)?;
                let table = f.opt_list("table")?;
                let relaxed_d = f.opt_num("relaxed_d")?;
                let (subgroup, seed) = if table.is_some() {
                    (Vec::new(), 0)
                } else {
                    let (sl, ss) = f.required("subgroup")?;
                    let gens = if ss.is_empty() {
                        Vec::new()
                    } else {
                        ss.split(';').map(|g| Fields::list(sl, "subgroup", g)).collect::<Result<_>>()?
                    };
                    (gens, f.req_num("seed")?)
                };
                OracleSpec::Abelian { orders, table, subgroup, seed, relaxed_d }
            }
            "periodic_z" => {
                let table = f.opt_list("table")?;
                let relaxed_d = f.opt_num("relaxed_d")?;
                let (period, seed) = if table.is_some() { (0, 0) } else { (f.req_num("period")?, f.req_num("seed")?) };
                OracleSpec::PeriodicZ { table, period, seed, relaxed_d }
            }
            "step_r" => {
                let period = f.req_num("period")?;
                let (bl, bs) = f.required("breakpoints")?;
                let breakpoints = Fields::list(bl, "breakpoints", &bs)?;
                let (vl, vs) = f.required("values")?;
                let values = Fields::list(vl, "values", &vs)?;
                let bits = f.req_num("bits")?;
                OracleSpec::StepR { period, breakpoints, values, bits }
            }
            other => return Err(Fields::err(kl, format!("unknown kind `{other}`"))),
        };
        f.finish()?;
        Ok(spec)
    }

    pub fn to_text(&self) -> String {
        fn join<T: ToString>(xs: &[T]) -> String {
            xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        let mut s = String::new();
        match self {
            OracleSpec::Simon { n, table, secret, seed } => {
                let _ = writeln!(s, "kind=simon\nn={n}");
                match table {
                    Some(t) => {
                        let _ = writeln!(s, "table={}", join(t));
                    }
                    None => {
                        let _ = writeln!(s, "secret={secret}\nseed={seed}");
                    }
                }
            }
            OracleSpec::Abelian { orders, table, subgroup, seed, relaxed_d } => {
                let _ = writeln!(s, "kind=abelian\norders={}", join(orders));
                match table {
                    Some(t) => {
                        let _ = writeln!(s, "table={}", join(t));
                    }
                    None => {
                        let gens: Vec<String> = subgroup.iter().map(|g| join(g)).collect();
                        let _ = writeln!(s, "subgroup={}\nseed={seed}", gens.join(";"));
                    }
                }
                if let Some(d) = relaxed_d {
                    let _ = writeln!(s, "relaxed_d={d}");
                }
            }
            OracleSpec::PeriodicZ { table, period, seed, relaxed_d } => {
                let _ = writeln!(s, "kind=periodic_z");
                match table {
                    Some(t) => {
                        let _ = writeln!(s, "table={}", join(t));
                    }
                    None => {
                        let _ = writeln!(s, "period={period}\nseed={seed}");
                    }
                }
                if let Some(d) = relaxed_d {
                    let _ = writeln!(s, "relaxed_d={d}");
                }
            }
            OracleSpec::StepR { period, breakpoints, values, bits } => {
                let _ = writeln!(
                    s,
                    "kind=step_r\nperiod={period}\nbreakpoints={}\nvalues={}\nbits={bits}",
                    join(breakpoints),
                    join(values)
                );
            }
        }
        s
    }

    /// Reconstructs the oracle; generated tables are reproducible from the seed.
    pub fn build(&self) -> Result<Oracle> {
        let wrap = |e: Error| match e {
            Error::InconsistentOracle(_) => e,
            other => Error::InconsistentOracle(other.to_string()),
        };
        let oracle = match self {
            OracleSpec::Simon { n, table: Some(t), .. } => Oracle::Simon(OracleZ2n::from_table(*n, t.clone())?),
            OracleSpec::Simon { n, table: None, secret, seed } => {
                Oracle::Simon(OracleZ2n::from_secret(*n, *secret, &mut ChaCha8Rng::seed_from_u64(*seed)).map_err(wrap)?)
            }
            OracleSpec::Abelian { orders, table, subgroup, seed, relaxed_d } => {
                let group = GroupSpec::finite(orders.clone()).map_err(wrap)?;
                let o = match table {
                    Some(t) => OracleAbelian::from_table(group, t.clone(), *relaxed_d),
                    None => {
                        let h = SubgroupSpec::new(subgroup.clone(), &group).map_err(wrap)?;
                        let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                        match relaxed_d {
                            Some(d) => OracleAbelian::relaxed(group, h, *d, &mut rng),
                            None => OracleAbelian::from_subgroup(group, h, &mut rng),
                        }
                    }
                };
                Oracle::Abelian(o.map_err(wrap)?)
            }
            OracleSpec::PeriodicZ { table, period, seed, relaxed_d } => {
                let o = match table {
                    Some(t) if t.len() as u64 > MAX_PERIOD => Err(Error::InconsistentOracle("table too long".into())),
                    Some(t) => PeriodicZ::from_values(t.clone()),
                    None if *period > MAX_PERIOD => Err(Error::InconsistentOracle(format!("period above {MAX_PERIOD}"))),
                    None => {
                        let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                        match relaxed_d {
                            Some(d) => PeriodicZ::relaxed(*period, *d, &mut rng),
                            None => PeriodicZ::one_to_one(*period, &mut rng),
                        }
                    }
                };
                Oracle::PeriodicZ(o.map_err(wrap)?)
            }
            OracleSpec::StepR { period, breakpoints, values, bits } => {
                if breakpoints.len() > MAX_STEPS {
                    return Err(Error::InconsistentOracle(format!("more than {MAX_STEPS} steps")));
                }
                Oracle::StepR(StepFunctionR::new(period.clone(), breakpoints.clone(), values.clone(), *bits).map_err(wrap)?)
            }
        };
        Ok(oracle)
    }
}

pub fn parse_oracle_file(text: &str) -> Result<Oracle> {
    OracleSpec::parse(text)?.build()
}
