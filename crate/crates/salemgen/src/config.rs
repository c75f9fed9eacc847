//! JSON run configuration: weights, coefficients, optional periodic
//! schedule, index-sequence descriptor, and defaults. Validation failures
//! name the offending field.

use std::path::Path;

use serde::Deserialize;

use salem_core::{
    CoefficientVector, GenSalemSpec, IndexSequence, ProbabilitySchedule,
    ProbabilityVector,
};

use crate::Failure;

/// Weights may be JSON numbers or decimal strings.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Num {
    Float(f64),
    Text(String),
}

impl Num {
    fn value(&self, field: &str, index: usize) -> Result<f64, Failure> {
        match self {
            Num::Float(v) => Ok(*v),
            Num::Text(s) => s.trim().parse::<f64>().map_err(|_| {
                Failure::config(format!("{field}[{index}]: cannot parse {s:?} as a number"))
            }),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum PermDescriptor {
    #[default]
    Identity,
    Finite { table: Vec<u32> },
    Block { b: u32, map: Vec<u32> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    q: u32,
    p: Vec<Num>,
    r: Vec<Num>,
    #[serde(default)]
    schedule: Option<Vec<Vec<Num>>>,
    #[serde(default)]
    perm: PermDescriptor,
    #[serde(default = "default_tol")]
    tol: f64,
    #[serde(default = "default_seed")]
    seed: u64,
}

fn default_tol() -> f64 {
    1e-12
}

fn default_seed() -> u64 {
    42
}

/// A validated configuration ready for the commands.
#[derive(Debug)]
pub struct Loaded {
    pub spec: GenSalemSpec,
    /// The representation schedule: the configured periodic list when
    /// present, otherwise the constant weight vector.
    pub sched: ProbabilitySchedule,
    pub tol: f64,
    pub seed: u64,
}

fn numbers(field: &str, raw: &[Num]) -> Result<Vec<f64>, Failure> {
    raw.iter()
        .enumerate()
        .map(|(i, n)| n.value(field, i))
        .collect()
}

impl RunConfig {
    pub fn build(&self) -> Result<Loaded, Failure> {
        if self.p.len() as u32 != self.q {
            return Err(Failure::config(format!(
                "p: expected {} weights for q = {}, got {}",
                self.q,
                self.q,
                self.p.len()
            )));
        }
        if self.r.len() as u32 != self.q {
            return Err(Failure::config(format!(
                "r: expected {} coefficients for q = {}, got {}",
                self.q,
                self.q,
                self.r.len()
            )));
        }
        let weights = ProbabilityVector::new(&numbers("p", &self.p)?)
            .map_err(|e| Failure::config(format!("p: {e}")))?;
        let coeffs = CoefficientVector::new(&numbers("r", &self.r)?)
            .map_err(|e| Failure::config(format!("r: {e}")))?;
        let perm = match &self.perm {
            PermDescriptor::Identity => IndexSequence::identity(),
            PermDescriptor::Finite { table } => IndexSequence::finite_permutation(table.clone())
                .map_err(|e| Failure::config(format!("perm.table: {e}")))?,
            PermDescriptor::Block { b, map } => {
                if *b as usize != map.len() {
                    return Err(Failure::config(format!(
                        "perm.b: block length {b} does not match map length {}",
                        map.len()
                    )));
                }
                IndexSequence::block_permutation(map.clone())
                    .map_err(|e| Failure::config(format!("perm.map: {e}")))?
            }
        };
        let sched = match &self.schedule {
            None => ProbabilitySchedule::constant(weights.clone()),
            Some(lists) => {
                let mut vectors = Vec::with_capacity(lists.len());
                for (i, list) in lists.iter().enumerate() {
                    let field = format!("schedule[{i}]");
                    let v = ProbabilityVector::new(&numbers(&field, list)?)
                        .map_err(|e| Failure::config(format!("{field}: {e}")))?;
                    if v.q() != self.q {
                        return Err(Failure::config(format!(
                            "{field}: radix {} does not match q = {}",
                            v.q(),
                            self.q
                        )));
                    }
                    vectors.push(v);
                }
                ProbabilitySchedule::periodic(vectors)
                    .map_err(|e| Failure::config(format!("schedule: {e}")))?
            }
        };
        if !self.tol.is_finite() || self.tol <= 0.0 {
            return Err(Failure::config(format!(
                "tol: must be positive, got {}",
                self.tol
            )));
        }
        let spec = GenSalemSpec::new(weights, coeffs, perm)
            .map_err(|e| Failure::config(format!("r: {e}")))?;
        Ok(Loaded {
            spec,
            sched,
            tol: self.tol,
            seed: self.seed,
        })
    }
}

pub fn load(path: &Path) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    let cfg: RunConfig = serde_json::from_str(&text)
        .map_err(|e| Failure::config(format!("{}: {e}", path.display())))?;
    cfg.build()
}
