//! Marginal scenarios: observables with finite outcome sets, contexts of
//! jointly measured observables and one probability table per context.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "observables": [{"id": "A", "outcomes": ["0", "1"]}, ...],
//!   "contexts": [["A", "B"], ...],
//!   "marginals": {
//!     "0": [{"assignment": ["0", "1"], "probability": "1/2"}, ...],
//!     ...
//!   }
//! }
//! ```
//!
//! `marginals` is keyed by context index. Probabilities may be JSON numbers
//! or strings holding a decimal or `p/q`; strings are read exactly. Entries
//! missing from a table have probability zero.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Deserialize;

use crate::error::{Error, Result};

/// Default cap on the number of global deterministic assignments.
pub const DEFAULT_ASSIGNMENT_LIMIT: usize = 1_000_000;

/// Allowed deviation of each table's total from one.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A probability as given in the input.
#[derive(Clone, Debug, PartialEq)]
pub enum Probability {
    Exact(BigRational),
    Float(f64),
}

impl Probability {
    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Probability::Float(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Probability::Exact(_))
    }
}

impl std::str::FromStr for Probability {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        parse_exact(text.trim()).map(Probability::Exact).ok_or_else(|| Error::Parse(format!("bad probability '{text}'")))
    }
}

fn parse_integer(text: &str) -> Option<BigInt> {
    if text.is_empty() || !text.trim_start_matches(['+', '-']).bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}

/// Exact value of `p/q`, an integer, or a plain decimal (optionally with an
/// exponent).
fn parse_exact(text: &str) -> Option<BigRational> {
    if let Some((p, q)) = text.split_once('/') {
        let q = parse_integer(q.trim())?;
        let p = parse_integer(p.trim())?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let negative = int_part.starts_with('-');
    let int_digits = int_part.trim_start_matches(['+', '-']);
    if int_digits.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_digits}{frac_part}");
    if !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let mut value = BigRational::from_integer(digits.parse().ok()?);
    let shift = exponent - frac_part.len() as i32;
    let ten = BigRational::from_integer(10.into());
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    value = if shift >= 0 { value * scale } else { value / scale };
    Some(if negative { -value } else { value })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawProbability {
    Number(f64),
    Text(String),
}

#[derive(Deserialize)]
struct RawObservable {
    id: String,
    outcomes: Vec<serde_json::Value>,
}

#[derive(Deserialize)]
struct RawEntry {
    assignment: Vec<serde_json::Value>,
    probability: RawProbability,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    observables: Vec<RawObservable>,
    contexts: Vec<Vec<String>>,
    marginals: BTreeMap<String, Vec<RawEntry>>,
}

/// Outcome labels are compared as strings; JSON numbers are accepted too.
fn label(value: &serde_json::Value) -> String {
    match value {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    pub id: String,
    pub outcomes: Vec<String>,
}

/// A validated scenario. Each context table is dense over the joint outcomes
/// of its observables, indexed in mixed radix with the first observable most
/// significant.
#[derive(Clone, Debug, PartialEq)]
pub struct ContextScenario {
    observables: Vec<Observable>,
    contexts: Vec<Vec<usize>>,
    tables: Vec<Vec<Probability>>,
}

impl ContextScenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawScenario =
            serde_json::from_str(text).map_err(|e| Error::InvalidScenario(format!("malformed scenario: {e}")))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: RawScenario) -> Result<Self> {
        let bad = |msg: String| Error::InvalidScenario(msg);
        let mut index = HashMap::new();
        let mut observables = Vec::with_capacity(raw.observables.len());
        for (i, obs) in raw.observables.into_iter().enumerate() {
            let outcomes: Vec<String> = obs.outcomes.iter().map(label).collect();
            if outcomes.is_empty() {
                return Err(bad(format!("observable '{}' has no outcomes", obs.id)));
            }
            let mut sorted = outcomes.clone();
            sorted.sort();
            sorted.dedup();
            if sorted.len() != outcomes.len() {
                return Err(bad(format!("observable '{}' repeats an outcome", obs.id)));
            }
            if index.insert(obs.id.clone(), i).is_some() {
                return Err(bad(format!("duplicate observable '{}'", obs.id)));
            }
            observables.push(Observable { id: obs.id, outcomes });
        }
        if observables.is_empty() {
            return Err(bad("no observables".into()));
        }

        let mut contexts = Vec::with_capacity(raw.contexts.len());
        for (c, ids) in raw.contexts.iter().enumerate() {
            if ids.is_empty() {
                return Err(bad(format!("context {c} is empty")));
            }
            let members: Vec<usize> = ids
                .iter()
                .map(|id| index.get(id).copied().ok_or_else(|| bad(format!("context {c}: unknown observable '{id}'"))))
                .collect::<Result<_>>()?;
            let mut sorted = members.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != members.len() {
                return Err(bad(format!("context {c} repeats an observable")));
            }
            contexts.push(members);
        }
        let mut covered = vec![false; observables.len()];
        contexts.iter().flatten().for_each(|&o| covered[o] = true);
        if let Some(o) = covered.iter().position(|c| !c) {
            return Err(bad(format!("observable '{}' is in no context", observables[o].id)));
        }

        let mut marginals = raw.marginals;
        let mut tables = Vec::with_capacity(contexts.len());
        for (c, members) in contexts.iter().enumerate() {
            let entries = marginals.remove(&c.to_string()).ok_or_else(|| bad(format!("no marginal for context {c}")))?;
            let size: usize = members.iter().map(|&o| observables[o].outcomes.len()).product();
            let mut table: Vec<Option<Probability>> = vec![None; size];
            for entry in entries {
                if entry.assignment.len() != members.len() {
                    return Err(bad(format!("context {c}: assignment length {} != {}", entry.assignment.len(), members.len())));
                }
                let mut cell = 0;
                for (&o, value) in members.iter().zip(&entry.assignment) {
                    let outcome = label(value);
                    let pos = observables[o]
                        .outcomes
                        .iter()
                        .position(|x| *x == outcome)
                        .ok_or_else(|| bad(format!("context {c}: '{outcome}' is not an outcome of '{}'", observables[o].id)))?;
                    cell = cell * observables[o].outcomes.len() + pos;
                }
                let p = match entry.probability {
                    RawProbability::Number(x) => Probability::Float(x),
                    RawProbability::Text(s) => s.parse().map_err(|_| bad(format!("context {c}: bad probability '{s}'")))?,
                };
                if table[cell].replace(p).is_some() {
                    return Err(bad(format!("context {c}: repeated assignment")));
                }
            }
            let zero = Probability::Exact(BigRational::zero());
            tables.push(table.into_iter().map(|p| p.unwrap_or_else(|| zero.clone())).collect());
        }
        if let Some(key) = marginals.keys().next() {
            return Err(bad(format!("marginal '{key}' names no context")));
        }
        Self::new(observables, contexts, tables)
    }

    /// Validates shapes, signs and normalization. No-disturbance is checked
    /// separately by [`ContextScenario::check_consistency`].
    pub fn new(observables: Vec<Observable>, contexts: Vec<Vec<usize>>, tables: Vec<Vec<Probability>>) -> Result<Self> {
        let bad = |msg: String| Error::InvalidScenario(msg);
        if contexts.len() != tables.len() {
            return Err(bad("one table per context is required".into()));
        }
        for (c, (members, table)) in contexts.iter().zip(&tables).enumerate() {
            if members.iter().any(|&o| o >= observables.len()) {
                return Err(bad(format!("context {c} names an unknown observable")));
            }
            let size: usize = members.iter().map(|&o| observables[o].outcomes.len()).product();
            if table.len() != size {
                return Err(bad(format!("context {c}: table has {} cells, expected {size}", table.len())));
            }
            if table.iter().map(Probability::to_f64).any(|x| !x.is_finite() || x < 0.0) {
                return Err(bad(format!("context {c}: negative or non-finite probability")));
            }
            let total: f64 = table.iter().map(Probability::to_f64).sum();
            if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
                return Err(bad(format!("context {c}: probabilities sum to {total}")));
            }
        }
        Ok(ContextScenario { observables, contexts, tables })
    }

    pub fn observables(&self) -> &[Observable] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Vec<usize>] {
        &self.contexts
    }

    pub fn tables(&self) -> &[Vec<Probability>] {
        &self.tables
    }

    /// All probabilities were given exactly.
    pub fn is_exact(&self) -> bool {
        self.tables.iter().flatten().all(Probability::is_exact)
    }

    /// Number of global deterministic assignments, saturating.
    pub fn assignment_count(&self) -> u128 {
        self.observables.iter().fold(1u128, |acc, o| acc.saturating_mul(o.outcomes.len() as u128))
    }

    pub fn contexts_disjoint(&self) -> bool {
        let mut seen = vec![false; self.observables.len()];
        for &o in self.contexts.iter().flatten() {
            if std::mem::replace(&mut seen[o], true) {
                return false;
            }
        }
        true
    }

    /// Cell of context `c` selected by a global assignment (one outcome index
    /// per observable).
    pub fn cell(&self, c: usize, assignment: &[usize]) -> usize {
        self.contexts[c].iter().fold(0, |cell, &o| cell * self.observables[o].outcomes.len() + assignment[o])
    }

    /// Decodes a global assignment index (mixed radix, first observable most
    /// significant).
    pub fn decode_assignment(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.observables.len()];
        for (o, obs) in self.observables.iter().enumerate().rev() {
            let n = obs.outcomes.len();
            out[o] = index % n;
            index /= n;
        }
        out
    }

    /// Marginal of context `c` on the observables `keep` (a subset of the
    /// context), in the order given.
    fn marginalize(&self, c: usize, keep: &[usize]) -> Vec<f64> {
        let members = &self.contexts[c];
        let radix: Vec<usize> = members.iter().map(|&o| self.observables[o].outcomes.len()).collect();
        let size: usize = keep.iter().map(|&o| self.observables[o].outcomes.len()).product();
        let mut out = vec![0.0; size];
        for (cell, p) in self.tables[c].iter().enumerate() {
            let mut digits = vec![0; members.len()];
            let mut rest = cell;
            for (i, n) in radix.iter().enumerate().rev() {
                digits[i] = rest % n;
                rest /= n;
            }
            let target = keep.iter().fold(0, |acc, o| {
                let pos = members.iter().position(|m| m == o).expect("kept observable belongs to context");
                acc * self.observables[*o].outcomes.len() + digits[pos]
            });
            out[target] += p.to_f64();
        }
        out
    }

    /// No-disturbance: overlapping contexts agree on the marginal of their
    /// shared observables within `tolerance`.
    pub fn check_consistency(&self, tolerance: f64) -> Result<()> {
        for a in 0..self.contexts.len() {
            for b in a + 1..self.contexts.len() {
                let shared: Vec<usize> = self.contexts[a].iter().copied().filter(|o| self.contexts[b].contains(o)).collect();
                if shared.is_empty() {
                    continue;
                }
                let left = self.marginalize(a, &shared);
                let right = self.marginalize(b, &shared);
                let gap = left.iter().zip(&right).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                if gap > tolerance {
                    return Err(Error::InconsistentMarginals(format!(
                        "contexts {a} and {b} disagree by {gap:e} on shared observables"
                    )));
                }
            }
        }
        Ok(())
    }
}
