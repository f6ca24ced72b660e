//! Does a joint distribution over all observables reproduce every context
//! marginal? Answered with a certificate either way.

use num_rational::BigRational;
use serde::Serialize;

use super::scenario::{ContextScenario, Probability, DEFAULT_ASSIGNMENT_LIMIT};
use super::simplex::{phase_one, Field, PhaseOne};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Contexts share no observable; the product of the tables works.
    ProductOfMarginals,
    ExactLinearProgram,
    FloatLinearProgram,
}

/// One deterministic global assignment (outcome index per observable) and
/// its weight.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JointAtom {
    pub assignment: Vec<usize>,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// The joint distribution is the product of the context tables.
    Product { residual: f64 },
    /// Sparse joint distribution.
    Joint { support: Vec<JointAtom>, residual: f64 },
    /// Linear functional over table entries (`coefficients[c][cell]`) whose
    /// value on the marginals exceeds its maximum over deterministic
    /// assignments.
    Separating { coefficients: Vec<Vec<f64>>, value: f64, bound: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub method: Method,
    pub tolerance: f64,
    pub certificate: Certificate,
}

pub fn joint_feasibility(scenario: &ContextScenario, tolerance: f64) -> Result<FeasibilityResult> {
    joint_feasibility_with_limit(scenario, tolerance, DEFAULT_ASSIGNMENT_LIMIT)
}

/// As [`joint_feasibility`], refusing linear programs with more than `limit`
/// global assignments.
pub fn joint_feasibility_with_limit(
    scenario: &ContextScenario,
    tolerance: f64,
    limit: usize,
) -> Result<FeasibilityResult> {
    if tolerance.is_nan() || tolerance < 0.0 {
        return Err(Error::Domain(format!("tolerance {tolerance} must be non-negative")));
    }
    scenario.check_consistency(tolerance)?;
    if scenario.contexts_disjoint() {
        return Ok(FeasibilityResult {
            feasible: true,
            method: Method::ProductOfMarginals,
            tolerance,
            certificate: Certificate::Product { residual: product_residual(scenario) },
        });
    }
    let count = scenario.assignment_count();
    if count > limit as u128 {
        return Err(Error::AssignmentLimitExceeded { count, limit });
    }
    let columns = incidence(scenario, count as usize);
    if scenario.is_exact() {
        let b: Vec<BigRational> = scenario
            .tables()
            .iter()
            .flatten()
            .map(|p| match p {
                Probability::Exact(r) => r.clone(),
                Probability::Float(_) => unreachable!("exact scenario"),
            })
            .collect();
        Ok(conclude(scenario, phase_one(&columns, &b), tolerance, Method::ExactLinearProgram))
    } else {
        let b: Vec<f64> = scenario.tables().iter().flatten().map(Probability::to_f64).collect();
        Ok(conclude(scenario, phase_one(&columns, &b), tolerance, Method::FloatLinearProgram))
    }
}

/// Row offsets of each context's table in the stacked marginal vector.
fn offsets(scenario: &ContextScenario) -> Vec<usize> {
    let mut acc = 0;
    scenario
        .tables()
        .iter()
        .map(|t| {
            let start = acc;
            acc += t.len();
            start
        })
        .collect()
}

/// For each global assignment, the stacked rows it contributes to.
fn incidence(scenario: &ContextScenario, count: usize) -> Vec<Vec<usize>> {
    let offsets = offsets(scenario);
    (0..count)
        .map(|index| {
            let assignment = scenario.decode_assignment(index);
            (0..scenario.contexts().len()).map(|c| offsets[c] + scenario.cell(c, &assignment)).collect()
        })
        .collect()
}

fn conclude<T: Field>(scenario: &ContextScenario, lp: PhaseOne<T>, tolerance: f64, method: Method) -> FeasibilityResult {
    let value = lp.value.to_f64();
    let certificate = if value <= tolerance {
        let support: Vec<JointAtom> = lp
            .primal
            .iter()
            .map(|(j, p)| JointAtom { assignment: scenario.decode_assignment(*j), probability: p.to_f64() })
            .collect();
        let residual = joint_residual(scenario, &support);
        Certificate::Joint { support, residual }
    } else {
        let offsets = offsets(scenario);
        let coefficients: Vec<Vec<f64>> = scenario
            .tables()
            .iter()
            .zip(&offsets)
            .map(|(t, &start)| lp.dual[start..start + t.len()].iter().map(Field::to_f64).collect())
            .collect();
        let (value, bound) = evaluate_functional(scenario, &coefficients);
        Certificate::Separating { coefficients, value, bound }
    };
    FeasibilityResult { feasible: value <= tolerance, method, tolerance, certificate }
}

/// Largest deviation between the marginals of `support` and the tables.
pub fn joint_residual(scenario: &ContextScenario, support: &[JointAtom]) -> f64 {
    let mut worst = 0.0_f64;
    for (c, table) in scenario.tables().iter().enumerate() {
        let mut reconstructed = vec![0.0; table.len()];
        for atom in support {
            reconstructed[scenario.cell(c, &atom.assignment)] += atom.probability;
        }
        for (r, p) in reconstructed.iter().zip(table) {
            worst = worst.max((r - p.to_f64()).abs());
        }
    }
    worst
}

/// Largest deviation between the marginals of the product distribution and
/// the tables. Marginalizing the product rescales table `c` by the totals of
/// the other tables.
pub fn product_residual(scenario: &ContextScenario) -> f64 {
    let totals: Vec<f64> = scenario.tables().iter().map(|t| t.iter().map(Probability::to_f64).sum()).collect();
    let mut worst = 0.0_f64;
    for (c, table) in scenario.tables().iter().enumerate() {
        let scale: f64 = totals.iter().enumerate().filter(|(k, _)| *k != c).map(|(_, t)| t).product();
        for p in table {
            let p = p.to_f64();
            worst = worst.max((p * scale - p).abs());
        }
    }
    worst
}

/// `(value on the marginals, maximum over deterministic assignments)` of a
/// functional with per-context coefficients.
pub fn evaluate_functional(scenario: &ContextScenario, coefficients: &[Vec<f64>]) -> (f64, f64) {
    let value = coefficients
        .iter()
        .zip(scenario.tables())
        .flat_map(|(y, t)| y.iter().zip(t).map(|(y, p)| y * p.to_f64()))
        .sum();
    let count = scenario.assignment_count() as usize;
    let bound = (0..count)
        .map(|index| {
            let assignment = scenario.decode_assignment(index);
            (0..coefficients.len()).map(|c| coefficients[c][scenario.cell(c, &assignment)]).sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, f64::max);
    (value, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contextuality::scenario::Observable;

    fn binary(id: &str) -> Observable {
        Observable { id: id.into(), outcomes: vec!["0".into(), "1".into()] }
    }

    fn q(p: i64, d: i64) -> Probability {
        Probability::Exact(BigRational::new(p.into(), d.into()))
    }

    /// Mixture `v * PR + (1 - v) * uniform` on the CHSH contexts.
    fn chsh(v: BigRational) -> ContextScenario {
        let observables = ["A0", "A1", "B0", "B1"].map(binary).to_vec();
        let contexts = vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]];
        let quarter = BigRational::new(1.into(), 4.into());
        let tables = contexts
            .iter()
            .enumerate()
            .map(|(c, _)| {
                (0..4)
                    .map(|cell| {
                        let equal = cell == 0 || cell == 3;
                        let correlated = if c == 3 { !equal } else { equal };
                        let pr = if correlated { BigRational::new(1.into(), 2.into()) } else { BigRational::from_integer(0.into()) };
                        Probability::Exact(&v * pr + (BigRational::from_integer(1.into()) - &v) * &quarter)
                    })
                    .collect()
            })
            .collect();
        ContextScenario::new(observables, contexts, tables).unwrap()
    }

    fn ratio(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn disjoint_contexts_use_product() {
        let observables = vec![binary("A"), binary("B")];
        let tables = vec![vec![q(1, 3), q(2, 3)], vec![q(1, 1), q(0, 1)]];
        let s = ContextScenario::new(observables, vec![vec![0], vec![1]], tables).unwrap();
        let r = joint_feasibility(&s, 1e-9).unwrap();
        assert!(r.feasible);
        assert_eq!(r.method, Method::ProductOfMarginals);
        assert!(matches!(r.certificate, Certificate::Product { residual } if residual <= 1e-15));
    }

    #[test]
    fn single_context_is_its_own_joint() {
        let observables = vec![binary("A"), binary("B")];
        let tables = vec![vec![q(1, 2), q(0, 1), q(1, 4), q(1, 4)], vec![q(1, 2), q(1, 2)]];
        let s = ContextScenario::new(observables, vec![vec![0, 1], vec![0]], tables).unwrap();
        let r = joint_feasibility(&s, 1e-9).unwrap();
        assert!(r.feasible);
        let Certificate::Joint { support, residual } = r.certificate else { panic!("expected joint") };
        assert_eq!(residual, 0.0);
        assert_eq!(joint_residual(&s, &support), 0.0);
    }

    #[test]
    fn deterministic_assignments_reach_three_quarters_of_pr() {
        // score = number of contexts whose PR correlation is satisfied
        let mut best = 0;
        for bits in 0..16u32 {
            let a = |i: u32| bits >> i & 1;
            let score = [(0, 2, true), (0, 3, true), (1, 2, true), (1, 3, false)]
                .iter()
                .filter(|(x, y, eq)| (a(*x) == a(*y)) == *eq)
                .count();
            best = best.max(score);
        }
        assert_eq!(best, 3);
    }

    #[test]
    fn pr_box_is_infeasible_with_valid_certificate() {
        let s = chsh(ratio(1, 1));
        let r = joint_feasibility(&s, 1e-9).unwrap();
        assert!(!r.feasible);
        assert_eq!(r.method, Method::ExactLinearProgram);
        let Certificate::Separating { coefficients, value, bound } = r.certificate else { panic!("expected functional") };
        assert!(value - bound > 1e-9);
        assert_eq!(evaluate_functional(&s, &coefficients), (value, bound));
    }

    #[test]
    fn noisy_pr_threshold_is_one_half() {
        assert!(joint_feasibility(&chsh(ratio(1, 2)), 0.0).unwrap().feasible);
        assert!(!joint_feasibility(&chsh(ratio(501, 1000)), 0.0).unwrap().feasible);
        let mut seen_infeasible = false;
        for k in 0..=20 {
            let feasible = joint_feasibility(&chsh(ratio(k, 20)), 1e-9).unwrap().feasible;
            assert!(!(seen_infeasible && feasible), "feasibility must not return after failing");
            seen_infeasible |= !feasible;
            assert_eq!(feasible, k <= 10);
        }
    }

    #[test]
    fn float_program_agrees() {
        let exact = chsh(ratio(3, 10));
        let tables = exact.tables().iter().map(|t| t.iter().map(|p| Probability::Float(p.to_f64())).collect()).collect();
        let s = ContextScenario::new(exact.observables().to_vec(), exact.contexts().to_vec(), tables).unwrap();
        let r = joint_feasibility(&s, 1e-9).unwrap();
        assert_eq!(r.method, Method::FloatLinearProgram);
        let Certificate::Joint { support, residual } = r.certificate else { panic!("expected joint") };
        assert!(residual <= 2e-9);
        let total: f64 = support.iter().map(|a| a.probability).sum();
        assert!((total - 1.0).abs() <= 1e-9, "{total}");
        assert!(!joint_feasibility(&chsh(ratio(9, 10)), 1e-9).unwrap().feasible);
    }

    #[test]
    fn limits_and_errors() {
        assert!(matches!(
            joint_feasibility_with_limit(&chsh(ratio(1, 1)), 1e-9, 15),
            Err(Error::AssignmentLimitExceeded { count: 16, limit: 15 })
        ));
        assert!(joint_feasibility(&chsh(ratio(1, 1)), -1.0).is_err());
    }
}
