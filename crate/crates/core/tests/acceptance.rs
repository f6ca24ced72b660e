//! Acceptance gate. Each criterion prints one PASS/FAIL line with its
//! runtime; the process fails if any criterion fails.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;

use macrospin::collective::{
    commutator, gamma_element, projector_tensor_sum, witness, Direction, EnsembleOperator, EnsembleSpec,
};
use macrospin::contextuality::{
    commutator_norms, compatibility_graph, evaluate_functional, find_contexts, joint_feasibility, joint_residual,
    Certificate, ContextScenario,
};
use macrospin::su2::{legendre, multiplicities, rotation_oracle, wigner_d_element, wigner_d_matrix, HalfInt};

type Outcome = Result<String, String>;

fn h(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `P_n(x) = (1/2pi) \int_0^{2pi} (x + i sqrt(1-x^2) cos phi)^n dphi`. The
/// integrand is a trigonometric polynomial of degree n, so the M-point
/// trapezoid rule with M > n is exact up to rounding.
fn legendre_oracle(n: u32, x: f64) -> f64 {
    let m = 4 * (n as usize + 1);
    let s = (1.0 - x * x).max(0.0).sqrt();
    let total: f64 = (0..m)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / m as f64;
            Complex64::new(x, s * phi.cos()).powu(n).re
        })
        .sum();
    total / m as f64
}

fn interior_grid(points: usize) -> Vec<f64> {
    (1..=points).map(|i| PI * i as f64 / (points + 1) as f64).collect()
}

fn criterion_1() -> Outcome {
    let grid = interior_grid(20);
    let mut worst_orth = 0.0_f64;
    for twice_j in 0..=50 {
        for &beta in &grid {
            let d = wigner_d_matrix(h(twice_j), beta).map_err(|e| e.to_string())?;
            let defect = (&d * d.transpose() - nalgebra::DMatrix::<f64>::identity(d.nrows(), d.nrows())).amax();
            worst_orth = worst_orth.max(defect);
        }
    }
    ensure(worst_orth <= 1e-10, || format!("max |D D^T - I| = {worst_orth:e}"))?;
    let mut worst_leg = 0.0_f64;
    for j in 0..=50 {
        for &beta in &grid {
            let x = beta.cos();
            let d00 = wigner_d_element(HalfInt::from_int(j), HalfInt::ZERO, HalfInt::ZERO, beta).map_err(|e| e.to_string())?;
            let oracle = legendre_oracle(j as u32, x);
            let library = legendre(j as u32, x).map_err(|e| e.to_string())?;
            worst_leg = worst_leg.max((d00 - oracle).abs()).max((library - oracle).abs());
        }
    }
    ensure(worst_leg <= 1e-10, || format!("max |d00 - P_j| = {worst_leg:e}"))?;
    Ok(format!("orthogonality {worst_orth:.1e}, Legendre {worst_leg:.1e}"))
}

fn criterion_2() -> Outcome {
    let mut worst = 0.0_f64;
    for twice_j in 0..=20 {
        for beta in [0.3, 1.7, 2.9] {
            let d = wigner_d_matrix(h(twice_j), beta).map_err(|e| e.to_string())?;
            let oracle = rotation_oracle(h(twice_j), beta);
            for r in 0..d.nrows() {
                for c in 0..d.ncols() {
                    worst = worst.max((Complex64::new(d[(r, c)], 0.0) - oracle[(r, c)]).norm());
                }
            }
        }
    }
    ensure(worst <= 1e-9, || format!("max entry deviation {worst:e}"))?;
    Ok(format!("max entry deviation {worst:.1e}"))
}

/// Multiplicities from magnetization counts: `lambda_j = D(j) - D(j+1)` where
/// `D(m)` counts product states with total magnetization `m`.
fn multiplicity_oracle(n: u32, twice_s: i32) -> Vec<(i32, BigUint)> {
    let levels = twice_s as usize + 1;
    let mut counts = vec![BigUint::from(1u32)];
    for _ in 0..n {
        let mut next = vec![BigUint::from(0u32); counts.len() + levels - 1];
        for (i, c) in counts.iter().enumerate() {
            for step in 0..levels {
                next[i + step] += c;
            }
        }
        counts = next;
    }
    // index t corresponds to twice_m = 2t - n * twice_s
    let top = n as i32 * twice_s;
    let count_at = |twice_m: i32| -> BigUint {
        let t = (twice_m + top) / 2;
        counts.get(t as usize).cloned().unwrap_or_default()
    };
    let mut out = Vec::new();
    let mut twice_j = top;
    while twice_j >= 0 {
        let lambda = count_at(twice_j) - if twice_j + 2 <= top { count_at(twice_j + 2) } else { BigUint::from(0u32) };
        if lambda > BigUint::from(0u32) {
            out.push((twice_j, lambda));
        }
        twice_j -= 2;
    }
    out.reverse();
    out
}

fn criterion_3() -> Outcome {
    let mut cases = 0;
    for twice_s in [1, 2, 3] {
        for n in 1..=12u32 {
            let table = multiplicities(n, h(twice_s)).map_err(|e| e.to_string())?;
            let dim = BigUint::from(twice_s as u32 + 1).pow(n);
            let weighted: BigUint = table.entries().iter().map(|(j, l)| l * BigUint::from(j.multiplet_dim())).sum();
            ensure(weighted == dim, || format!("N={n}, 2s={twice_s}: {weighted} != {dim}"))?;
            ensure(table.dimension_identity_holds(), || format!("identity flag false at N={n}, 2s={twice_s}"))?;
            let got: Vec<(i32, BigUint)> = table.entries().iter().map(|(j, l)| (j.twice(), l.clone())).collect();
            ensure(got == multiplicity_oracle(n, twice_s), || format!("multiplicities differ at N={n}, 2s={twice_s}"))?;
            cases += 1;
        }
    }
    Ok(format!("{cases} ensembles exact"))
}

fn criterion_4() -> Outcome {
    let betas = [PI / 6.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0];
    let ensembles: Vec<(u32, i32)> = (1..=6).map(|n| (n, 1)).chain((1..=4).map(|n| (n, 2))).collect();
    let mut worst = 0.0_f64;
    let mut pairs = 0;
    for (n, twice_s) in ensembles {
        let spec = EnsembleSpec::new(n, h(twice_s)).map_err(|e| e.to_string())?;
        let outcomes = spec.outcomes();
        let fixed: Vec<_> = outcomes
            .iter()
            .map(|m| projector_tensor_sum(&spec, &Direction::Z, *m))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for &beta in &betas {
            let block = commutator_norms(&spec, beta).map_err(|e| e.to_string())?;
            let along = Direction::in_xz_plane(beta);
            for (k, mp) in outcomes.iter().enumerate() {
                let rotated = projector_tensor_sum(&spec, &along, *mp).map_err(|e| e.to_string())?;
                for (i, p) in fixed.iter().enumerate() {
                    let dense = commutator(p, &rotated).map_err(|e| e.to_string())?.frobenius_norm();
                    worst = worst.max((dense - block[i][k]).abs());
                    pairs += 1;
                }
            }
        }
    }
    ensure(worst <= 1e-8, || format!("max |dense - block| = {worst:e}"))?;
    Ok(format!("{pairs} norms, max deviation {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let spec = EnsembleSpec::new(8, HalfInt::HALF).map_err(|e| e.to_string())?;
    let outcomes = spec.outcomes();
    let mut max_endpoint = 0.0_f64;
    for beta in [0.0, PI] {
        let norms = commutator_norms(&spec, beta).map_err(|e| e.to_string())?;
        max_endpoint = norms.iter().flatten().copied().fold(max_endpoint, f64::max);
    }
    let mut min_interior = (f64::INFINITY, 0.0, HalfInt::ZERO, HalfInt::ZERO);
    let mut below = 0;
    for beta in interior_grid(25) {
        let norms = commutator_norms(&spec, beta).map_err(|e| e.to_string())?;
        for (i, row) in norms.iter().enumerate() {
            for (k, &v) in row.iter().enumerate() {
                below += usize::from(v <= 1e-8);
                if v < min_interior.0 {
                    min_interior = (v, beta, outcomes[i], outcomes[k]);
                }
            }
        }
    }
    let (min, beta, m, mp) = min_interior;
    // rank-one stretched projectors: ||[P, Q]||_F = sqrt(2) a sqrt(1 - a^2), a = |<u|v>|
    let a = if m == -mp { (beta / 2.0).sin().powi(8) } else { (beta / 2.0).cos().powi(8) };
    let closed_form = std::f64::consts::SQRT_2 * a * (1.0 - a * a).sqrt();
    let detail = format!(
        "endpoint max {max_endpoint:.1e}; interior min {min:.3e} at beta={beta:.4} for (m, m')=({m}, {mp}), \
         closed form {closed_form:.3e}; {below} interior norms <= 1e-8"
    );
    ensure(max_endpoint <= 1e-12, || detail.clone())?;
    ensure(min > 1e-8, || detail.clone())?;
    Ok(detail)
}

fn dense_norm(spec: &EnsembleSpec, a: &Direction, m: HalfInt, b: &Direction, mp: HalfInt) -> Result<f64, String> {
    let p = projector_tensor_sum(spec, a, m).map_err(|e| e.to_string())?;
    let q = projector_tensor_sum(spec, b, mp).map_err(|e| e.to_string())?;
    Ok(commutator(&p, &q).map_err(|e| e.to_string())?.frobenius_norm())
}

fn criterion_6() -> Outcome {
    let z = HalfInt::ZERO;
    let norm_at = |n: u32| -> Result<f64, String> {
        let spec = EnsembleSpec::new(n, HalfInt::HALF).map_err(|e| e.to_string())?;
        let block = commutator_norms(&spec, PI / 2.0).map_err(|e| e.to_string())?;
        let idx = spec.outcomes().iter().position(|m| *m == z).expect("zero outcome");
        let dense = dense_norm(&spec, &Direction::Z, z, &Direction::X, z)?;
        ensure((dense - block[idx][idx]).abs() <= 1e-12, || format!("N={n}: dense {dense:e} vs block {:e}", block[idx][idx]))?;
        Ok(block[idx][idx])
    };
    let two = norm_at(2)?;
    ensure(two <= 1e-12, || format!("N=2 norm {two:e}"))?;
    let four = norm_at(4)?;
    ensure(four > 1e-8, || format!("N=4 norm {four:e}"))?;

    let spec = EnsembleSpec::new(1, HalfInt::ONE).map_err(|e| e.to_string())?;
    let axes = [Direction::X, Direction::Y, Direction::Z];
    for a in 0..3 {
        for b in a + 1..3 {
            let n = dense_norm(&spec, &axes[a], z, &axes[b], z)?;
            ensure(n <= 1e-12, || format!("P_0 pair ({a},{b}) norm {n:e}"))?;
        }
    }
    let graph = compatibility_graph(&spec, &axes, spec.zero_tolerance()).map_err(|e| e.to_string())?;
    let zero_nodes: Vec<usize> = (0..graph.nodes().len()).filter(|i| graph.nodes()[*i].outcome == z).collect();
    for (i, a) in zero_nodes.iter().enumerate() {
        for b in &zero_nodes[i + 1..] {
            ensure(graph.has_edge(*a, *b), || format!("graph misses P_0 edge {a}-{b}"))?;
        }
    }
    let contexts = find_contexts(&graph);
    ensure(!contexts.is_empty(), || "no contexts for a single spin-1".into())?;
    Ok(format!("N=2 {two:.1e}, N=4 {four:.3e}, spin-1 contexts {}", contexts.len()))
}

fn criterion_7() -> Outcome {
    let betas = [PI / 5.0, PI / 3.0, 2.0 * PI / 5.0];
    let mut checked = 0;
    let mut smallest = f64::INFINITY;
    for integer in [true, false] {
        let offset = if integer { 0 } else { 1 };
        let j_values: Vec<HalfInt> = (0..=6).map(|j| h(2 * j + offset)).collect();
        let labels: Vec<HalfInt> = (-5..=5).map(|k| h(2 * k + offset)).filter(|l| l.abs() <= HalfInt::from_int(5)).collect();
        for &m in &labels {
            for &n in &labels {
                for &beta in &betas {
                    let w = witness(m, n, beta, &j_values)
                        .ok_or_else(|| format!("no witness for m={m}, n={n}, beta={beta}"))?;
                    ensure(w.k != m, || format!("k == m for m={m}, n={n}"))?;
                    ensure(j_values.contains(&w.j), || format!("j={} not offered", w.j))?;
                    // reconstruct Gamma_{m,k} = d_{m,n} d_{k,n} from the exponential oracle
                    let d = rotation_oracle(w.j, beta);
                    let row = |label: HalfInt| label.index_in(w.j);
                    let gamma_oracle = (d[(row(m), row(n))] * d[(row(w.k), row(n))]).re;
                    let gamma = gamma_element(w.j, m, n, m, w.k, beta).map_err(|e| e.to_string())?;
                    ensure(gamma_oracle.abs() > 1e-13, || format!("|Gamma| = {gamma_oracle:e} at m={m}, n={n}"))?;
                    ensure((gamma - gamma_oracle).abs() <= 1e-9, || format!("Gamma mismatch at m={m}, n={n}"))?;
                    smallest = smallest.min(gamma_oracle.abs());
                    checked += 1;
                }
            }
        }
    }
    let none = witness(HalfInt::ZERO, HalfInt::ZERO, PI / 2.0, &[HalfInt::ZERO, HalfInt::ONE]);
    ensure(none.is_none(), || format!("expected no witness, got {none:?}"))?;
    Ok(format!("{checked} witnesses, smallest |Gamma| {smallest:.2e}"))
}

const PRODUCT_SCENARIO: &str = r#"{
  "observables": [
    {"id": "X", "outcomes": ["-1", "0", "1"]},
    {"id": "P", "outcomes": ["up", "down"]}
  ],
  "contexts": [["X"], ["P"]],
  "marginals": {
    "0": [
      {"assignment": ["-1"], "probability": "1/6"},
      {"assignment": ["0"], "probability": "1/3"},
      {"assignment": ["1"], "probability": "1/2"}
    ],
    "1": [
      {"assignment": ["up"], "probability": "0.3"},
      {"assignment": ["down"], "probability": "0.7"}
    ]
  }
}"#;

const SINGLE_CONTEXT_SCENARIO: &str = r#"{
  "observables": [{"id": "A", "outcomes": [0, 1]}, {"id": "B", "outcomes": [0, 1]}],
  "contexts": [["A", "B"]],
  "marginals": {"0": [
    {"assignment": [0, 0], "probability": "0.4"},
    {"assignment": [0, 1], "probability": "0.1"},
    {"assignment": [1, 1], "probability": "0.5"}
  ]}
}"#;

fn pr_box_scenario() -> String {
    let table = |correlated: bool| {
        let (same, diff) = if correlated { ("1/2", "0") } else { ("0", "1/2") };
        format!(
            r#"[{{"assignment": [0, 0], "probability": "{same}"}}, {{"assignment": [1, 1], "probability": "{same}"}},
                {{"assignment": [0, 1], "probability": "{diff}"}}, {{"assignment": [1, 0], "probability": "{diff}"}}]"#
        )
    };
    format!(
        r#"{{
  "observables": [{{"id": "A0", "outcomes": [0, 1]}}, {{"id": "A1", "outcomes": [0, 1]}},
                  {{"id": "B0", "outcomes": [0, 1]}}, {{"id": "B1", "outcomes": [0, 1]}}],
  "contexts": [["A0", "B0"], ["A0", "B1"], ["A1", "B0"], ["A1", "B1"]],
  "marginals": {{"0": {}, "1": {}, "2": {}, "3": {}}}
}}"#,
        table(true),
        table(true),
        table(true),
        table(false)
    )
}

fn criterion_8() -> Outcome {
    let parse = |doc: &str| ContextScenario::from_json(doc).map_err(|e| e.to_string());

    let product = parse(PRODUCT_SCENARIO)?;
    let r = joint_feasibility(&product, 1e-9).map_err(|e| e.to_string())?;
    let Certificate::Product { residual } = r.certificate else { return Err("product scenario: no product certificate".into()) };
    ensure(r.feasible && residual <= 1e-9, || format!("product: feasible={} residual={residual:e}", r.feasible))?;

    let single = parse(SINGLE_CONTEXT_SCENARIO)?;
    let r = joint_feasibility(&single, 1e-9).map_err(|e| e.to_string())?;
    let single_residual = match &r.certificate {
        Certificate::Product { residual } => *residual,
        Certificate::Joint { support, .. } => joint_residual(&single, support),
        Certificate::Separating { .. } => return Err("single context: separating certificate".into()),
    };
    ensure(r.feasible && single_residual <= 1e-9, || format!("single context: feasible={} residual={single_residual:e}", r.feasible))?;

    let pr = parse(&pr_box_scenario())?;
    let r = joint_feasibility(&pr, 1e-9).map_err(|e| e.to_string())?;
    ensure(!r.feasible, || "PR box reported feasible".into())?;
    let Certificate::Separating { coefficients, value, bound } = &r.certificate else {
        return Err("PR box: no separating functional".into());
    };
    // brute force over the 16 deterministic assignments (A0, A1, B0, B1)
    let mut brute_bound = f64::NEG_INFINITY;
    let mut best_satisfied = 0;
    let contexts = [(0, 2, true), (0, 3, true), (1, 2, true), (1, 3, false)];
    for bits in 0..16usize {
        let a = |i: usize| bits >> (3 - i) & 1;
        let score: f64 = contexts.iter().enumerate().map(|(c, (x, y, _))| coefficients[c][2 * a(*x) + a(*y)]).sum();
        brute_bound = brute_bound.max(score);
        let satisfied = contexts.iter().filter(|(x, y, eq)| (a(*x) == a(*y)) == *eq).count();
        best_satisfied = best_satisfied.max(satisfied);
    }
    // every context is satisfied with probability one, which no mixture of
    // deterministic assignments (at most 3 of 4) can reproduce
    ensure(best_satisfied < 4, || "brute force found a deterministic PR assignment".into())?;
    ensure((brute_bound - bound).abs() <= 1e-12, || format!("bound {bound} vs brute force {brute_bound}"))?;
    let (v, b) = evaluate_functional(&pr, coefficients);
    ensure(v == *value && b == *bound, || "certificate does not re-evaluate".into())?;
    ensure(value - brute_bound > 1e-9, || format!("gap {:e} too small", value - brute_bound))?;
    Ok(format!("PR gap {:.3}, product residual {residual:.1e}", value - brute_bound))
}

fn run_cli(args: &[&str], threads: &str) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_macrospin"))
        .args(args)
        .env("THREADS", threads)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn criterion_9() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let write = |name: &str, text: &str| -> Result<String, String> {
        let path = dir.path().join(name);
        std::fs::write(&path, text).map_err(|e| e.to_string())?;
        Ok(path.to_string_lossy().into_owned())
    };
    let product = write("product.json", PRODUCT_SCENARIO)?;
    let single = write("single.json", SINGLE_CONTEXT_SCENARIO)?;
    let pr = write("pr.json", &pr_box_scenario())?;
    let axes = write("axes.txt", "1 0 0\n0 1 0\n0 0 1\n")?;

    let runs: Vec<Vec<&str>> = vec![
        vec!["commutator-scan", "--n", "6", "--spin", "1/2", "--m", "0", "--mprime", "1", "--beta-grid", "pi/6:2pi/3:4", "--representation", "dense"],
        vec!["commutator-scan", "--n", "6", "--spin", "1/2", "--m", "0", "--mprime", "1", "--beta-grid", "pi/6:2pi/3:4"],
        vec!["commutator-scan", "--n", "4", "--spin", "1", "--m", "-1", "--mprime", "2", "--beta-grid", "pi/6:2pi/3:4", "--format", "json"],
        vec!["verify-theorem", "--n", "8", "--spin", "1/2", "--beta-grid", "0:pi:27"],
        vec!["verify-theorem", "--n", "8", "--spin", "1/2", "--beta-grid", "0:pi:27", "--format", "csv"],
        vec!["commutator-scan", "--n", "2", "--spin", "1/2", "--m", "0", "--mprime", "0", "--beta-grid", "pi/2:pi/2:1"],
        vec!["context-graph", "--n", "1", "--spin", "1", "--directions", &axes],
        vec!["context-graph", "--n", "1", "--spin", "1", "--directions", &axes, "--format", "json"],
        vec!["witness", "--m", "1", "--outcome-n", "0", "--beta", "1.0", "--jmax", "5"],
        vec!["witness", "--m", "-3/2", "--outcome-n", "5/2", "--beta", "pi/3", "--jmax", "13/2"],
        vec!["witness", "--m", "0", "--outcome-n", "0", "--beta", "pi/2", "--jmax", "1"],
        vec!["feasibility", "--scenario", &product],
        vec!["feasibility", "--scenario", &single],
        vec!["feasibility", "--scenario", &pr],
    ];
    for args in &runs {
        let one = run_cli(args, "1")?;
        let four = run_cli(args, "4")?;
        ensure(!one.is_empty(), || format!("{args:?} produced no output"))?;
        ensure(one == four, || format!("{args:?} differs between THREADS=1 and THREADS=4"))?;
        let again = run_cli(args, "4")?;
        ensure(one == again, || format!("{args:?} differs between repeated runs"))?;
    }
    Ok(format!("{} invocations byte-identical", runs.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 9] = [
        ("1 Wigner engine identities", criterion_1, Duration::from_secs(10)),
        ("2 oracle equivalence", criterion_2, Duration::from_secs(5)),
        ("3 decomposition exactness", criterion_3, Duration::from_secs(1)),
        ("4 cross-representation commutators", criterion_4, Duration::from_secs(60)),
        ("5 theorem at desk scale", criterion_5, Duration::from_secs(120)),
        ("6 finite-size breakdown", criterion_6, Duration::from_secs(5)),
        ("7 witness soundness", criterion_7, Duration::from_secs(5)),
        ("8 feasibility checker", criterion_8, Duration::from_secs(5)),
        ("9 determinism across thread counts", criterion_9, Duration::from_secs(120)),
    ];
    let mut failures = 0;
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let (pass, detail) = match outcome {
            Ok(detail) if elapsed <= budget => (true, detail),
            Ok(detail) => (false, format!("{detail}; over runtime target")),
            Err(reason) => (false, reason),
        };
        failures += usize::from(!pass);
        println!(
            "{} criterion {name}: {detail} [{:.2}s / target {}s]",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all acceptance criteria passed");
}
