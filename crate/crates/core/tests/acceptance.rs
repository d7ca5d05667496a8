//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.

mod common;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use starcorr::bell::{bell_terms, bell_value, local_bound, BellMatrix};
use starcorr::nlocal::{
    behavior_from_strategy, classical_max, reduce, sample_strategies, saturating_families,
    NLocalStrategy, SignConstraint,
};
use starcorr::qmath::{
    bell_basis_2q, pauli, permute_subsystems, tensor_all, werner, ComplexMatrix, DensityMatrix,
    Observable, ProjectiveMeasurement,
};
use starcorr::qnet::{
    behavior_from_quantum, critical_visibility, tensorize, Preset, QuantumNetworkStrategy,
    Visibility,
};
use starcorr::star::{
    evaluate, network_correlator, nth_root_abs, product_bound_check, star_bound, NodeSetting,
    StarScenario,
};

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn run_criterion(id: u32, title: &str, check: impl FnOnce() -> Outcome) -> bool {
    let outcome = catch_unwind(AssertUnwindSafe(check))
        .unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
    let (ok, detail) = match &outcome {
        Ok(d) => (true, d.as_str()),
        Err(d) => (false, d.as_str()),
    };
    let line = format!(
        "{} criterion {id:>2} {title}: {detail}\n",
        if ok { "PASS" } else { "FAIL" }
    );
    // written past the test harness capture so the lines always show
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    ok
}

fn eval_quantum(sc: &StarScenario, qs: &QuantumNetworkStrategy) -> starcorr::star::StarEvaluation {
    evaluate(&behavior_from_quantum(qs, &sc.shape()).unwrap(), sc).unwrap()
}

fn eval_classical(sc: &StarScenario, st: &NLocalStrategy) -> starcorr::star::StarEvaluation {
    evaluate(&behavior_from_strategy(st, &sc.shape()).unwrap(), sc).unwrap()
}

fn classical_bounds() -> Outcome {
    let chsh = local_bound(&BellMatrix::chsh()).unwrap().bound;
    let elegant = local_bound(&BellMatrix::elegant()).unwrap().bound;
    ensure!(chsh == 1.0, "CHSH bound {chsh}");
    ensure!(elegant == 6.0, "elegant bound {elegant}");
    Ok(format!("C(CHSH) = {chsh}, C(elegant) = {elegant}"))
}

fn entanglement_swapping() -> Outcome {
    let b = Preset::ElegantSwapBsm.build().unwrap();
    let beh = behavior_from_quantum(&b.strategy, &b.scenario.shape()).unwrap();
    let m = BellMatrix::elegant();
    let mut worst = 0.0f64;
    for i in 0..3 {
        for x1 in 0..4 {
            for x2 in 0..4 {
                let c = network_correlator(&beh, &b.scenario, i, &[x1, x2]).unwrap();
                worst = worst.max((c - m.get(i, x1) * m.get(i, x2) / 3.0).abs());
            }
        }
    }
    ensure!(worst < 1e-9, "correlator deviation {worst:e}");
    let ev = evaluate(&beh, &b.scenario).unwrap();
    for v in &ev.i_values {
        ensure!((v - 16.0 / 3.0).abs() < 1e-9, "I = {:?}", ev.i_values);
    }
    let target = 4.0 * 3f64.sqrt();
    ensure!((ev.s_net - target).abs() < 1e-9, "s_net {}", ev.s_net);
    Ok(format!(
        "max correlator error {worst:.1e}, I = {:.12}, s_net = {:.12}",
        ev.i_values[0], ev.s_net
    ))
}

fn critical_visibilities() -> Outcome {
    let target = 3f64.sqrt() / 2.0;
    let mut found = Vec::new();
    for p in [Preset::ElegantSwapBsm, Preset::ElegantSwappedRoles] {
        let b = p.build().unwrap();
        match critical_visibility(&b.scenario, &b.strategy).unwrap() {
            Visibility::Critical(v) => {
                ensure!((v - target).abs() < 1e-7, "{p}: v = {v}");
                found.push(format!("{p}: {v:.10}"));
            }
            Visibility::NoViolation => return Err(format!("{p}: no violation")),
        }
    }
    Ok(found.join(", "))
}

/// Flips Bob's observables so every row term is non-negative; the star
/// value only sees magnitudes.
fn align_bob(m: &BellMatrix, rho: &DensityMatrix, alice: &[Observable], bob: &[Observable]) -> Vec<Observable> {
    let terms = bell_terms(m, rho, alice, bob).unwrap();
    bob.iter()
        .zip(terms)
        .map(|(b, t)| if t < 0.0 { b.neg() } else { b.clone() })
        .collect()
}

fn tensorization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut violations = 0;
    let chsh_opt: Vec<[f64; 3]> = {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        vec![[s, 0.0, s], [-s, 0.0, s]]
    };
    for trial in 0..100 {
        let elegant = trial % 2 == 1;
        let m = if elegant { BellMatrix::elegant() } else { BellMatrix::chsh() };
        let c = local_bound(&m).unwrap().bound;
        let ket = random_ket(&mut rng, 4);
        ensure!(entanglement_witness(&ket) > 1e-6, "product state drawn");
        let rho = DensityMatrix::pure(&ket).unwrap();
        // a quarter of the trials use near-optimal settings on ψ₀₀ so the
        // violation branch is exercised
        let near_opt = trial % 4 < 2;
        let (rho, alice, bob) = if near_opt {
            let jitter = |rng: &mut ChaCha8Rng, v: [f64; 3]| {
                let w = v.map(|x| x + 0.02 * (rng.gen::<f64>() - 0.5));
                let n = w.iter().map(|x| x * x).sum::<f64>().sqrt();
                starcorr::qmath::bloch_to_observable(w.map(|x| x / n)).unwrap()
            };
            if elegant {
                let t = [[1.0, 1.0, 1.0], [1.0, -1.0, -1.0], [-1.0, 1.0, -1.0], [-1.0, -1.0, 1.0]];
                let s = 1.0 / 3f64.sqrt();
                let alice = t.iter().map(|v| jitter(&mut rng, v.map(|x| x * s))).collect();
                let bob = [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, 1.0]]
                    .iter()
                    .map(|&v| jitter(&mut rng, v))
                    .collect();
                (DensityMatrix::psi00(), alice, bob)
            } else {
                let alice = [[0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]
                    .iter()
                    .map(|&v| jitter(&mut rng, v))
                    .collect();
                let bob = chsh_opt.iter().map(|&v| jitter(&mut rng, v)).collect();
                (DensityMatrix::psi00(), alice, bob)
            }
        } else {
            let alice: Vec<Observable> = (0..m.n_a()).map(|_| random_qubit_observable(&mut rng)).collect();
            let bob: Vec<Observable> = (0..m.n_b()).map(|_| random_qubit_observable(&mut rng)).collect();
            (rho, alice, bob)
        };
        let bob = align_bob(&m, &rho, &alice, &bob);
        let s_bs = bell_value(&m, &rho, &alice, &bob).unwrap();
        for n in [2usize, 3] {
            let setup = tensorize(&m, &rho, &alice, &bob, n).unwrap();
            let ev = eval_quantum(&setup.scenario, &setup.strategy);
            worst = worst.max((ev.s_net - s_bs).abs());
            if s_bs > c + 1e-6 {
                ensure!(ev.violated, "trial {trial}: S = {s_bs} > C but no star violation");
                violations += 1;
            }
        }
    }
    ensure!(worst < 1e-9, "max |s_net − S| = {worst:e}");
    ensure!(violations > 0, "no trial exceeded the classical bound");
    Ok(format!(
        "200 tensorizations, max |s_net − S| = {worst:.1e}, {violations} violations all detected"
    ))
}

fn nlocal_soundness() -> Outcome {
    let cases = [
        ("CHSH N=2", BellMatrix::chsh(), 2usize),
        ("CHSH N=3", BellMatrix::chsh(), 3),
        ("elegant N=2", BellMatrix::elegant(), 2),
    ];
    let mut parts = Vec::new();
    for (label, m, n) in cases {
        let sc = StarScenario::homogeneous_binary(&m, n).unwrap();
        let bound = star_bound(&sc).unwrap();
        let mut best = f64::NEG_INFINITY;
        for (k, st) in sample_strategies(&sc, 10_000, 2024).unwrap().enumerate() {
            let s = eval_classical(&sc, &st).s_net;
            ensure!(s <= bound + 1e-9, "{label} sample {k}: s_net {s} > {bound}");
            best = best.max(s);
        }
        let cm = classical_max(&sc).unwrap();
        let c = local_bound(&m).unwrap().bound;
        ensure!(cm.value == c, "{label}: classical_max {} vs C {c}", cm.value);
        let witness = eval_classical(&sc, &cm.strategy).s_net;
        ensure!((witness - c).abs() < 1e-9, "{label}: witness reaches {witness}");
        parts.push(format!("{label}: max sample {best:.6} ≤ {bound}"));
    }
    Ok(parts.join("; "))
}

fn saturation_converse() -> Outcome {
    let m = BellMatrix::chsh();
    let sc = StarScenario::homogeneous_binary(&m, 2).unwrap();
    let classes = saturating_families(&m, 2).unwrap();
    let class = classes
        .iter()
        .find(|c| c.sign_pattern == [SignConstraint::Plus, SignConstraint::Plus])
        .ok_or("no (+,+) class")?;
    let mut worst = 0.0f64;
    for step in 0..=10 {
        let p = step as f64 / 10.0;
        let first_row = class.members[0].transformed[0].abs() > 0.5;
        let mix = if first_row { [p, 1.0 - p] } else { [1.0 - p, p] };
        let pt = class.point(&mix, &[1, 1]).unwrap();
        ensure!((pt[0] - p * p).abs() < 1e-12 && (pt[1] - (1.0 - p).powi(2)).abs() < 1e-12,
            "p = {p}: point {pt:?}");
        let st = class.realize(&sc, &mix, &[1, 1]).unwrap();
        let ev = eval_classical(&sc, &st);
        let s = ev.i_values[0].abs().sqrt() + ev.i_values[1].abs().sqrt();
        worst = worst.max((s - 1.0).abs());
        for (a, b) in ev.i_values.iter().zip(&pt) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure!(worst < 1e-9, "boundary deviation {worst:e}");
    Ok(format!("11 boundary points realized, max deviation {worst:.1e}"))
}

/// `A^k_x = (−1)^{λ_k + μ_k x}`, `B = Π_k (−1)^{λ_k}`, λ uniform, μ_k = 0
/// with probability r.
fn br12(r: f64, n: usize) -> NLocalStrategy {
    let weights = vec![vec![r / 2.0, (1.0 - r) / 2.0, r / 2.0, (1.0 - r) / 2.0]; n];
    let table: Vec<Vec<i8>> = (0..4)
        .map(|l| {
            let (lam, mu) = (l / 2, l % 2);
            (0..2).map(|x| if (lam + mu * x) % 2 == 0 { 1 } else { -1 }).collect()
        })
        .collect();
    let tuples = 4usize.pow(n as u32);
    let parity: Vec<usize> = (0..tuples)
        .map(|li| {
            let mut rest = li;
            let mut p = 0;
            for _ in 0..n {
                p += (rest % 4) / 2;
                rest /= 4;
            }
            p % 2
        })
        .collect();
    NLocalStrategy {
        weights,
        edge_tables: vec![table; n],
        node_table: vec![parity.clone(), parity],
    }
}

/// Saturating mixture over one sign class, with random per-λ sign flips
/// on every edge undone by the node.
fn class_mixture(rng: &mut ChaCha8Rng, m: &BellMatrix, n: usize) -> NLocalStrategy {
    let classes = saturating_families(m, n).unwrap();
    let class = &classes[rng.gen_range(0..classes.len())];
    let size = class.members.len();
    let raw: Vec<f64> = (0..size).map(|_| rng.gen::<f64>() + 0.05).collect();
    let total: f64 = raw.iter().sum();
    let w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let flips: Vec<Vec<bool>> = (0..n).map(|_| (0..size).map(|_| rng.gen_bool(0.5)).collect()).collect();
    let edge_tables = flips
        .iter()
        .map(|f| {
            class
                .members
                .iter()
                .zip(f)
                .map(|(mem, &fl)| {
                    let a = mem.assignment.values().to_vec();
                    if fl { a.iter().map(|v| -v).collect() } else { a }
                })
                .collect()
        })
        .collect();
    let tuples = size.pow(n as u32);
    let node_table = class
        .sign_pattern
        .iter()
        .map(|pat| {
            let odd_minus = *pat == SignConstraint::Minus && n % 2 == 1;
            (0..tuples)
                .map(|li| {
                    let mut rest = li;
                    let mut parity = odd_minus;
                    for k in (0..n).rev() {
                        parity ^= flips[k][rest % size];
                        rest /= size;
                    }
                    usize::from(parity)
                })
                .collect()
        })
        .collect();
    NLocalStrategy {
        weights: vec![w; n],
        edge_tables,
        node_table,
    }
}

fn check_reduction(st: &NLocalStrategy, sc: &StarScenario) -> Result<f64, String> {
    let m = sc.homogeneous().unwrap();
    let want = eval_classical(sc, st).i_values;
    let red = reduce(st, sc).map_err(|e| e.to_string())?;
    let expanded = red.to_strategy(sc).map_err(|e| e.to_string())?;
    ensure!(
        expanded.node_table.iter().all(|row| row.iter().all(|&b| b == row[0])),
        "node output not deterministic"
    );
    let got = eval_classical(sc, &expanded).i_values;
    let closed = red.i_values(m, sc.sources());
    let mut worst = 0.0f64;
    for ((a, b), c) in got.iter().zip(&want).zip(&closed) {
        worst = worst.max((a - b).abs()).max((c - b).abs());
    }
    Ok(worst)
}

fn reduction() -> Outcome {
    let mut worst = 0.0f64;
    for n in [2usize, 3] {
        for r in [0.25, 0.5, 0.75] {
            let sc = StarScenario::homogeneous_binary(&BellMatrix::chsh(), n).unwrap();
            let st = br12(r, n);
            let red = reduce(&st, &sc).map_err(|e| e.to_string())?;
            ensure!(red.node_signs.iter().all(|&b| b == 1), "b ≠ +1 for r = {r}");
            ensure!(red.shared_edge_table == [vec![1, 1], vec![1, -1]], "table {:?}", red.shared_edge_table);
            worst = worst.max(check_reduction(&st, &sc)?);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for k in 0..20 {
        let (m, n) = match k % 4 {
            0 => (BellMatrix::chsh(), 2),
            1 => (BellMatrix::chsh(), 3),
            2 => (BellMatrix::elegant(), 2),
            _ => (BellMatrix::elegant(), 3),
        };
        let sc = StarScenario::homogeneous_binary(&m, n).unwrap();
        let st = class_mixture(&mut rng, &m, n);
        worst = worst.max(check_reduction(&st, &sc).map_err(|e| format!("mixture {k}: {e}"))?);
    }
    ensure!(worst < 1e-9, "I deviation {worst:e}");
    Ok(format!("6 BR12 + 20 class mixtures reduced, max I deviation {worst:.1e}"))
}

/// Two-source network where the node measures one product observable per
/// source share, resolved into sign patterns with parity lookup.
fn product_network(
    m: &BellMatrix,
    states: [DensityMatrix; 2],
    alice: [Vec<Observable>; 2],
    bob: [Vec<Observable>; 2],
) -> (StarScenario, QuantumNetworkStrategy) {
    let node = (0..m.n_b())
        .map(|y| ProjectiveMeasurement::sign_patterns(&[bob[0][y].clone(), bob[1][y].clone()]).unwrap())
        .collect();
    let [a0, a1] = alice;
    let qs = QuantumNetworkStrategy::new(states.to_vec(), vec![a0, a1], node).unwrap();
    let sc = StarScenario::new(
        vec![m.clone(), m.clone()],
        vec![4; m.n_b()],
        (0..m.n_b()).map(|y| NodeSetting { y, f: vec![0, 1, 1, 0] }).collect(),
    )
    .unwrap();
    (sc, qs)
}

fn product_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut min_gap = f64::INFINITY;
    for trial in 0..1000 {
        let m = if trial % 2 == 0 { BellMatrix::chsh() } else { BellMatrix::elegant() };
        let states = [random_density(&mut rng, 4), random_density(&mut rng, 4)];
        let alice: [Vec<Observable>; 2] = std::array::from_fn(|_| {
            (0..m.n_a()).map(|_| random_qubit_observable(&mut rng)).collect()
        });
        let bob: [Vec<Observable>; 2] = std::array::from_fn(|_| {
            (0..m.n_b()).map(|_| random_qubit_observable(&mut rng)).collect()
        });
        // each edge's Bell value with Bob's signs chosen per row, as the node
        // does implicitly through |I_i|
        let per_edge: Vec<f64> = (0..2)
            .map(|k| {
                let aligned = align_bob(&m, &states[k], &alice[k], &bob[k]);
                bell_value(&m, &states[k], &alice[k], &aligned).unwrap()
            })
            .collect();
        let (sc, qs) = product_network(&m, states, alice, bob);
        let s_net = eval_quantum(&sc, &qs).s_net;
        let check = product_bound_check(&per_edge, s_net);
        ensure!(check.holds, "trial {trial}: s_net {s_net} > {}", check.geometric_mean);
        min_gap = min_gap.min(check.geometric_mean - s_net);
    }

    // equality: elegant settings, Werner sources with different visibilities
    let m = BellMatrix::elegant();
    let bob = vec![pauli(1), pauli(2).neg(), pauli(3)];
    let (v1, v2) = (0.9, 0.7);
    let states = [
        werner(v1, &DensityMatrix::psi00()).unwrap(),
        werner(v2, &DensityMatrix::psi00()).unwrap(),
    ];
    let per_edge: Vec<f64> = states
        .iter()
        .map(|rho| bell_value(&m, rho, &tetrahedron(), &bob).unwrap())
        .collect();
    let (sc, qs) = product_network(&m, states, [tetrahedron(), tetrahedron()], [bob.clone(), bob]);
    let s_net = eval_quantum(&sc, &qs).s_net;
    let check = product_bound_check(&per_edge, s_net);
    let want = 4.0 * 3f64.sqrt() * (v1 * v2).sqrt();
    ensure!((s_net - check.geometric_mean).abs() < 1e-9, "equality case: {s_net} vs {}", check.geometric_mean);
    ensure!((s_net - want).abs() < 1e-9, "equality case: {s_net} vs 4√3·√(v1v2)");
    Ok(format!(
        "1000 random strategies, min slack {min_gap:.2e}; equality case s_net = {s_net:.12}"
    ))
}

fn lemma_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_equality = 0.0f64;
    for _ in 0..100_000 {
        let rows = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=4);
        let x: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..rows).map(|_| rng.gen::<f64>() * 10.0).collect())
            .collect();
        let lhs: f64 = (0..rows)
            .map(|i| nth_root_abs((0..n).map(|k| x[k][i]).product(), n))
            .sum();
        let col_sums: Vec<f64> = x.iter().map(|col| col.iter().sum()).collect();
        let check = product_bound_check(&col_sums, lhs);
        ensure!(check.holds, "violated: {lhs} > {}", check.geometric_mean);
        worst_excess = worst_excess.max(lhs - check.geometric_mean);

        let same: Vec<Vec<f64>> = vec![x[0].clone(); n];
        let lhs: f64 = (0..rows)
            .map(|i| nth_root_abs((0..n).map(|k| same[k][i]).product(), n))
            .sum();
        let sums: Vec<f64> = same.iter().map(|c| c.iter().sum()).collect();
        let rhs = product_bound_check(&sums, lhs).geometric_mean;
        worst_equality = worst_equality.max((lhs - rhs).abs());
    }
    ensure!(worst_equality < 1e-9, "equal columns off by {worst_equality:e}");
    Ok(format!(
        "1e5 instances, max (lhs − rhs) = {worst_excess:.2e}, equal-column error {worst_equality:.1e}"
    ))
}

fn random_node_measurement(rng: &mut ChaCha8Rng) -> ProjectiveMeasurement {
    match rng.gen_range(0..3) {
        0 => bell_basis_2q(),
        1 => ProjectiveMeasurement::sign_patterns(&[
            random_qubit_observable(rng),
            random_qubit_observable(rng),
        ])
        .unwrap(),
        _ => ProjectiveMeasurement::binary(
            &Observable::product(&[random_qubit_observable(rng), random_qubit_observable(rng)]).unwrap(),
        )
        .unwrap(),
    }
}

/// `Tr[(ρ₁ ⊗ ρ₂) · embed(Π¹ ⊗ Π² ⊗ Q)]` on the interleaved layout
/// (edge₁, node₁, edge₂, node₂).
fn global_born(rho: &ComplexMatrix, edge_ops: [&ComplexMatrix; 2], node_op: &ComplexMatrix) -> f64 {
    let stacked = tensor_all([edge_ops[0], edge_ops[1], node_op]);
    let op = permute_subsystems(&stacked, &[2, 2, 2, 2], &[0, 2, 1, 3]).unwrap();
    (rho * &op).trace().re
}

fn born_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let states = vec![random_density(&mut rng, 4), random_density(&mut rng, 4)];
        let edges: Vec<Vec<Observable>> = (0..2)
            .map(|_| {
                let count = rng.gen_range(1..=3);
                (0..count).map(|_| random_qubit_observable(&mut rng)).collect()
            })
            .collect();
        let node: Vec<ProjectiveMeasurement> = (0..rng.gen_range(1..=3))
            .map(|_| random_node_measurement(&mut rng))
            .collect();
        let qs = QuantumNetworkStrategy::new(states.clone(), edges.clone(), node.clone()).unwrap();
        let shape = qs.shape();
        let beh = behavior_from_quantum(&qs, &shape).unwrap();
        let rho = states[0].matrix().kron(states[1].matrix());
        let proj: Vec<Vec<[ComplexMatrix; 2]>> = edges
            .iter()
            .map(|obs| obs.iter().map(|o| o.sign_projectors().unwrap()).collect())
            .collect();
        for x0 in 0..edges[0].len() {
            for x1 in 0..edges[1].len() {
                for (y, q) in node.iter().enumerate() {
                    for a0 in 0..2u8 {
                        for a1 in 0..2u8 {
                            for (b, qb) in q.projectors().iter().enumerate() {
                                let want = global_born(
                                    &rho,
                                    [&proj[0][x0][a0 as usize], &proj[1][x1][a1 as usize]],
                                    qb,
                                );
                                let got = beh.prob(&[x0, x1], y, &[a0, a1], b);
                                worst = worst.max((got - want.max(0.0)).abs());
                            }
                        }
                    }
                }
            }
        }
    }
    ensure!(worst < 1e-10, "max entry deviation {worst:e}");
    Ok(format!("50 random strategies, max entry deviation {worst:.1e}"))
}

#[test]
fn acceptance_criteria() {
    let results = [
        run_criterion(1, "classical bounds", classical_bounds),
        run_criterion(2, "entanglement swapping", entanglement_swapping),
        run_criterion(3, "critical visibility", critical_visibilities),
        run_criterion(4, "tensorization", tensorization),
        run_criterion(5, "N-local soundness", nlocal_soundness),
        run_criterion(6, "saturation converse", saturation_converse),
        run_criterion(7, "reduction", reduction),
        run_criterion(8, "product-measurement bound", product_bound),
        run_criterion(9, "geometric-mean lemma", lemma_suite),
        run_criterion(10, "Born-rule oracle", born_oracle),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
