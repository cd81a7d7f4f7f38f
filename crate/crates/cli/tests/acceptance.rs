//! Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
//! budget. Runs without the default harness so every line is printed.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::Value;

use costbeta_core::group::{farber_deviation, GroupPresentation};
use costbeta_core::groupoid::fix_free_decompose;
use costbeta_core::homology::{average_betti, betti, euler_characteristic, laplacian_kernel_dim, nabla};
use costbeta_core::linalg::Scalars;
use costbeta_core::lipschitz::{lip_cost_exact, ExactCaps};
use costbeta_core::spectral::{lueck_bound_check, nonzero_product_check};
use costbeta_core::{generate, io, CostValue, PermutationAction};

use common::{q, Q};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs the front end in-process; returns (exit code, stdout, stderr).
fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["costbeta"];
    argv.extend_from_slice(args);
    let code = costbeta_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cli_json(args: &[&str]) -> Result<Value, String> {
    let (code, out, err) = cli(args);
    if code != 0 {
        return Err(format!("exit {code}: {err}"));
    }
    serde_json::from_str(&out).map_err(|e| e.to_string())
}

/// Parses `"a/b"` into an exact rational.
fn ratio(v: &Value) -> Q {
    let s = v.as_str().unwrap_or_else(|| panic!("expected a fraction string, got {v}"));
    let (a, b) = s.split_once('/').expect("fraction");
    Q::new(a.parse::<BigInt>().unwrap(), b.parse::<BigInt>().unwrap())
}

fn to_f64(x: &Q) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

fn manifest(dir: &Path, name: &str, kind: &str, instances: &[String]) -> String {
    let m = serde_json::json!({"schema_version": 1, "kind": kind, "instances": instances});
    let p = dir.join(name);
    std::fs::write(&p, m.to_string()).unwrap();
    p.display().to_string()
}

// 1. Free-group rank gradient along double covers.
fn free_rank_gradient() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let chain_path = dir.path().join("chain.json");
    let (code, text, err) = cli(&["generate", "double-cover-chain", "6", "--seed", "0"]);
    ensure(code == 0, || format!("generate failed: {err}"))?;
    std::fs::write(&chain_path, &text).unwrap();
    let chain = io::read_chain(&text).map_err(|e| e.to_string())?;
    ensure(chain.len() == 7, || format!("{} levels", chain.len()))?;
    for (k, a) in chain.iter().enumerate() {
        // Independent check: transitivity by BFS, rank by Euler characteristic.
        let n = a.degree();
        ensure(n == 1 << k, || format!("level {k} has degree {n}"))?;
        ensure(a.presentation().relators().is_empty(), || "relators present".into())?;
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for p in a.images() {
                for w in [p[v], p.iter().position(|&x| x == v).unwrap()] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        ensure(seen.iter().all(|&s| s), || format!("level {k} not transitive"))?;
        let rank = 2 * n - n + 1;
        ensure(Q::new((rank as i64 - 1).into(), (n as i64).into()) == q(1), || "oracle gradient".into())?;
    }
    let v = cli_json(&["rank-gradient", "--chain", chain_path.to_str().unwrap(), "--out", "json"])?;
    let rows = v["rows"].as_array().unwrap();
    for (k, row) in rows.iter().enumerate() {
        let index = row["index"].as_u64().unwrap();
        let lower = row["rank"]["lower"].as_u64().unwrap();
        let upper = row["rank"]["upper"].as_u64().unwrap();
        ensure(index == 1 << k && lower == upper && lower == index + 1, || {
            format!("level {k}: index {index}, rank [{lower}, {upper}]")
        })?;
        ensure(ratio(&row["gradient_lower"]) == q(1) && ratio(&row["gradient_upper"]) == q(1), || {
            format!("level {k}: gradient {row}")
        })?;
        ensure(ratio(&row["cost_lower"]) == q(2) && ratio(&row["cost_upper"]) == q(2), || {
            format!("level {k}: coset cost {row}")
        })?;
    }
    ensure(v["summary"]["final"]["cost"] == serde_json::json!(["2/1", "2/1"]), || "final cost".into())?;
    Ok(format!("degrees 1..64, gradient 1, coset cost 2 at all {} levels", rows.len()))
}

// 2. Exact Lipschitz cost against exhaustive subsets.
fn lipschitz_exactness() -> Outcome {
    let corpus = common::small_graph_corpus();
    let tasks: Vec<(usize, usize)> = corpus
        .iter()
        .enumerate()
        .flat_map(|(i, (_, g))| (1..g.vertex_count().max(2)).map(move |l| (i, l)))
        .collect();
    let results: Vec<Result<(), String>> = tasks
        .par_iter()
        .map(|&(i, l)| {
            let (name, g) = &corpus[i];
            let n = g.vertex_count();
            let sol = lip_cost_exact(g, l, ExactCaps::default()).map_err(|e| format!("{name} L={l}: {e}"))?;
            let oracle = common::lip_cost_oracle(g, l);
            ensure(sol.cost == CostValue::new(oracle as i64, n as i64).unwrap(), || {
                format!("{name} L={l}: solver {} vs oracle {oracle}/{n}", sol.cost)
            })?;
            ensure(common::lip_equivalent(n, &sol.edges, g.edges(), l), || {
                format!("{name} L={l}: edge set not equivalent")
            })
        })
        .collect();
    for r in results {
        r?;
    }
    for n in 3..=8usize {
        let c = generate::cycle(n).unwrap();
        let full = lip_cost_exact(&c, n - 1, ExactCaps::default()).unwrap().cost;
        let one = lip_cost_exact(&c, 1, ExactCaps::default()).unwrap().cost;
        ensure(full == CostValue::new(n as i64 - 1, n as i64).unwrap(), || format!("cost_(n-1)(C{n}) = {full}"))?;
        ensure(one == CostValue::new(1, 1).unwrap(), || format!("cost_1(C{n}) = {one}"))?;
    }
    Ok(format!("{} graphs, {} (graph, L) cells", corpus.len(), tasks.len()))
}

// 3. Combinatorial cost of cycles.
fn ccost_cycles() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let sizes: Vec<usize> = (3..=10).chain([12, 16, 24, 32, 48, 64, 96, 128, 192, 256, 384, 512]).collect();
    let inst: Vec<String> = sizes.iter().map(|n| format!("cycle({n})")).collect();
    let m = manifest(dir.path(), "cycles.json", "graphs", &inst);
    let n0 = sizes.iter().position(|&n| n == 32).unwrap().to_string();
    let v = cli_json(&["ccost", "--manifest", &m, "--Lmax", "8", "--n0", &n0, "--out", "json"])?;
    for row in v["rows"].as_array().unwrap() {
        if row["vertices"].as_u64().unwrap() <= 10 {
            ensure(row["exact"] == true, || format!("inexact small cell {row}"))?;
        }
    }
    let est = ratio(&v["summary"]["estimate"]);
    let err = to_f64(&(est.clone() - q(1))).abs();
    ensure(err <= 0.05, || format!("estimate {est} is {err:.4} from 1"))?;
    Ok(format!("corner estimate {est} over n up to 512, L up to 8"))
}

// 4. Short-cycle spaces of cycles.
fn elek_cycles() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let sizes: Vec<usize> = (7..=16).chain([24, 32, 48, 64]).collect();
    let inst: Vec<String> = sizes.iter().map(|n| format!("cycle({n})")).collect();
    let m = manifest(dir.path(), "cycles.json", "graphs", &inst);
    let v = cli_json(&["elek-beta", "--manifest", &m, "--qgrid", "3,4,5,6", "--out", "json"])?;
    let rows = v["rows"].as_array().unwrap();
    for row in rows {
        let n = row["vertices"].as_i64().unwrap();
        let qq = row["q"].as_i64().unwrap();
        ensure(qq < n, || "grid must stay below n".into())?;
        ensure(ratio(&row["first_form"]).is_zero(), || format!("first form {row}"))?;
        ensure(ratio(&row["second_form"]) == Q::new(1.into(), n.into()), || format!("second form {row}"))?;
    }
    let corner = ratio(&v["summary"]["corner_first"]);
    ensure(corner.is_zero(), || format!("corner {corner}"))?;
    let second = ratio(&v["summary"]["corner_second"]);
    ensure(second == Q::new(1.into(), 64.into()), || format!("second corner {second}"))?;
    Ok(format!("{} entries exact; corner 0, second-form corner {second}", rows.len()))
}

// 5. First Betti number of F_2 approximations.
fn f2_betti() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let inst: Vec<String> = (0..5).map(|s| format!("random-schreier(2, 200, {s})")).collect();
    let m = manifest(dir.path(), "f2.json", "graphs", &inst);
    let e = cli_json(&["elek-beta", "--manifest", &m, "--qgrid", "3,4,5,6", "--out", "json"])?;
    let b = cli_json(&["beta-d", "--manifest", &m, "--d", "1", "--qgrid", "3,4,5,6", "--pgrid", "1,2,3", "--out", "json"])?;
    let ec = ratio(&e["summary"]["corner_first"]);
    let bc = ratio(&b["summary"]["corner"]);
    let (ed, bd) = (to_f64(&(ec.clone() - q(1))).abs(), to_f64(&(bc.clone() - q(1))).abs());
    let detail = format!("elek corner {ec} ({:.3}), beta_1 corner {bc} ({:.3}); target 1 within 0.1", to_f64(&ec), to_f64(&bc));
    ensure(ed <= 0.1 && bd <= 0.1, || detail.clone())?;
    Ok(detail)
}

// 6. Image dimension against explicit cycle bases.
fn nabla_oracle() -> Outcome {
    let mut pairs = Vec::new();
    let mut seed = 0u64;
    while pairs.len() < 100 {
        let fibers = 1 + (seed % 3) as usize;
        let (sub, sup) = generate::random_nested_pair(fibers, 7, seed).unwrap();
        seed += 1;
        let cells: usize = sup.fibers().iter().map(|k| k.total_cells()).sum();
        if cells <= 200 {
            pairs.push((sub, sup));
        }
    }
    let checks: Vec<Result<(), String>> = pairs
        .par_iter()
        .enumerate()
        .map(|(p, (sub, sup))| {
            let n = sub.base_size() as i64;
            for i in 0..=3 {
                let total: usize = (0..sub.base_size())
                    .map(|x| common::image_rank_oracle(sub.fiber(x), sup.fiber(x), i))
                    .sum();
                let got = nabla(sub, sup, i).map_err(|e| e.to_string())?;
                ensure(got == CostValue::new(total as i64, n).unwrap(), || {
                    format!("pair {p} i={i}: nabla {got} vs oracle {total}/{n}")
                })?;
                let same = nabla(sub, sub, i).map_err(|e| e.to_string())?;
                ensure(same == average_betti(sub, i), || format!("pair {p} i={i}: nabla(S,S) {same}"))?;
            }
            Ok(())
        })
        .collect();
    for c in checks {
        c?;
    }
    Ok(format!("100 pairs (seeds 0..{seed}), degrees 0..3"))
}

// 7. Laplacian kernels, Betti numbers and Euler characteristics.
fn laplacian_betti() -> Outcome {
    let corpus = common::complex_corpus();
    let checks: Vec<Result<(), String>> = corpus
        .par_iter()
        .map(|(name, k)| {
            let dim = k.dim().unwrap_or(0);
            let mut chi_cells = 0i64;
            let mut chi_betti = 0i64;
            for i in 0..=dim {
                let b = betti(k, i, Scalars::Rationals);
                let lap = laplacian_kernel_dim(k, i);
                let oracle = common::betti_oracle(k, i);
                ensure(b == lap && b == oracle, || format!("{name} i={i}: betti {b}, laplacian {lap}, oracle {oracle}"))?;
                let sign = if i % 2 == 0 { 1 } else { -1 };
                chi_cells += sign * k.count(i) as i64;
                chi_betti += sign * b as i64;
            }
            ensure(chi_cells == chi_betti && chi_cells == euler_characteristic(k), || {
                format!("{name}: cells {chi_cells}, betti {chi_betti}")
            })
        })
        .collect();
    for c in checks {
        c?;
    }
    Ok(format!("{} complexes", corpus.len()))
}

// 8. Small-eigenvalue mass and nonzero eigenvalue products.
fn lueck_suite() -> Outcome {
    let seeds: Vec<u64> = (0..1000).collect();
    let checks: Vec<Result<(), String>> = seeds
        .par_iter()
        .map(|&s| {
            let k = 1 + (s % 20) as usize;
            let x = generate::random_sym_matrix(k, 3, s);
            for eps in [0.5, 0.1, 0.01] {
                let c = lueck_bound_check(&x, eps).map_err(|e| e.to_string())?;
                ensure(c.pass, || format!("seed {s} eps {eps}: {} > {}", c.lhs, c.rhs))?;
            }
            let p = nonzero_product_check(&x).map_err(|e| e.to_string())?;
            ensure(p.holds() && p.product >= BigInt::one(), || format!("seed {s}: product {}", p.product))?;
            ensure(p.log_sum >= -1e-9, || format!("seed {s}: log sum {}", p.log_sum))?;

            // Independent cross-check: exact kernel from rational rank,
            // nonzero spectrum from a dense eigensolver.
            let rows: Vec<Vec<Q>> = x.rows().iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect();
            let kernel = k - common::rank(&rows);
            ensure(kernel == p.kernel_dim, || format!("seed {s}: kernel {kernel} vs {}", p.kernel_dim))?;
            let m = nalgebra::DMatrix::from_fn(k, k, |i, j| x.get(i, j) as f64);
            let mut eig: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
            eig.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
            let logs: f64 = eig[kernel..].iter().map(|l| l.abs().ln()).sum();
            ensure((logs - p.log_exact).abs() <= 1e-6 * p.log_exact.abs().max(1.0), || {
                format!("seed {s}: eigensolver log {logs} vs exact {}", p.log_exact)
            })
        })
        .collect();
    for c in checks {
        c?;
    }
    Ok("1000 matrices, eps in {0.5, 0.1, 0.01}".into())
}

// 9. Fixed/free decomposition coverage.
fn decomposition_coverage() -> Outcome {
    let mut max_parts = 0;
    for s in 0..500u64 {
        let n = 1 + (s % 50) as usize;
        let phi = generate::random_partial_bijection(n, s).unwrap();
        let d = fix_free_decompose(&phi);
        ensure(d.is_valid_for(&phi), || format!("seed {s}: invalid decomposition"))?;
        // Independent structural check.
        let mut all: Vec<(usize, usize)> = d.isotropic.iter().copied().collect();
        ensure(all.iter().all(|(a, b)| a == b), || format!("seed {s}: moved pair in fixed part"))?;
        for part in &d.free_parts {
            let sources: std::collections::BTreeSet<usize> = part.iter().map(|p| p.0).collect();
            ensure(part.iter().all(|p| !sources.contains(&p.1)), || format!("seed {s}: part meets its image"))?;
            all.extend(part.iter().copied());
        }
        all.sort_unstable();
        let mut expect: Vec<(usize, usize)> = phi.pairs().collect();
        expect.sort_unstable();
        ensure(all == expect, || format!("seed {s}: parts do not partition the pairs"))?;

        let free = d.free_pair_count();
        max_parts = max_parts.max(d.free_parts.len());
        if free == 0 {
            continue;
        }
        let mut covered = 0usize;
        let two_thirds = Q::new(2.into(), 3.into());
        let mut power = Q::one();
        for k in 1..=d.free_parts.len() + 2 {
            covered += d.free_parts.get(k - 1).map_or(0, |p| p.len());
            power *= two_thirds.clone();
            let frac = Q::new((covered as i64).into(), (free as i64).into());
            ensure(frac >= Q::one() - power.clone(), || format!("seed {s}: prefix {k} covers {frac}"))?;
        }
    }
    Ok(format!("500 bijections, up to {max_parts} free parts"))
}

// 10. Farber controls.
fn farber_controls() -> Outcome {
    for n in [3usize, 5, 8, 16, 31] {
        let cyc: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let a = PermutationAction::new(GroupPresentation::free(&["a", "b"]).unwrap(), vec![cyc.clone(), cyc])
            .map_err(|e| e.to_string())?;
        let d = farber_deviation(&a, 2);
        ensure(d == costbeta_core::Rational::from_integer(1), || format!("a=b on {n} points: {d} at R=2"))?;
    }
    let mut checked = 0;
    for k in 1..=6 {
        let n = 1usize << k;
        let a = generate::cyclic_action(n).unwrap();
        for r in 1..n {
            let d = farber_deviation(&a, r);
            ensure(d == costbeta_core::Rational::from_integer(0), || format!("Z/{n} at R={r}: {d}"))?;
            checked += 1;
        }
    }
    Ok(format!("a=b gives 1 at R=2; cyclic chain gives 0 in {checked} cases with R < n"))
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Outcome); 10] = [
        (1, "free-group rank gradient", Duration::from_secs(5), free_rank_gradient),
        (2, "Lipschitz cost exactness", Duration::from_secs(120), lipschitz_exactness),
        (3, "combinatorial cost of cycles", Duration::from_secs(600), ccost_cycles),
        (4, "short-cycle beta over cycles", Duration::from_secs(60), elek_cycles),
        (5, "beta_1 of F_2 approximations", Duration::from_secs(600), f2_betti),
        (6, "nabla oracle equivalence", Duration::from_secs(300), nabla_oracle),
        (7, "Laplacian-Betti agreement", Duration::from_secs(120), laplacian_betti),
        (8, "Lueck positivity suite", Duration::from_secs(180), lueck_suite),
        (9, "decomposition coverage", Duration::from_secs(60), decomposition_coverage),
        (10, "Farber controls", Duration::from_secs(60), farber_controls),
    ];
    let only: Option<u32> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|s| s.parse().ok());
    let mut failed = 0;
    for (id, name, budget, f) in criteria {
        if only.is_some_and(|o| o != id) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if took <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the {}s budget", budget.as_secs())),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {id:>2} {}: {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
