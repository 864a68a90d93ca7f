//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use graphman_core::oracle::{audit_labelings, bruteforce_bound, bruteforce_phi, verify_lemma};
use graphman_core::sample::{self, Shape};
use graphman_core::{
    best_bound, bound_general, bound_regular, bound_tree, capital_phi, DecompositionGraph, Gl2Matrix, Limits, Theorem,
    H,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const CAP: u64 = 1 << 22;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn fixture_files() -> Vec<PathBuf> {
    graphman_cli::batch_inputs(&fixtures()).expect("fixture directory")
}

fn load(name: &str) -> DecompositionGraph {
    DecompositionGraph::from_json(&std::fs::read_to_string(fixtures().join(name)).unwrap()).unwrap()
}

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

fn lemma() -> Outcome {
    let start = Instant::now();
    let report = verify_lemma(30).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure(report.is_verified(), || format!("{} counterexamples", report.counterexamples.len()))?;
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!("{} matrices and ±H verified in {:.2?}", report.matrices, elapsed))
}

fn mul(a: [[i128; 2]; 2], b: [[i128; 2]; 2]) -> [[i128; 2]; 2] {
    let mut c = [[0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    c
}

fn wide(m: &Gl2Matrix) -> [[i128; 2]; 2] {
    m.entries().map(|row| row.map(i128::from))
}

fn normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let n = 10_000;
    for _ in 0..n {
        let a = sample::det_minus_one(&mut rng, 1_000_000);
        let out = a.normalize().map_err(|e| format!("{a}: {e}"))?;
        let b = out.normalized;
        let [[alpha, beta], [gamma, delta]] = b.entries();
        let eps = beta.signum();
        ensure(beta == a.beta(), || format!("{a}: beta changed"))?;
        ensure(b.det() == -1, || format!("{a}: determinant changed"))?;
        ensure(0 <= eps * alpha && eps * alpha < beta.abs(), || format!("{a} -> {b}: alpha out of window"))?;
        ensure(0 <= eps * delta && eps * delta < beta.abs(), || format!("{a} -> {b}: delta out of window"))?;
        ensure(beta as i128 * gamma as i128 > 0, || format!("{a} -> {b}: beta gamma <= 0"))?;
        if beta.abs() == 1 {
            ensure(b == H || b == -H, || format!("{a} -> {b}: |beta| = 1 but not ±H"))?;
        } else {
            ensure(delta != 0 && beta.signum() == delta.signum(), || format!("{a} -> {b}: beta/delta <= 0"))?;
        }
        let u = |k: i64| [[1, 0], [k as i128, 1]];
        ensure(mul(mul(u(out.h), wide(&a)), u(out.k)) == wide(&b), || format!("{a} -> {b}: not U^h A U^k"))?;
        let again = b.normalize().map_err(|e| e.to_string())?;
        ensure(again.normalized == b && again.k == 0 && again.h == 0, || format!("{b}: not idempotent"))?;
    }
    Ok(format!("{n} random matrices, entries within ±10^6"))
}

fn phi() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let shape = Shape { max_vertices: 5, max_edges: 8, ..Shape::default() };
    let mut instances = 0;
    let mut positive = 0;
    for n in 1..=5 {
        for m in n - 1..=8 {
            for _ in 0..40 {
                let g = sample::graph_with(&mut rng, &shape, n, m);
                let fast = capital_phi(&g).map_err(|e| e.to_string())?;
                let slow = bruteforce_phi(&g, CAP).map_err(|e| e.to_string())?;
                ensure(fast == slow, || format!("greedy {fast}, brute force {slow} on\n{}", g.to_json()))?;
                instances += 1;
                positive += usize::from(fast > 0);
            }
        }
    }
    ensure(instances >= 1000, || format!("only {instances} instances"))?;
    Ok(format!("{instances} multigraphs, {positive} with Φ > 0"))
}

/// Random valid graphs shared by the specialization and labeling criteria.
fn valid_graphs() -> Vec<DecompositionGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0004);
    let shapes = [Shape::default(), Shape { h_probability: 0.8, ..Shape::default() }];
    (0..1200).map(|i| sample::valid_graph(&mut rng, &shapes[i % 2], 100_000).expect("valid graph")).collect()
}

fn specialization(graphs: &[DecompositionGraph]) -> Outcome {
    let limits = Limits::default();
    let (mut phi_zero, mut no_special) = (0, 0);
    for g in graphs {
        let general = bound_general(g, &limits).map_err(|e| e.to_string())?.total;
        if capital_phi(g).map_err(|e| e.to_string())? == 0 {
            phi_zero += 1;
            let tree = bound_tree(g, &limits).map_err(|e| e.to_string())?.total;
            ensure(tree == general, || format!("tree {tree}, general {general} on\n{}", g.to_json()))?;
        }
        if g.edges().iter().all(|e| !e.is_special()) {
            no_special += 1;
            let regular = bound_regular(g).map_err(|e| e.to_string())?.total;
            let tree = bound_tree(g, &limits).map_err(|e| e.to_string())?.total;
            ensure(regular == tree && tree == general, || {
                format!("regular {regular}, tree {tree}, general {general} on\n{}", g.to_json())
            })?;
        }
    }
    ensure(graphs.len() >= 1000, || format!("only {} graphs", graphs.len()))?;
    ensure(phi_zero > 0 && no_special > 0, || "a case was never exercised".into())?;
    Ok(format!("{} valid graphs, {phi_zero} with Φ = 0, {no_special} without ±H edges", graphs.len()))
}

fn worked_examples() -> Outcome {
    let cases = [
        ("regular_pair.json", Theorem::Regular, 8),
        // Violates condition (ii)(c), so only the formula is checked here.
        ("invalid_shifted_pair.json", Theorem::Regular, 7),
        ("h_edge.json", Theorem::Tree, 7),
        ("loop.json", Theorem::Regular, 9),
        ("parallel_h.json", Theorem::General, 12),
    ];
    let mut seen = Vec::new();
    for (file, theorem, expected) in cases {
        let g = load(file);
        let (oracle, _) = bruteforce_bound(&g, theorem, CAP).map_err(|e| e.to_string())?;
        let report = best_bound(&g, &Limits::default()).map_err(|e| e.to_string())?;
        ensure(oracle == expected, || format!("{file}: oracle {oracle}, expected {expected}"))?;
        ensure(report.total == expected && report.theorem == theorem, || {
            format!("{file}: production {} ({}), expected {expected}", report.total, report.theorem.name())
        })?;
        seen.push(expected.to_string());
    }
    Ok(format!("{} confirmed by oracle and production", seen.join(", ")))
}

fn labeling_domain(graphs: &[DecompositionGraph]) -> Outcome {
    let mut visited = 0;
    for g in graphs {
        let mut theorems = vec![Theorem::General];
        if capital_phi(g).map_err(|e| e.to_string())? == 0 {
            theorems.push(Theorem::Tree);
        }
        for theorem in theorems {
            let audit = audit_labelings(g, theorem, CAP).map_err(|e| e.to_string())?;
            ensure(audit.is_clean(), || format!("{audit:?} ({}) on\n{}", theorem.name(), g.to_json()))?;
            visited += audit.visited;
        }
    }
    Ok(format!("{visited} labelings, 0 domain violations, 0 degree mismatches"))
}

fn run_binary(args: &[&str]) -> Result<(Vec<u8>, Option<i32>), String> {
    let out = Command::new(env!("CARGO_BIN_EXE_graphman")).args(args).output().map_err(|e| e.to_string())?;
    Ok((out.stdout, out.status.code()))
}

fn round_trip_and_determinism() -> Outcome {
    let mut files = 0;
    for path in fixture_files() {
        let text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
        let name = path.display().to_string();
        let g = DecompositionGraph::from_json(&text).map_err(|e| format!("{name}: {e}"))?;
        let back = DecompositionGraph::from_json(&g.to_json()).map_err(|e| format!("{name}: {e}"))?;
        ensure(back == g && back.to_json() == g.to_json(), || format!("{name}: round trip differs"))?;
        for flags in [&[][..], &["--breakdown"][..]] {
            let mut args = vec!["bound", name.as_str()];
            args.extend_from_slice(flags);
            let first = run_binary(&args)?;
            let second = run_binary(&args)?;
            ensure(first == second, || format!("{name} {flags:?}: runs differ"))?;
        }
        files += 1;
    }
    ensure(files > 0, || "no fixtures".into())?;
    Ok(format!("{files} fixtures round-trip; repeated bound runs byte-identical"))
}

fn main() {
    let graphs = valid_graphs();
    let criteria: Vec<Criterion<'_>> = vec![
        ("lemma verification up to |beta| = 30", Box::new(lemma)),
        ("normalization properties", Box::new(normalization)),
        ("Φ greedy equals brute force", Box::new(phi)),
        ("theorem specialization", Box::new(|| specialization(&graphs))),
        ("worked examples 8, 7, 9, 12", Box::new(worked_examples)),
        ("labeling domain invariant", Box::new(|| labeling_domain(&graphs))),
        ("format round trip and determinism", Box::new(round_trip_and_determinism)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
