//! Brute-force recomputation of everything the production paths optimize.
//!
//! Nothing here calls the greedy `Phi`, the tree backtracking, the odometer
//! search or the continued-fraction closed form. Spanning trees come from
//! plain subset enumeration, labelings from mixed-radix counting, matrix
//! complexities from walking the Farey dual tree, and `S(p/q)` from
//! subtractive Euclid. Only the data types, [`f`] and the degree counts of
//! [`DecompositionGraph::degree_stats`] are shared.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use crate::bounds::{f, BoundReport, PsiPrime, Sign, Theorem};
use crate::error::{Error, Result};
use crate::farey::{act, complexity_by_search, complexity_distances, farey_distance, FareyTriangle};
use crate::gl2z::{Gl2Matrix, H};
use crate::graph::DecompositionGraph;

/// Whether the chosen edges connect all vertices without a cycle.
fn is_spanning_tree(g: &DecompositionGraph, chosen: &[usize]) -> bool {
    let n = g.vertices().len();
    if n == 0 || chosen.len() + 1 != n {
        return false;
    }
    let mut adjacent = vec![Vec::new(); n];
    for &j in chosen {
        let e = &g.edges()[j];
        if e.is_loop() {
            return false;
        }
        adjacent[e.from].push(e.to);
        adjacent[e.to].push(e.from);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut reached = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &adjacent[v] {
            if !seen[w] {
                seen[w] = true;
                reached += 1;
                queue.push_back(w);
            }
        }
    }
    // n - 1 edges reaching n vertices cannot contain a cycle.
    reached == n
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Every spanning tree, by checking all `(|V| - 1)`-subsets of the edges in
/// lexicographic order. `cap` bounds the number of subsets examined.
pub fn all_spanning_trees(g: &DecompositionGraph, cap: u64) -> Result<Vec<Vec<usize>>> {
    let n = g.vertices().len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let m = g.edges().len();
    let k = n - 1;
    let subsets = binomial(m, k);
    if subsets > cap as u128 {
        return Err(Error::CapExceeded { what: "edge subsets", needed: subsets, cap });
    }
    if k > m {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        if is_spanning_tree(g, &pick) {
            out.push(pick.clone());
        }
        let Some(i) = (0..k).rev().find(|&i| pick[i] < m - k + i) else { break };
        pick[i] += 1;
        for t in i + 1..k {
            pick[t] = pick[t - 1] + 1;
        }
    }
    Ok(out)
}

fn phi_of(g: &DecompositionGraph, tree: &[usize]) -> u64 {
    (0..g.edges().len()).filter(|j| g.edges()[*j].is_special() && !tree.contains(j)).count() as u64
}

/// `min phi(T)` over the full enumeration.
pub fn bruteforce_phi(g: &DecompositionGraph, cap: u64) -> Result<u64> {
    all_spanning_trees(g, cap)?
        .iter()
        .map(|t| phi_of(g, t))
        .min()
        .ok_or_else(|| Error::NotSpanningTree("the graph has no spanning tree".into()))
}

/// `S(p/q)` by subtractive Euclid: each subtraction is one unit of a
/// continued fraction coefficient.
pub fn slow_cf_sum(p: i64, q: i64) -> u64 {
    let (mut a, mut b) = (p, q);
    let mut steps = 0;
    while b != 0 {
        if a >= b {
            a -= b;
        } else {
            (a, b) = (b, a);
            continue;
        }
        steps += 1;
    }
    steps
}

/// One labeling of the `±H` edges: the tree (general bound only), a sign per
/// `±H` tree edge and a `PsiPrime` per `±H` non-tree edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelingWitness {
    pub tree: Option<Vec<String>>,
    pub psi: BTreeMap<String, Sign>,
    pub psi_prime: BTreeMap<String, PsiPrime>,
}

/// Per-vertex `(m, M)` at a labeling, following the counting definitions
/// term by term.
fn vertex_windows(g: &DecompositionGraph, psi: &[(usize, Sign)], psi_prime: &[(usize, PsiPrime)]) -> Vec<(i64, i64)> {
    let stats = g.degree_stats();
    let count_sign = |i: usize, s: Sign| -> i64 {
        let source = psi.iter().filter(|(j, x)| g.edges()[*j].from == i && *x == s).count();
        let target = psi.iter().filter(|(j, x)| g.edges()[*j].to == i && *x == s).count();
        (source + target) as i64
    };
    let count_prime = |i: usize, source_label: PsiPrime, target_label: PsiPrime| -> (i64, i64) {
        let source = psi_prime.iter().filter(|(j, x)| g.edges()[*j].from == i && *x == source_label).count();
        let target = psi_prime.iter().filter(|(j, x)| g.edges()[*j].to == i && *x == target_label).count();
        (source as i64, target as i64)
    };
    g.vertices()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            use PsiPrime::*;
            let r = v.data.r() as i64;
            let h = v.data.handle_count();
            let plus_psi = count_sign(i, Sign::Plus);
            let minus_psi = count_sign(i, Sign::Minus);

            let (s_pp, t_pp) = count_prime(i, PlusPlus, PlusPlus);
            let (s_p, t_p) = count_prime(i, Plus, Plus);
            let (s_pm, t_mp) = count_prime(i, PlusMinus, MinusPlus);
            let plus_prime = 2 * s_pp + s_p + t_pp + 2 * t_p + s_pm + t_mp;

            let (s_mm, t_mm) = count_prime(i, MinusMinus, MinusMinus);
            let (s_m, t_m) = count_prime(i, Minus, Minus);
            let (s_mp, t_pm) = count_prime(i, MinusPlus, PlusMinus);
            let minus_prime = 2 * s_mm + s_m + t_mm + 2 * t_m + s_mp + t_pm;

            let m = -r - h - stats[i].d_minus as i64 - minus_psi - minus_prime + 1;
            let big_m = h + stats[i].d_plus as i64 + plus_psi + plus_prime - 1;
            (m, big_m)
        })
        .collect()
}

/// Everything a single labeling produces, handed to the enumeration visitor.
struct Visit<'a> {
    tree: Option<&'a [usize]>,
    psi: &'a [(usize, Sign)],
    psi_prime: &'a [(usize, PsiPrime)],
    windows: Vec<(i64, i64)>,
}

/// Calls `visit` on every labeling in enumeration order: trees in
/// lexicographic order, then signs, then `PsiPrime` values, each edge list in
/// id order with the first edge most significant.
fn for_each_labeling(
    g: &DecompositionGraph,
    theorem: Theorem,
    cap: u64,
    mut visit: impl FnMut(Visit<'_>) -> Result<()>,
) -> Result<u64> {
    let special: Vec<usize> = (0..g.edges().len()).filter(|&j| g.edges()[j].is_special()).collect();
    let trees: Vec<Option<Vec<usize>>> = match theorem {
        Theorem::Regular => {
            if !special.is_empty() {
                return Err(Error::Inapplicable { theorem: "regular", reason: "some edge is labeled ±H".into() });
            }
            vec![None]
        }
        Theorem::Tree => vec![None],
        Theorem::General => {
            let all = all_spanning_trees(g, cap)?;
            let best = all.iter().map(|t| phi_of(g, t)).min();
            all.into_iter().filter(|t| Some(phi_of(g, t)) == best).map(Some).collect()
        }
    };

    let mut visited = 0u64;
    for tree in &trees {
        let (signed, primed): (Vec<usize>, Vec<usize>) = match tree {
            Some(t) => special.iter().partition(|j| t.contains(j)),
            None => (special.clone(), Vec::new()),
        };
        let total = 2u128.saturating_pow(signed.len() as u32).saturating_mul(6u128.saturating_pow(primed.len() as u32));
        if total.saturating_add(visited as u128) > cap as u128 {
            return Err(Error::CapExceeded { what: "oracle labelings", needed: total, cap });
        }
        for code in 0..total as u64 {
            // Mixed radix, last edge least significant.
            let mut rest = code;
            let mut prime_digits = vec![0usize; primed.len()];
            for d in prime_digits.iter_mut().rev() {
                *d = (rest % 6) as usize;
                rest /= 6;
            }
            let mut sign_digits = vec![0usize; signed.len()];
            for d in sign_digits.iter_mut().rev() {
                *d = (rest % 2) as usize;
                rest /= 2;
            }
            let psi: Vec<(usize, Sign)> = signed.iter().zip(&sign_digits).map(|(&j, &d)| (j, Sign::ALL[d])).collect();
            let psi_prime: Vec<(usize, PsiPrime)> =
                primed.iter().zip(&prime_digits).map(|(&j, &d)| (j, PsiPrime::ALL[d])).collect();
            let windows = vertex_windows(g, &psi, &psi_prime);
            visit(Visit { tree: tree.as_deref(), psi: &psi, psi_prime: &psi_prime, windows })?;
            visited += 1;
        }
    }
    Ok(visited)
}

fn witness_of(g: &DecompositionGraph, v: &Visit<'_>) -> LabelingWitness {
    let id = |j: usize| g.edges()[j].id.clone();
    LabelingWitness {
        tree: v.tree.map(|t| t.iter().map(|&j| id(j)).collect()),
        psi: v.psi.iter().map(|&(j, s)| (id(j), s)).collect(),
        psi_prime: v.psi_prime.iter().map(|&(j, p)| (id(j), p)).collect(),
    }
}

/// Minimum of `sum_i f_{m_i, M_i}(b_i)` by plain enumeration, with the first
/// labeling attaining it.
pub fn bruteforce_min_f(g: &DecompositionGraph, theorem: Theorem, cap: u64) -> Result<(u64, LabelingWitness)> {
    let mut best: Option<(u64, LabelingWitness)> = None;
    for_each_labeling(g, theorem, cap, |v| {
        let mut sum = 0;
        for (vertex, &(m, big_m)) in g.vertices().iter().zip(&v.windows) {
            sum += f(m, big_m, vertex.data.b())?;
        }
        if best.as_ref().is_none_or(|(b, _)| sum < *b) {
            best = Some((sum, witness_of(g, &v)));
        }
        Ok(())
    })?;
    best.ok_or_else(|| Error::NotSpanningTree("the graph has no spanning tree".into()))
}

/// Sum of every labeling-independent term, recomputed from scratch.
fn fixed_terms(g: &DecompositionGraph, with_phi: bool, cap: u64) -> Result<u64> {
    let cycle = 5 * (g.edges().len() as i64 - g.vertices().len() as i64 + 1);
    let phi = if with_phi { bruteforce_phi(g, cap)? } else { 0 };
    let mut total = cycle as u64 + phi;
    for e in g.edges().iter().filter(|e| !e.is_special()) {
        total += complexity_by_search(&e.matrix)?;
    }
    let degrees = g.degree_stats();
    for (v, s) in g.vertices().iter().zip(&degrees) {
        let shape = s.d as i64 + v.data.r() as i64 + 2 * v.data.handle_count();
        total += 3 * (shape - 2) as u64;
        for fibre in v.data.fibres() {
            total += slow_cf_sum(fibre.p(), fibre.q()) - 2;
        }
    }
    Ok(total)
}

/// Total bound recomputed entirely by the oracle. The caller is responsible
/// for the theorem being applicable.
pub fn bruteforce_bound(g: &DecompositionGraph, theorem: Theorem, cap: u64) -> Result<(u64, LabelingWitness)> {
    let (min_f, witness) = bruteforce_min_f(g, theorem, cap)?;
    Ok((fixed_terms(g, theorem == Theorem::General, cap)? + min_f, witness))
}

/// Re-evaluates a report's witness labeling and returns the total it implies.
pub fn evaluate_witness(g: &DecompositionGraph, report: &BoundReport) -> Result<u64> {
    let index = |id: &str| g.edge_index(id).ok_or_else(|| Error::UnknownEdge(id.to_owned()));
    let psi = report.witnesses.psi.iter().map(|(id, &s)| Ok((index(id)?, s))).collect::<Result<Vec<_>>>()?;
    let psi_prime =
        report.witnesses.psi_prime.iter().map(|(id, &p)| Ok((index(id)?, p))).collect::<Result<Vec<_>>>()?;
    let windows = vertex_windows(g, &psi, &psi_prime);
    let mut sum_f = 0;
    for (vertex, &(m, big_m)) in g.vertices().iter().zip(&windows) {
        sum_f += f(m, big_m, vertex.data.b())?;
    }
    Ok(fixed_terms(g, report.theorem == Theorem::General, u64::MAX)? + sum_f)
}

/// Outcome of checking every labeling against the domain of `f`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelingAudit {
    pub visited: u64,
    /// Vertex-labelings with `m >= M`, `m > 1` or `M < -1`.
    pub domain_violations: u64,
    /// Tree bookkeeping only: vertex-labelings where
    /// `d != d+ + d- + d+_psi + d-_psi`.
    pub degree_mismatches: u64,
}

impl LabelingAudit {
    pub fn is_clean(&self) -> bool {
        self.domain_violations == 0 && self.degree_mismatches == 0
    }
}

pub fn audit_labelings(g: &DecompositionGraph, theorem: Theorem, cap: u64) -> Result<LabelingAudit> {
    let mut audit = LabelingAudit::default();
    let stats = g.degree_stats();
    audit.visited = for_each_labeling(g, theorem, cap, |v| {
        for (i, &(m, big_m)) in v.windows.iter().enumerate() {
            if !(m < big_m && m <= 1 && big_m >= -1) {
                audit.domain_violations += 1;
            }
            if theorem == Theorem::Tree {
                let ends: usize = v
                    .psi
                    .iter()
                    .map(|&(j, _)| {
                        let e = &g.edges()[j];
                        usize::from(e.from == i) + usize::from(e.to == i)
                    })
                    .sum();
                if stats[i].d != stats[i].d_plus + stats[i].d_minus + ends {
                    audit.degree_mismatches += 1;
                }
            }
        }
        Ok(())
    })?;
    Ok(audit)
}

/// A matrix where the closed form and the tree walk disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCounterexample {
    pub matrix: Gl2Matrix,
    pub formula: Option<u64>,
    /// `d(A tau_-, tau_-), d(A tau_-, tau_+), d(A tau_+, tau_-), d(A tau_+, tau_+)`.
    pub distances: [u64; 4],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LemmaReport {
    pub beta_max: i64,
    pub matrices: u64,
    pub plus_minus_h: u64,
    pub counterexamples: Vec<LemmaCounterexample>,
}

impl LemmaReport {
    pub fn is_verified(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "beta_max: {}", self.beta_max)?;
        writeln!(f, "matrices checked: {}", self.matrices)?;
        writeln!(f, "plus/minus H checked: {}", self.plus_minus_h)?;
        writeln!(f, "counterexamples: {}", self.counterexamples.len())?;
        for c in &self.counterexamples {
            let formula = c.formula.map_or("error".to_string(), |x| x.to_string());
            writeln!(f, "  {}: formula {formula}, distances {:?}", c.matrix, c.distances)?;
        }
        write!(f, "status: {}", if self.is_verified() { "verified" } else { "counterexample found" })
    }
}

/// Checks the closed-form matrix complexity against the dual-tree search for
/// every normalized matrix with `2 <= |beta| <= beta_max`, and that `A tau_-`
/// and `tau_+` realize the minimum. `±H` is checked separately: complexity
/// zero with both `tau_-` and `tau_+` fixed.
pub fn verify_lemma(beta_max: i64) -> Result<LemmaReport> {
    let mut report = LemmaReport { beta_max, ..Default::default() };

    for a in [H, -H] {
        report.plus_minus_h += 1;
        let [minus_minus, _, _, plus_plus] = complexity_distances(&a)?;
        let formula = crate::farey::matrix_complexity(&a).ok();
        if formula != Some(0) || minus_minus != 0 || plus_plus != 0 {
            report.counterexamples.push(LemmaCounterexample {
                matrix: a,
                formula,
                distances: complexity_distances(&a)?,
            });
        }
    }

    for abs_beta in 2..=beta_max {
        for eps in [1, -1] {
            let beta = eps * abs_beta;
            for alpha_abs in 0..abs_beta {
                for delta_abs in 0..abs_beta {
                    let (alpha, delta) = (eps * alpha_abs, eps * delta_abs);
                    // alpha*delta - beta*gamma = -1
                    let numer = alpha * delta + 1;
                    if numer % beta != 0 {
                        continue;
                    }
                    let a = Gl2Matrix::new(alpha, beta, numer / beta, delta)?;
                    report.matrices += 1;
                    let distances = complexity_distances(&a)?;
                    let search = *distances.iter().min().expect("four distances");
                    let formula = crate::farey::matrix_complexity(&a).ok();
                    let via_minus = farey_distance(&act(&a, &FareyTriangle::tau_minus())?, &FareyTriangle::tau_plus())?;
                    if formula != Some(search) || via_minus != search {
                        report.counterexamples.push(LemmaCounterexample { matrix: a, formula, distances });
                    }
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seifert::SeifertData;

    fn plain() -> Gl2Matrix {
        Gl2Matrix::new(1, 2, 1, 1).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize, bool)]) -> DecompositionGraph {
        let mut b = DecompositionGraph::builder();
        for i in 0..n {
            b = b.vertex(format!("v{i}"), SeifertData::from_pairs(1, &[], 0).unwrap());
        }
        for (k, &(x, y, special)) in edges.iter().enumerate() {
            b = b.edge(format!("e{k}"), format!("v{x}"), format!("v{y}"), if special { H } else { plain() });
        }
        b.build().unwrap()
    }

    fn twisted(b: i64) -> SeifertData {
        SeifertData::from_pairs(0, &[(2, 1), (2, 1)], b).unwrap()
    }

    #[test]
    fn slow_cf_sum_matches_examples() {
        assert_eq!(slow_cf_sum(3, 1), 3);
        assert_eq!(slow_cf_sum(3, 2), 3);
        assert_eq!(slow_cf_sum(7, 5), 5);
        for p in 1..60 {
            for q in 1..60 {
                if crate::farey::gcd(p, q) == 1 {
                    assert_eq!(slow_cf_sum(p, q), crate::farey::cf_sum(p, q).unwrap());
                }
            }
        }
    }

    #[test]
    fn bruteforce_phi_examples() {
        assert_eq!(bruteforce_phi(&graph(3, &[(0, 1, true), (1, 2, false)]), 1000).unwrap(), 0);
        assert_eq!(bruteforce_phi(&graph(2, &[(0, 1, true), (0, 1, true)]), 1000).unwrap(), 1);
        let square = graph(4, &[(0, 1, true), (1, 2, true), (2, 3, false), (3, 0, false)]);
        assert_eq!(bruteforce_phi(&square, 1000).unwrap(), 0);
        assert!(matches!(bruteforce_phi(&square, 3), Err(Error::CapExceeded { needed: 4, .. })));
    }

    #[test]
    fn bruteforce_min_f_examples() {
        let regular = DecompositionGraph::builder()
            .vertex("v1", twisted(0))
            .vertex("v2", twisted(0))
            .edge("e1", "v1", "v2", plain())
            .build()
            .unwrap();
        let (value, w) = bruteforce_min_f(&regular, Theorem::Tree, 100).unwrap();
        assert_eq!(value, 1);
        assert!(w.psi.is_empty() && w.psi_prime.is_empty());

        let h_edge = DecompositionGraph::builder()
            .vertex("v1", twisted(0))
            .vertex("v2", twisted(-2))
            .edge("e1", "v1", "v2", H)
            .build()
            .unwrap();
        let (value, w) = bruteforce_min_f(&h_edge, Theorem::Tree, 100).unwrap();
        assert_eq!(value, 1);
        assert_eq!(w.psi.get("e1"), Some(&Sign::Plus));
        assert_eq!(bruteforce_bound(&h_edge, Theorem::Tree, 100).unwrap().0, 7);

        let s = SeifertData::from_pairs(0, &[(2, 1)], 0).unwrap();
        let parallel = DecompositionGraph::builder()
            .vertex("v1", s.clone())
            .vertex("v2", s)
            .edge("e1", "v1", "v2", H)
            .edge("e2", "v1", "v2", H)
            .build()
            .unwrap();
        let (value, w) = bruteforce_min_f(&parallel, Theorem::General, 100).unwrap();
        assert_eq!(value, 0);
        assert_eq!(w.tree, Some(vec!["e1".to_string()]));
        assert_eq!(w.psi.get("e1"), Some(&Sign::Plus));
        assert_eq!(w.psi_prime.get("e2"), Some(&PsiPrime::PlusPlus));
        assert_eq!(bruteforce_bound(&parallel, Theorem::General, 100).unwrap().0, 12);
        let audit = audit_labelings(&parallel, Theorem::General, 100).unwrap();
        assert_eq!(audit.visited, 24);
        assert!(audit.is_clean());
    }

    #[test]
    fn lemma_small() {
        for beta_max in [2, 10] {
            let r = verify_lemma(beta_max).unwrap();
            assert!(r.is_verified(), "{r}");
            assert_eq!(r.plus_minus_h, 2);
        }
        // |beta| = 2: alpha, delta in {0, 1} with alpha*delta odd => (1 2 / 1 1) and its negative.
        assert_eq!(verify_lemma(2).unwrap().matrices, 2);
    }
}
