//! Upper bounds for the complexity of the graph manifold described by a
//! decomposition graph.
//!
//! Every bound has the shape
//!
//! ```text
//! 5(|E| - |V| + 1) + Phi(G) + sum_j (S(beta_j/delta_j) - 1)
//!     + sum_i (3(d_i + r_i + 2h_i - 2) + sum_k (S(p_k/q_k) - 2))
//!     + min over labelings of sum_i f_{m_i, M_i}(b_i)
//! ```
//!
//! where the edge sum runs over edges not labeled `±H`. The three evaluators
//! differ in which `±H` edges are labeled and how: [`bound_regular`] has none,
//! [`bound_tree`] labels each with a [`Sign`], and [`bound_general`] ranges
//! over the optimal spanning trees, signs the tree edges and gives each
//! non-tree `±H` edge a [`PsiPrime`] value.
//!
//! The minimum is an exact exhaustive search. Search spaces beyond the
//! configured [`Limits`] are rejected, never approximated.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::farey::{cf_sum, matrix_complexity};
use crate::graph::DecompositionGraph;
use crate::spanning::{capital_phi, greedy_tree, optimal_trees, SpanningTree};

/// `m - b` below `m`, `b - M` above `M`, zero in between.
///
/// Defined for `m < M`, `m <= 1`, `M >= -1`; anything else is an error since
/// it can only come from a piece outside the admissible class.
pub fn f(m: i64, big_m: i64, b: i64) -> Result<u64> {
    if !(m < big_m && m <= 1 && big_m >= -1) {
        return Err(Error::FDomain { m, big_m });
    }
    Ok(if b < m {
        (m - b) as u64
    } else if b > big_m {
        (b - big_m) as u64
    } else {
        0
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Regular,
    Tree,
    General,
}

impl Theorem {
    pub fn name(&self) -> &'static str {
        match self {
            Theorem::Regular => "regular",
            Theorem::Tree => "tree",
            Theorem::General => "general",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Label of a `±H` edge inside the spanning tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub const ALL: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

/// Label of a `±H` edge outside the spanning tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PsiPrime {
    #[serde(rename = "++")]
    PlusPlus,
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "+-")]
    PlusMinus,
    #[serde(rename = "-+")]
    MinusPlus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "--")]
    MinusMinus,
}

impl PsiPrime {
    pub const ALL: [PsiPrime; 6] = [
        PsiPrime::PlusPlus,
        PsiPrime::Plus,
        PsiPrime::PlusMinus,
        PsiPrime::MinusPlus,
        PsiPrime::Minus,
        PsiPrime::MinusMinus,
    ];
}

/// Extra `(d+, d-)` received by an edge end.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Bump {
    plus: i64,
    minus: i64,
}

const fn bump(plus: i64, minus: i64) -> Bump {
    Bump { plus, minus }
}

/// `(source, target)` increments of one labeled `±H` edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Label {
    Sign(Sign),
    Prime(PsiPrime),
}

impl Label {
    fn bumps(self) -> (Bump, Bump) {
        match self {
            Label::Sign(Sign::Plus) => (bump(1, 0), bump(1, 0)),
            Label::Sign(Sign::Minus) => (bump(0, 1), bump(0, 1)),
            Label::Prime(PsiPrime::PlusPlus) => (bump(2, 0), bump(1, 0)),
            Label::Prime(PsiPrime::Plus) => (bump(1, 0), bump(2, 0)),
            Label::Prime(PsiPrime::PlusMinus) => (bump(1, 0), bump(0, 1)),
            Label::Prime(PsiPrime::MinusPlus) => (bump(0, 1), bump(1, 0)),
            Label::Prime(PsiPrime::Minus) => (bump(0, 1), bump(0, 2)),
            Label::Prime(PsiPrime::MinusMinus) => (bump(0, 2), bump(0, 1)),
        }
    }
}

/// Caps on the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Spanning trees enumerated when the optimal trees are needed.
    pub max_trees: u64,
    /// Labelings searched for a single spanning tree.
    pub max_assignments: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_trees: 1_000_000, max_assignments: 1 << 20 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeTerm {
    pub id: String,
    pub beta: i64,
    pub delta: i64,
    /// `S(|beta| / |delta|) - 1`.
    pub complexity: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexTerm {
    pub id: String,
    pub d: usize,
    pub r: usize,
    pub h: i64,
    /// `3(d + r + 2h - 2)`.
    pub base: u64,
    /// `sum_k (S(p_k / q_k) - 2)`.
    pub fibres: u64,
    pub m: i64,
    #[serde(rename = "M")]
    pub big_m: i64,
    pub b: i64,
    pub f: u64,
}

impl VertexTerm {
    pub fn total(&self) -> u64 {
        self.base + self.fibres + self.f
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Terms {
    /// `5(|E| - |V| + 1)`.
    pub cycle: u64,
    /// `Phi(G)`; zero for the regular and tree bounds.
    pub phi: u64,
    /// One entry per edge not labeled `±H`, by id.
    pub edges: Vec<EdgeTerm>,
    /// One entry per vertex, by id, with `m`, `M` and `f` at the witness labeling.
    pub vertices: Vec<VertexTerm>,
}

impl Terms {
    pub fn sum(&self) -> u64 {
        self.cycle
            + self.phi
            + self.edges.iter().map(|e| e.complexity).sum::<u64>()
            + self.vertices.iter().map(VertexTerm::total).sum::<u64>()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    /// Edge ids of the spanning tree used, when the bound depends on one.
    pub tree: Option<Vec<String>>,
    pub psi: BTreeMap<String, Sign>,
    pub psi_prime: BTreeMap<String, PsiPrime>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub theorem: Theorem,
    pub total: u64,
    pub terms: Terms,
    pub witnesses: Witnesses,
    /// Labelings evaluated before the minimum was certified.
    pub searched: u64,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data")
    }
}

/// Per-vertex constants independent of the labeling.
#[derive(Clone, Debug)]
struct VertexFrame {
    d: usize,
    r: usize,
    h: i64,
    base: u64,
    fibres: u64,
    /// `m` before labeling contributions: `-r - h - d^- + 1`.
    m0: i64,
    /// `M` before labeling contributions: `h + d^+ - 1`.
    big_m0: i64,
    b: i64,
}

struct Frame<'g> {
    g: &'g DecompositionGraph,
    vertices: Vec<VertexFrame>,
    cycle: u64,
    edges: Vec<EdgeTerm>,
}

impl<'g> Frame<'g> {
    fn new(g: &'g DecompositionGraph) -> Result<Self> {
        let blocking: Vec<_> =
            g.validate().violations.into_iter().filter(|v| !v.clause.is_manifold_condition()).collect();
        if !blocking.is_empty() {
            return Err(Error::NotEvaluable(blocking));
        }

        let stats = g.degree_stats();
        let vertices = g
            .vertices()
            .iter()
            .zip(&stats)
            .map(|(v, s)| {
                let r = v.data.r();
                let h = v.data.handle_count();
                let fibres = v.data.fibres().iter().map(|x| Ok(cf_sum(x.p(), x.q())? - 2)).sum::<Result<u64>>()?;
                Ok(VertexFrame {
                    d: s.d,
                    r,
                    h,
                    base: 3 * (v.data.shape_index(s.d) - 2) as u64,
                    fibres,
                    m0: -(r as i64) - h - s.d_minus as i64 + 1,
                    big_m0: h + s.d_plus as i64 - 1,
                    b: v.data.b(),
                })
            })
            .collect::<Result<Vec<_>>>()?;

        let edges = g
            .edges()
            .iter()
            .filter(|e| !e.is_special())
            .map(|e| {
                Ok(EdgeTerm {
                    id: e.id.clone(),
                    beta: e.matrix.beta(),
                    delta: e.matrix.delta(),
                    complexity: matrix_complexity(&e.matrix)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;

        Ok(Frame { g, vertices, cycle: 5 * g.cycle_rank() as u64, edges })
    }

    fn special_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.g.edges().iter().enumerate().filter(|(_, e)| e.is_special()).map(|(j, _)| j)
    }

    fn vertex_terms(&self, extra: &[Bump]) -> Result<Vec<VertexTerm>> {
        self.g
            .vertices()
            .iter()
            .zip(&self.vertices)
            .zip(extra)
            .map(|((v, fr), x)| {
                let m = fr.m0 - x.minus;
                let big_m = fr.big_m0 + x.plus;
                Ok(VertexTerm {
                    id: v.id.clone(),
                    d: fr.d,
                    r: fr.r,
                    h: fr.h,
                    base: fr.base,
                    fibres: fr.fibres,
                    m,
                    big_m,
                    b: fr.b,
                    f: f(m, big_m, fr.b)?,
                })
            })
            .collect()
    }

    fn report(
        &self,
        theorem: Theorem,
        phi: u64,
        tree: Option<&SpanningTree>,
        best: &Labeling,
        searched: u64,
    ) -> Result<BoundReport> {
        let extra = best.bumps(self.g);
        let terms = Terms { cycle: self.cycle, phi, edges: self.edges.clone(), vertices: self.vertex_terms(&extra)? };
        let mut witnesses = Witnesses { tree: tree.map(|t| t.edge_ids(self.g)), ..Default::default() };
        for &(j, label) in &best.labels {
            let id = self.g.edges()[j].id.clone();
            match label {
                Label::Sign(s) => {
                    witnesses.psi.insert(id, s);
                }
                Label::Prime(p) => {
                    witnesses.psi_prime.insert(id, p);
                }
            }
        }
        let total = terms.sum();
        Ok(BoundReport { theorem, total, terms, witnesses, searched })
    }
}

/// A complete labeling of the `±H` edges in scope.
#[derive(Clone, Debug, Default)]
struct Labeling {
    labels: Vec<(usize, Label)>,
}

impl Labeling {
    fn bumps(&self, g: &DecompositionGraph) -> Vec<Bump> {
        let mut extra = vec![Bump::default(); g.vertices().len()];
        for &(j, label) in &self.labels {
            let e = &g.edges()[j];
            let (s, t) = label.bumps();
            extra[e.from].plus += s.plus;
            extra[e.from].minus += s.minus;
            extra[e.to].plus += t.plus;
            extra[e.to].minus += t.minus;
        }
        extra
    }
}

/// One position of the odometer: an edge and the labels it may take.
struct Slot {
    edge: usize,
    from: usize,
    to: usize,
    choices: &'static [Label],
}

const SIGN_LABELS: [Label; 2] = [Label::Sign(Sign::Plus), Label::Sign(Sign::Minus)];
const PRIME_LABELS: [Label; 6] = [
    Label::Prime(PsiPrime::PlusPlus),
    Label::Prime(PsiPrime::Plus),
    Label::Prime(PsiPrime::PlusMinus),
    Label::Prime(PsiPrime::MinusPlus),
    Label::Prime(PsiPrime::Minus),
    Label::Prime(PsiPrime::MinusMinus),
];

fn search_size(signed: usize, primed: usize) -> u128 {
    2u128.saturating_pow(signed as u32).saturating_mul(6u128.saturating_pow(primed as u32))
}

struct SearchResult {
    value: u64,
    labeling: Labeling,
    visited: u64,
}

/// Lexicographic odometer over the slots (first slot most significant) with
/// incremental updates of the affected vertices. The first labeling attaining
/// the minimum wins; the search stops early once the sum reaches zero.
fn minimize(frame: &Frame<'_>, slots: &[Slot]) -> Result<SearchResult> {
    let n = frame.vertices.len();
    let mut plus = vec![0i64; n];
    let mut minus = vec![0i64; n];
    let mut digits = vec![0usize; slots.len()];

    let apply = |plus: &mut [i64], minus: &mut [i64], slot: &Slot, label: Label, sign: i64| {
        let (s, t) = label.bumps();
        plus[slot.from] += sign * s.plus;
        minus[slot.from] += sign * s.minus;
        plus[slot.to] += sign * t.plus;
        minus[slot.to] += sign * t.minus;
    };
    let f_at = |plus: &[i64], minus: &[i64], v: usize| {
        let fr = &frame.vertices[v];
        f(fr.m0 - minus[v], fr.big_m0 + plus[v], fr.b)
    };

    for slot in slots {
        apply(&mut plus, &mut minus, slot, slot.choices[0], 1);
    }
    let mut fs = (0..n).map(|v| f_at(&plus, &minus, v)).collect::<Result<Vec<_>>>()?;
    let mut sum: u64 = fs.iter().sum();

    let mut best = (sum, digits.clone());
    let mut visited = 1;
    while best.0 > 0 {
        // Advance the odometer: the last slot not at its final label moves on,
        // every later slot wraps to its first label.
        let Some(pos) = (0..slots.len()).rev().find(|&i| digits[i] + 1 < slots[i].choices.len()) else {
            break;
        };
        for (i, slot) in slots.iter().enumerate().skip(pos) {
            let next = if i == pos { digits[i] + 1 } else { 0 };
            if next == digits[i] {
                continue;
            }
            apply(&mut plus, &mut minus, slot, slot.choices[digits[i]], -1);
            apply(&mut plus, &mut minus, slot, slot.choices[next], 1);
            digits[i] = next;
            for v in [slot.from, slot.to] {
                let fresh = f_at(&plus, &minus, v)?;
                sum = sum - fs[v] + fresh;
                fs[v] = fresh;
            }
        }
        visited += 1;
        if sum < best.0 {
            best = (sum, digits.clone());
        }
    }

    let labeling = Labeling { labels: slots.iter().zip(&best.1).map(|(s, &d)| (s.edge, s.choices[d])).collect() };
    Ok(SearchResult { value: best.0, labeling, visited })
}

/// Bound for graphs with no `±H` edge.
pub fn bound_regular(g: &DecompositionGraph) -> Result<BoundReport> {
    let frame = Frame::new(g)?;
    if let Some(j) = frame.special_edges().next() {
        return Err(Error::Inapplicable {
            theorem: "regular",
            reason: format!("edge {} is labeled ±H", g.edges()[j].id),
        });
    }
    let best = minimize(&frame, &[])?;
    frame.report(Theorem::Regular, 0, None, &best.labeling, best.visited)
}

/// Bound for graphs with a spanning tree containing every `±H` edge.
pub fn bound_tree(g: &DecompositionGraph, limits: &Limits) -> Result<BoundReport> {
    let frame = Frame::new(g)?;
    let phi = capital_phi(g)?;
    if phi > 0 {
        return Err(Error::Inapplicable {
            theorem: "tree",
            reason: format!("every spanning tree leaves out at least {phi} ±H edge(s)"),
        });
    }
    let slots: Vec<Slot> = frame
        .special_edges()
        .map(|j| {
            let e = &g.edges()[j];
            Slot { edge: j, from: e.from, to: e.to, choices: &SIGN_LABELS }
        })
        .collect();
    let size = search_size(slots.len(), 0);
    if size > limits.max_assignments as u128 {
        return Err(Error::CapExceeded { what: "sign assignments", needed: size, cap: limits.max_assignments });
    }
    let tree = greedy_tree(g)?;
    let best = minimize(&frame, &slots)?;
    frame.report(Theorem::Tree, 0, Some(&tree), &best.labeling, best.visited)
}

/// Bound valid for every decomposition graph.
pub fn bound_general(g: &DecompositionGraph, limits: &Limits) -> Result<BoundReport> {
    let frame = Frame::new(g)?;
    let phi = capital_phi(g)?;
    let trees = optimal_trees(g, limits.max_trees)?;

    let slots_for = |t: &SpanningTree| -> Vec<Slot> {
        let (inside, outside): (Vec<usize>, Vec<usize>) = frame.special_edges().partition(|&j| t.contains(j));
        let slot = |j: usize, choices: &'static [Label]| {
            let e = &g.edges()[j];
            Slot { edge: j, from: e.from, to: e.to, choices }
        };
        inside
            .into_iter()
            .map(|j| slot(j, &SIGN_LABELS))
            .chain(outside.into_iter().map(|j| slot(j, &PRIME_LABELS)))
            .collect()
    };

    let mut needed = 0u128;
    let mut over = false;
    for t in &trees {
        let signed = t.edge_indices().iter().filter(|&&j| g.edges()[j].is_special()).count();
        let size = search_size(signed, phi as usize);
        over |= size > limits.max_assignments as u128;
        needed = needed.saturating_add(size);
    }
    if over {
        return Err(Error::CapExceeded {
            what: "labelings per tree (total shown)",
            needed,
            cap: limits.max_assignments,
        });
    }

    let mut best: Option<(SearchResult, &SpanningTree)> = None;
    let mut visited = 0;
    for t in &trees {
        let result = minimize(&frame, &slots_for(t))?;
        visited += result.visited;
        if best.as_ref().is_none_or(|(b, _)| result.value < b.value) {
            let done = result.value == 0;
            best = Some((result, t));
            if done {
                break;
            }
        }
    }
    let (best, tree) = best.expect("a connected graph has a spanning tree");
    frame.report(Theorem::General, phi, Some(tree), &best.labeling, visited)
}

/// The most specialized applicable bound. All three agree wherever more
/// than one applies.
pub fn best_bound(g: &DecompositionGraph, limits: &Limits) -> Result<BoundReport> {
    if g.edges().iter().all(|e| !e.is_special()) {
        bound_regular(g)
    } else if capital_phi(g)? == 0 {
        bound_tree(g, limits)
    } else {
        bound_general(g, limits)
    }
}

pub fn bound(g: &DecompositionGraph, theorem: Theorem, limits: &Limits) -> Result<BoundReport> {
    match theorem {
        Theorem::Regular => bound_regular(g),
        Theorem::Tree => bound_tree(g, limits),
        Theorem::General => bound_general(g, limits),
    }
}
