//! Decomposition graphs: Seifert pieces on the vertices, gluing matrices on
//! the directed edges.
//!
//! Vertices and edges are kept sorted by id. Every index-based API in this
//! crate (spanning trees, labelings, reports) therefore follows id order.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::gl2z::Gl2Matrix;
use crate::seifert::SeifertData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub id: String,
    pub data: SeifertData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    /// Index of the source vertex (`i'_j`).
    pub from: usize,
    /// Index of the target vertex (`i''_j`).
    pub to: usize,
    pub matrix: Gl2Matrix,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.from == self.to
    }

    /// Whether the label is `±H`, i.e. the edge belongs to `E'`.
    pub fn is_special(&self) -> bool {
        self.matrix.is_plus_minus_h()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

/// Collects vertices and edges by id before building a graph.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, SeifertData)>,
    edges: Vec<(String, String, String, Gl2Matrix)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>, data: SeifertData) -> Self {
        self.vertices.push((id.into(), data));
        self
    }

    pub fn edge(
        mut self,
        id: impl Into<String>,
        from: impl Into<String>,
        to: impl Into<String>,
        matrix: Gl2Matrix,
    ) -> Self {
        self.edges.push((id.into(), from.into(), to.into(), matrix));
        self
    }

    pub fn build(self) -> Result<DecompositionGraph> {
        let mut vertices: Vec<Vertex> = self.vertices.into_iter().map(|(id, data)| Vertex { id, data }).collect();
        vertices.sort_by(|a, b| a.id.cmp(&b.id));
        check_ids("vertex", vertices.iter().map(|v| v.id.as_str()))?;
        check_ids("edge", self.edges.iter().map(|e| e.0.as_str()))?;

        let lookup = |id: &str| {
            vertices
                .binary_search_by(|v| v.id.as_str().cmp(id))
                .map_err(|_| Error::Format(format!("edge endpoint {id:?} is not a vertex")))
        };
        let mut edges = self
            .edges
            .into_iter()
            .map(|(id, from, to, matrix)| Ok(Edge { from: lookup(&from)?, to: lookup(&to)?, id, matrix }))
            .collect::<Result<Vec<_>>>()?;
        edges.sort_by(|a, b| a.id.cmp(&b.id));
        Ok(DecompositionGraph { vertices, edges })
    }
}

fn check_ids<'a>(kind: &str, ids: impl Iterator<Item = &'a str>) -> Result<()> {
    let mut seen = HashSet::new();
    for id in ids {
        if id.is_empty() {
            return Err(Error::Format(format!("empty {kind} id")));
        }
        if !seen.insert(id) {
            return Err(Error::Format(format!("duplicate {kind} id {id:?}")));
        }
    }
    Ok(())
}

/// Per-vertex degree bookkeeping. `d_plus`/`d_minus` count outgoing/incoming
/// ends of edges not labeled `±H`; `d_zero` counts ends of `±H` edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DegreeStats {
    pub d: usize,
    pub d_plus: usize,
    pub d_minus: usize,
    pub d_zero: usize,
}

/// The admissibility clause a violation refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Clause {
    NonTrivial,
    Connected,
    ClassS,
    Determinant,
    NonMinimal,
    Normalization,
    ConditionI,
    ConditionIIa,
    ConditionIIb,
    ConditionIIc,
}

impl Clause {
    pub fn label(&self) -> &'static str {
        match self {
            Clause::NonTrivial => "non-trivial graph",
            Clause::Connected => "connectivity",
            Clause::ClassS => "class-S",
            Clause::Determinant => "determinant",
            Clause::NonMinimal => "non-minimal",
            Clause::Normalization => "normalization",
            Clause::ConditionI => "(i)",
            Clause::ConditionIIa => "(ii)(a)",
            Clause::ConditionIIb => "(ii)(b)",
            Clause::ConditionIIc => "(ii)(c)",
        }
    }

    /// Conditions (i) and (ii) single out specific manifolds; the bound
    /// formulas remain well defined without them.
    pub fn is_manifold_condition(&self) -> bool {
        matches!(self, Clause::ConditionI | Clause::ConditionIIa | Clause::ConditionIIb | Clause::ConditionIIc)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subject {
    Graph,
    Vertex(String),
    Edge(String),
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subject::Graph => f.write_str("graph"),
            Subject::Vertex(id) => write!(f, "vertex {id}"),
            Subject::Edge(id) => write!(f, "edge {id}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub clause: Clause,
    pub subject: Subject,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}: {}", self.clause, self.subject, self.message)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
    /// Informational remarks that do not invalidate the graph.
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, clause: Clause) -> bool {
        self.violations.iter().any(|v| v.clause == clause)
    }
}

/// Record of one application of the two normalization moves to an edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeNormalization {
    pub edge: String,
    pub source: String,
    pub target: String,
    /// Right exponent: `A -> A U^k`, `b_source -> b_source + k`.
    pub k: i64,
    /// Left exponent: `A -> U^h A`, `b_target -> b_target - h`.
    pub h: i64,
}

impl EdgeNormalization {
    pub fn is_trivial(&self) -> bool {
        self.k == 0 && self.h == 0
    }
}

impl fmt::Display for EdgeNormalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "edge {}: k = {}, h = {}; b[{}] += {}, b[{}] -= {}",
            self.edge, self.k, self.h, self.source, self.k, self.target, self.h
        )
    }
}

/// Minimal union-find over vertex indices.
pub(crate) struct Components {
    parent: Vec<usize>,
}

impl Components {
    pub(crate) fn new(n: usize) -> Self {
        Components { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl DecompositionGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.id.as_str().cmp(id)).ok()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    /// Total degree of each vertex; a loop contributes 2.
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices.len()];
        for e in &self.edges {
            d[e.from] += 1;
            d[e.to] += 1;
        }
        d
    }

    /// `|E| - |V| + 1`, the number of edges outside any spanning tree.
    pub fn cycle_rank(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut c = Components::new(self.vertices.len());
        let mut parts = self.vertices.len();
        for e in &self.edges {
            if c.union(e.from, e.to) {
                parts -= 1;
            }
        }
        parts == 1
    }

    pub fn degree_stats(&self) -> Vec<DegreeStats> {
        let mut stats = vec![DegreeStats::default(); self.vertices.len()];
        for e in &self.edges {
            if e.is_special() {
                stats[e.from].d_zero += 1;
                stats[e.to].d_zero += 1;
            } else {
                stats[e.from].d_plus += 1;
                stats[e.to].d_minus += 1;
            }
        }
        for s in &mut stats {
            s.d = s.d_plus + s.d_minus + s.d_zero;
        }
        stats
    }

    /// Checks every admissibility condition and reports all failures.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let mut push =
            |clause, subject, message: String| report.violations.push(Violation { clause, subject, message });

        if self.vertices.is_empty() || self.edges.is_empty() {
            push(Clause::NonTrivial, Subject::Graph, "the graph needs at least one edge".into());
        }
        if !self.vertices.is_empty() && !self.is_connected() {
            push(Clause::Connected, Subject::Graph, "the underlying graph is disconnected".into());
        }

        let degrees = self.degrees();
        for (v, &d) in self.vertices.iter().zip(&degrees) {
            if let Err(why) = v.data.validate_class_s(d) {
                push(
                    Clause::ClassS,
                    Subject::Vertex(v.id.clone()),
                    format!("{} with d = {d} is excluded: {why}", v.data),
                );
            }
        }

        for e in &self.edges {
            let subject = || Subject::Edge(e.id.clone());
            if e.matrix.det() != -1 {
                push(Clause::Determinant, subject(), format!("{} has determinant +1", e.matrix));
            } else if e.matrix.beta() == 0 {
                push(
                    Clause::NonMinimal,
                    subject(),
                    format!("{} has beta = 0, so a fibre is glued to a fibre", e.matrix),
                );
            } else if !e.matrix.is_normalized().unwrap_or(false) {
                push(Clause::Normalization, subject(), format!("{} is not normalized", e.matrix));
            }
        }

        for e in self.edges.iter().filter(|e| e.is_special()) {
            for end in [e.from, e.to] {
                let v = &self.vertices[end];
                if v.data.is_twisted_bundle_shape() && v.data.b() == -1 && degrees[end] == 1 {
                    push(
                        Clause::ConditionI,
                        Subject::Edge(e.id.clone()),
                        format!("label {} touches vertex {} = (0, 1, (2,1), (2,1), -1)", e.matrix, v.id),
                    );
                    break;
                }
            }
        }

        if let Some((clause, message)) = self.condition_ii() {
            push(clause, Subject::Edge(self.edges[0].id.clone()), message);
        }

        for e in self.edges.iter().filter(|e| e.is_loop()) {
            report.notes.push(format!("edge {} is a loop", e.id));
        }
        report
    }

    /// Two pieces `(0, 1, (2,1), (2,1), b_i)` joined by a single edge; `b_1`
    /// belongs to the source.
    fn condition_ii(&self) -> Option<(Clause, String)> {
        if self.vertices.len() != 2 || self.edges.len() != 1 {
            return None;
        }
        let e = &self.edges[0];
        if e.is_loop() || !self.vertices.iter().all(|v| v.data.is_twisted_bundle_shape()) {
            return None;
        }
        let bs = (self.vertices[e.from].data.b(), self.vertices[e.to].data.b());
        let a = e.matrix;
        // Representative with positive beta.
        let pos = if a.beta() < 0 { -a } else { a };
        let (beta, entries) = (pos.beta(), pos.entries());
        if a.is_plus_minus_h() && (bs == (0, 0) || bs == (-2, -2)) {
            return Some((Clause::ConditionIIa, format!("label {a} with (b1, b2) = {bs:?}")));
        }
        if beta > 1 && entries == [[1, beta], [1, beta - 1]] && bs == (-1, -2) {
            return Some((Clause::ConditionIIb, format!("label {a} with (b1, b2) = {bs:?}")));
        }
        if beta > 1 && entries == [[beta - 1, beta], [1, 1]] && bs == (0, -1) {
            return Some((Clause::ConditionIIc, format!("label {a} with (b1, b2) = {bs:?}")));
        }
        None
    }

    /// Applies `A -> A U^k` (shifting the source's `b` by `k`) and then
    /// `A -> U^h A` (shifting the target's `b` by `-h`) to one edge.
    pub fn normalize_edge(&self, edge_id: &str) -> Result<(DecompositionGraph, EdgeNormalization)> {
        let j = self.edge_index(edge_id).ok_or_else(|| Error::UnknownEdge(edge_id.to_owned()))?;
        let mut out = self.clone();
        let e = &mut out.edges[j];
        let n = e.matrix.normalize()?;
        e.matrix = n.normalized;
        let (from, to) = (e.from, e.to);

        let shift = |v: &mut Vertex, by: Option<i64>| -> Result<()> {
            let b = by.and_then(|x| v.data.b().checked_add(x)).ok_or(Error::Overflow("b"))?;
            v.data = v.data.with_b(b);
            Ok(())
        };
        shift(&mut out.vertices[from], Some(n.k))?;
        shift(&mut out.vertices[to], n.h.checked_neg())?;

        let record = EdgeNormalization {
            edge: edge_id.to_owned(),
            source: out.vertices[from].id.clone(),
            target: out.vertices[to].id.clone(),
            k: n.k,
            h: n.h,
        };
        Ok((out, record))
    }

    /// Normalizes every edge in id order.
    pub fn normalize_all(&self) -> Result<(DecompositionGraph, Vec<EdgeNormalization>)> {
        let mut g = self.clone();
        let mut moves = Vec::with_capacity(self.edges.len());
        for e in &self.edges {
            let (next, record) = g.normalize_edge(&e.id)?;
            g = next;
            moves.push(record);
        }
        Ok((g, moves))
    }
}
