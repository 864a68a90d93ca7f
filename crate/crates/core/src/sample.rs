//! Random instances for property tests, acceptance runs and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::farey::gcd;
use crate::gl2z::{Gl2Matrix, H};
use crate::graph::DecompositionGraph;
use crate::seifert::SeifertData;

/// `(x, y, g)` with `a x + b y = g = gcd(a, b) >= 0`.
fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut x0, mut x1) = (1, 0);
    let (mut y0, mut y1) = (0, 1);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (-x0, -y0, -r0)
    } else {
        (x0, y0, r0)
    }
}

/// Uniform-ish determinant `-1` matrix with every entry in `[-bound, bound]`
/// and `beta != 0`: `beta, delta` are drawn coprime, then `alpha, gamma` are a
/// random solution of `alpha delta - beta gamma = -1` within range.
pub fn det_minus_one<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Gl2Matrix {
    assert!(bound >= 1);
    loop {
        let beta = rng.gen_range(-bound..=bound);
        let delta = rng.gen_range(-bound..=bound);
        if beta == 0 || gcd(beta, delta) != 1 {
            continue;
        }
        // x delta + y beta = 1, so alpha = -x, gamma = y.
        let (x, y, _) = extended_gcd(delta, beta);
        let (alpha0, gamma0) = (-x, y);
        // alpha0 + t beta and gamma0 + t delta must stay in range.
        let (mut lo, mut hi) = (i64::MIN, i64::MAX);
        for (base, step) in [(alpha0, beta), (gamma0, delta)] {
            if step == 0 {
                if base.abs() > bound {
                    lo = 1;
                    hi = 0;
                }
                continue;
            }
            // base + t step in [-bound, bound]; solve with a positive divisor.
            let (s, sign) = if step > 0 { (step, 1) } else { (-step, -1) };
            let u_lo = -(bound + base).div_euclid(s);
            let u_hi = (bound - base).div_euclid(s);
            let (a, b) = if sign == 1 { (u_lo, u_hi) } else { (-u_hi, -u_lo) };
            lo = lo.max(a);
            hi = hi.min(b);
        }
        if lo > hi {
            continue;
        }
        let t = rng.gen_range(lo..=hi);
        let (alpha, gamma) = (alpha0 + t * beta, gamma0 + t * delta);
        if let Ok(m) = Gl2Matrix::new(alpha, beta, gamma, delta) {
            if m.entries().iter().flatten().all(|e| e.abs() <= bound) {
                return m;
            }
        }
    }
}

/// Normalized determinant `-1` matrix with `2 <= |beta| <= beta_max`.
pub fn normalized_matrix<R: Rng + ?Sized>(rng: &mut R, beta_max: i64) -> Gl2Matrix {
    assert!(beta_max >= 2);
    loop {
        let size = rng.gen_range(2..=beta_max);
        let eps = if rng.gen_bool(0.5) { 1 } else { -1 };
        let delta = eps * rng.gen_range(0..size);
        if gcd(size, delta) != 1 {
            continue;
        }
        let beta = eps * size;
        // alpha delta = beta gamma - 1: alpha = -delta^{-1} mod beta, in the window.
        let (x, _, _) = extended_gcd(delta, beta);
        let alpha = eps * (-x * eps).rem_euclid(size);
        let gamma = (alpha * delta + 1) / beta;
        if let Ok(m) = Gl2Matrix::new(alpha, beta, gamma, delta) {
            if matches!(m.is_normalized(), Ok(true)) {
                return m;
            }
        }
    }
}

/// Size and value ranges for [`graph`].
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_vertices: usize,
    pub max_edges: usize,
    pub max_fibres: usize,
    pub max_p: i64,
    pub max_abs_b: i64,
    pub beta_max: i64,
    /// Probability that an edge is labeled `±H`.
    pub h_probability: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_vertices: 5, max_edges: 7, max_fibres: 3, max_p: 7, max_abs_b: 4, beta_max: 6, h_probability: 0.5 }
    }
}

pub fn seifert_data<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> SeifertData {
    let g = *[0, 0, 0, 0, 1, -1, -2].choose(rng).expect("non-empty");
    let r = rng.gen_range(0..=shape.max_fibres);
    let mut pairs = Vec::with_capacity(r);
    while pairs.len() < r {
        let p = rng.gen_range(2..=shape.max_p);
        let q = rng.gen_range(1..p);
        if gcd(p, q) == 1 {
            pairs.push((p, q));
        }
    }
    pairs.sort();
    let b = rng.gen_range(-shape.max_abs_b..=shape.max_abs_b);
    SeifertData::from_pairs(g, &pairs, b).expect("fibres are valid and sorted")
}

/// Connected multigraph with random pieces and normalized labels; loops and
/// parallel edges allowed. The manifold conditions are not enforced.
pub fn graph<R: Rng + ?Sized>(rng: &mut R, shape: &Shape) -> DecompositionGraph {
    let n = rng.gen_range(1..=shape.max_vertices);
    let edges = rng.gen_range(n - 1..=shape.max_edges.max(n - 1));
    graph_with(rng, shape, n, edges)
}

/// As [`graph`] with exactly `n` vertices and `edges >= n - 1` edges.
pub fn graph_with<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, n: usize, edges: usize) -> DecompositionGraph {
    assert!(n >= 1 && edges + 1 >= n);
    let mut builder = DecompositionGraph::builder();
    for i in 0..n {
        builder = builder.vertex(format!("v{i}"), seifert_data(rng, shape));
    }
    for j in 0..edges {
        let (a, b) = if j + 1 < n { (rng.gen_range(0..=j), j + 1) } else { (rng.gen_range(0..n), rng.gen_range(0..n)) };
        let (from, to) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        let matrix = if rng.gen_bool(shape.h_probability) {
            if rng.gen_bool(0.5) {
                H
            } else {
                -H
            }
        } else {
            normalized_matrix(rng, shape.beta_max)
        };
        builder = builder.edge(format!("e{j}"), format!("v{from}"), format!("v{to}"), matrix);
    }
    builder.build().expect("ids are distinct and endpoints exist")
}

/// A graph passing every validation clause, by rejection; `None` after
/// `attempts` failures.
pub fn valid_graph<R: Rng + ?Sized>(rng: &mut R, shape: &Shape, attempts: usize) -> Option<DecompositionGraph> {
    (0..attempts).map(|_| graph(rng, shape)).find(|g| g.validate().is_ok())
}
