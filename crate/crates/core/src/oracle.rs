//! Brute-force path homology oracle over the rationals.
//!
//! Independent of the fast persistence pipeline: it enumerates allowed
//! 1-paths and 2-paths of a simple digraph, solves for the boundary-invariant
//! 2-paths, and computes `dim H1 = dim ker d1 - rank d2` by exact fraction
//! arithmetic. Intended for small digraphs only; guarded at
//! [`ORACLE_MAX_VERTICES`] vertices.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::digraph::GridDigraph;
use crate::error::{Error, Result};

/// Size guard for the oracle.
pub const ORACLE_MAX_VERTICES: usize = 64;

/// A simple digraph on vertices `0..n_vertices`: no loops, no multi-edges.
#[derive(Debug, Clone)]
pub struct SmallDigraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl SmallDigraph {
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(a, b) in &edges {
            if a >= n_vertices || b >= n_vertices {
                return Err(Error::Grid(format!(
                    "edge ({a}, {b}) out of range for {n_vertices} vertices"
                )));
            }
            if a == b {
                return Err(Error::Grid(format!("loop at vertex {a} is not allowed")));
            }
            if !seen.insert((a, b)) {
                return Err(Error::Grid(format!("duplicate edge ({a}, {b})")));
            }
        }
        Ok(SmallDigraph { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }
}

/// Sparse column with rational entries, kept sorted by row.
type Column = Vec<(usize, BigRational)>;

fn rat(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Rank of a sparse rational matrix given by columns, via left-looking
/// Gaussian elimination with pivots normalized to 1.
fn rank_rational(columns: Vec<Column>) -> usize {
    // pivots: row -> normalized column having leading 1 at that row
    let mut pivots: HashMap<usize, Column> = HashMap::new();
    for col in columns {
        let mut work: Vec<(usize, BigRational)> = col;
        loop {
            work.retain(|(_, v)| !v.is_zero());
            let Some(&(lead_row, ref lead_val)) = work.first() else {
                break; // column eliminated to zero
            };
            match pivots.get(&lead_row) {
                Some(pivot) => {
                    // work -= lead_val * pivot
                    let factor = lead_val.clone();
                    work = add_scaled(&work, pivot, &-factor);
                }
                None => {
                    let inv = BigRational::one() / lead_val.clone();
                    let normalized: Column = work
                        .iter()
                        .map(|(r, v)| (*r, v * &inv))
                        .collect();
                    pivots.insert(lead_row, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Returns `a + factor * b` for sparse columns sorted by row.
fn add_scaled(a: &Column, b: &Column, factor: &BigRational) -> Column {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((b[j].0, &b[j].1 * factor));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = &a[i].1 + &b[j].1 * factor;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(|(r, v)| (*r, v * factor)));
    out
}

/// Exact dimension of the first path homology group of a simple digraph.
///
/// Allowed 2-paths are composable edge pairs `i -> j -> k`. The middle
/// boundary term `e_ik` of such a path is allowed when `(i, k)` is an edge
/// and vanishes by regularization when `i == k`; otherwise it obstructs
/// boundary-invariance, and the invariant space is spanned by the
/// unobstructed 2-paths together with differences of 2-paths sharing one
/// obstructed pair `(i, k)`.
pub fn oracle_h1_dim(g: &SmallDigraph) -> Result<usize> {
    if g.n_vertices > ORACLE_MAX_VERTICES {
        return Err(Error::Scale {
            vertices: g.n_vertices,
            max: ORACLE_MAX_VERTICES,
        });
    }
    let edge_index: HashMap<(usize, usize), usize> = g
        .edges
        .iter()
        .enumerate()
        .map(|(k, &e)| (e, k))
        .collect();

    // d1 columns: e_ij -> e_j - e_i over the vertex basis.
    let d1_columns: Vec<Column> = g
        .edges
        .iter()
        .map(|&(i, j)| {
            let mut col = vec![(j, rat(1)), (i, rat(-1))];
            col.sort_by_key(|&(r, _)| r);
            col
        })
        .collect();
    let rank_d1 = rank_rational(d1_columns);
    let dim_z1 = g.edges.len() - rank_d1;

    // Allowed 2-paths, split by their middle pair (i, k).
    let mut free: Vec<(usize, usize, usize)> = Vec::new(); // e_ik allowed or i == k
    let mut obstructed: HashMap<(usize, usize), Vec<(usize, usize, usize)>> = HashMap::new();
    for &(i, j) in &g.edges {
        for &(j2, k) in &g.edges {
            if j2 != j {
                continue;
            }
            if i == k || edge_index.contains_key(&(i, k)) {
                free.push((i, j, k));
            } else {
                obstructed.entry((i, k)).or_default().push((i, j, k));
            }
        }
    }

    // Boundary of a single 2-path restricted to allowed 1-paths.
    let boundary = |path: &(usize, usize, usize), sign: i64, acc: &mut HashMap<usize, BigRational>| {
        let &(i, j, k) = path;
        let mut add = |pair: (usize, usize), s: i64| {
            if let Some(&row) = edge_index.get(&pair) {
                let entry = acc.entry(row).or_insert_with(BigRational::zero);
                *entry += rat(s);
            }
        };
        add((j, k), sign);
        if i != k {
            add((i, k), -sign);
        }
        add((i, j), sign);
    };

    let mut d2_columns: Vec<Column> = Vec::new();
    let mut push_column = |acc: HashMap<usize, BigRational>| {
        let mut col: Column = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if !col.is_empty() {
            col.sort_by_key(|&(r, _)| r);
            d2_columns.push(col);
        }
    };
    for path in &free {
        let mut acc = HashMap::new();
        boundary(path, 1, &mut acc);
        push_column(acc);
    }
    let mut groups: Vec<(&(usize, usize), &Vec<(usize, usize, usize)>)> =
        obstructed.iter().collect();
    groups.sort_by_key(|(pair, _)| **pair);
    for (_, members) in groups {
        for other in &members[1..] {
            let mut acc = HashMap::new();
            boundary(&members[0], 1, &mut acc);
            boundary(other, -1, &mut acc);
            push_column(acc);
        }
    }
    let rank_d2 = rank_rational(d2_columns);

    Ok(dim_z1 - rank_d2)
}

/// Pointwise Betti numbers of the digraph filtration: for every distinct
/// edge weight `delta`, the oracle H1 dimension of the sub-digraph keeping
/// edges of weight at most `delta`.
pub fn oracle_betti_curve(dg: &GridDigraph) -> Result<Vec<(f64, usize)>> {
    let spec = dg.spec();
    let n = spec.num_points();
    let mut weighted: Vec<(f64, (usize, usize))> = dg
        .edges()
        .map(|(slot, e)| {
            let (tail, head) = dg.directed_endpoints(slot);
            (e.weight, (spec.index(tail), spec.index(head)))
        })
        .collect();
    weighted.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out = Vec::new();
    let mut prefix = 0usize;
    while prefix < weighted.len() {
        let delta = weighted[prefix].0;
        while prefix < weighted.len() && weighted[prefix].0 == delta {
            prefix += 1;
        }
        let edges: Vec<(usize, usize)> = weighted[..prefix].iter().map(|&(_, e)| e).collect();
        let g = SmallDigraph::new(n, edges)?;
        out.push((delta, oracle_h1_dim(&g)?));
    }
    Ok(out)
}
