//! One-dimensional persistent path homology of grid digraph filtrations.
//!
//! In a grid digraph there are no bigons and no triangles, so the boundary
//! space B1 is spanned exactly by the boundary-shaped unit squares. The
//! persistence of the weight filtration therefore equals the persistence of
//! the filtered 2-complex whose 1-skeleton is the grid graph (edges entering
//! by weight) and whose 2-cells are the boundary squares, each entering with
//! its heaviest edge. Births come from a union-find sweep; deaths from GF(2)
//! column reduction of the square boundary matrix.

use std::collections::HashMap;

use crate::digraph::{classify_square, EdgeSlot, GridDigraph, SquareRef, SquareShape};
use crate::error::{Error, Result};

/// Edge order of the digraph filtration: every edge slot sorted by weight,
/// ties broken by slot index, together with the distinct weight thresholds.
#[derive(Debug, Clone)]
pub struct Filtration {
    pub edges_sorted: Vec<EdgeSlot>,
    pub thresholds: Vec<f64>,
}

impl Filtration {
    pub fn new(dg: &GridDigraph) -> Self {
        let mut edges_sorted: Vec<EdgeSlot> = dg.spec().edge_slots().collect();
        edges_sorted.sort_by(|&a, &b| {
            dg.weight(a)
                .total_cmp(&dg.weight(b))
                .then_with(|| a.cmp(&b))
        });
        let mut thresholds: Vec<f64> = edges_sorted.iter().map(|&e| dg.weight(e)).collect();
        thresholds.dedup();
        Filtration {
            edges_sorted,
            thresholds,
        }
    }
}

/// One persistence pair. `death` is `f64::INFINITY` for classes that
/// survive in the full digraph; `creator` is the edge whose arrival gave
/// birth to the class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PersistencePair {
    pub birth: f64,
    pub death: f64,
    pub creator: EdgeSlot,
}

impl PersistencePair {
    pub fn is_essential(&self) -> bool {
        self.death.is_infinite()
    }
}

/// Multiset of persistence pairs of the 1-dimensional diagram.
/// Zero-persistence pairs (birth equal to death) are not stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PersistenceDiagram {
    pub pairs: Vec<PersistencePair>,
}

impl PersistenceDiagram {
    /// Pairs that persist to infinity, in stored order.
    pub fn essential(&self) -> impl Iterator<Item = &PersistencePair> {
        self.pairs.iter().filter(|p| p.is_essential())
    }

    pub fn num_essential(&self) -> usize {
        self.essential().count()
    }

    /// Number of classes alive at threshold `delta`, i.e. pairs with
    /// `birth <= delta < death`.
    pub fn betti_at(&self, delta: f64) -> usize {
        self.pairs
            .iter()
            .filter(|p| p.birth <= delta && delta < p.death)
            .count()
    }

    /// The (birth, death) multiset in sorted order, ignoring creators.
    pub fn sorted_points(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<(f64, f64)> = self.pairs.iter().map(|p| (p.birth, p.death)).collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        pts
    }

    /// Builds a diagram from bare (birth, death) points; creators are filled
    /// with the point's position. Intended for diagrams that do not come out
    /// of a filtration, e.g. hand-written distance fixtures.
    pub fn from_points(points: &[(f64, f64)]) -> Self {
        PersistenceDiagram {
            pairs: points
                .iter()
                .enumerate()
                .map(|(k, &(birth, death))| PersistencePair {
                    birth,
                    death,
                    creator: EdgeSlot(k),
                })
                .collect(),
        }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]]; // path halving
            x = self.parent[x];
        }
        x
    }

    /// Returns false when the two elements were already in one set.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }
}

/// Symmetric difference of two ascending index lists.
fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Computes the 1-dimensional persistence diagram of the digraph filtration.
pub fn compute_pd1(dg: &GridDigraph) -> PersistenceDiagram {
    let filt = Filtration::new(dg);
    compute_pd1_ordered(dg, &filt.edges_sorted)
        .expect("canonical filtration order is always valid")
}

/// Like [`compute_pd1`] but with an explicit edge order, which must be a
/// permutation of all edge slots with non-decreasing weights. Different
/// tie-breaks among equal weights change only creator metadata, never the
/// (birth, death) multiset.
pub fn compute_pd1_ordered(dg: &GridDigraph, order: &[EdgeSlot]) -> Result<PersistenceDiagram> {
    let spec = *dg.spec();
    let ne = spec.num_edges();
    if order.len() != ne {
        return Err(Error::Grid(format!(
            "filtration order has {} entries, digraph has {} edges",
            order.len(),
            ne
        )));
    }
    let mut pos_of = vec![usize::MAX; ne];
    for (pos, &e) in order.iter().enumerate() {
        if e.0 >= ne || pos_of[e.0] != usize::MAX {
            return Err(Error::Grid("filtration order is not a permutation".into()));
        }
        pos_of[e.0] = pos;
        if pos > 0 && dg.weight(order[pos - 1]) > dg.weight(e) {
            return Err(Error::Grid(
                "filtration order violates weight monotonicity".into(),
            ));
        }
    }

    // Birth sweep: an edge whose endpoints are already connected creates a
    // 1-cycle class at its own weight.
    let mut uf = UnionFind::new(spec.num_points());
    let mut positive = vec![false; ne]; // indexed by filtration position
    for (pos, &e) in order.iter().enumerate() {
        let (a, b) = spec.edge_endpoints(e);
        if !uf.union(spec.index(a), spec.index(b)) {
            positive[pos] = true;
        }
    }

    // 2-cells: boundary squares of the full digraph, entering right after
    // their last edge.
    let mut cells: Vec<(usize, SquareRef)> = spec
        .square_refs()
        .filter(|&s| classify_square(dg, s) == SquareShape::BoundarySquare)
        .map(|s| {
            let entry = spec
                .square_edges(s)
                .iter()
                .map(|e| pos_of[e.0])
                .max()
                .unwrap();
            (entry, s)
        })
        .collect();
    cells.sort_by_key(|&(entry, s)| (entry, s.j, s.i));

    // Standard column reduction over GF(2). Pivot rows are always positive
    // edges because every reduced column is a cycle and the latest edge of a
    // cycle closes it.
    let mut pivot_col: HashMap<usize, usize> = HashMap::new();
    let mut reduced: Vec<Vec<usize>> = Vec::with_capacity(cells.len());
    let mut paired = vec![false; ne]; // by filtration position
    let mut pairs = Vec::new();
    for &(entry, s) in &cells {
        let mut col: Vec<usize> = spec.square_edges(s).iter().map(|e| pos_of[e.0]).collect();
        col.sort_unstable();
        while let Some(&low) = col.last() {
            match pivot_col.get(&low) {
                Some(&other) => col = xor_sorted(&col, &reduced[other]),
                None => break,
            }
        }
        if let Some(&low) = col.last() {
            pivot_col.insert(low, reduced.len());
            paired[low] = true;
            debug_assert!(positive[low], "pivot of a square column must be a cycle-closing edge");
            let birth = dg.weight(order[low]);
            let death = dg.weight(order[entry]);
            if birth < death {
                pairs.push(PersistencePair {
                    birth,
                    death,
                    creator: order[low],
                });
            }
        }
        reduced.push(col);
    }

    for pos in 0..ne {
        if positive[pos] && !paired[pos] {
            pairs.push(PersistencePair {
                birth: dg.weight(order[pos]),
                death: f64::INFINITY,
                creator: order[pos],
            });
        }
    }
    pairs.sort_by(|a, b| {
        a.birth
            .total_cmp(&b.birth)
            .then(a.death.total_cmp(&b.death))
            .then(a.creator.cmp(&b.creator))
    });
    Ok(PersistenceDiagram { pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{build_grid_digraph, Direction, DirectedEdge};
    use crate::field::{GridField, GridSpec, Vec2};

    fn unit_spec(cols: usize, rows: usize) -> GridSpec {
        GridSpec::new((0.0, 0.0), 1.0, cols, rows).unwrap()
    }

    fn field_from_angles(spec: GridSpec, angles: &[f64]) -> GridField {
        let vectors = angles.iter().map(|&t| Vec2::new(t.cos(), t.sin())).collect();
        GridField::new(spec, vectors).unwrap()
    }

    /// A single 2x2 square with explicit edge directions and weights, given
    /// as (bottom, right, top, left).
    fn one_square(dirs: [Direction; 4], weights: [f64; 4]) -> GridDigraph {
        let spec = unit_spec(2, 2);
        let horiz = vec![
            DirectedEdge { direction: dirs[0], weight: weights[0] },
            DirectedEdge { direction: dirs[2], weight: weights[2] },
        ];
        let vert = vec![
            DirectedEdge { direction: dirs[3], weight: weights[3] },
            DirectedEdge { direction: dirs[1], weight: weights[1] },
        ];
        GridDigraph::from_parts(spec, horiz, vert).unwrap()
    }

    #[test]
    fn boundary_square_yields_empty_diagram() {
        // Both bottom-up paths rotate counterclockwise: boundary square.
        let spec = unit_spec(2, 2);
        let field = field_from_angles(spec, &[0.0, 0.4, 0.9, 1.3]);
        let dg = build_grid_digraph(&field).unwrap();
        assert_eq!(
            classify_square(&dg, SquareRef::new(0, 0)),
            SquareShape::BoundarySquare
        );
        let pd = compute_pd1(&dg);
        assert!(pd.pairs.is_empty());
        for delta in [0.0, 0.4, 0.5, 0.9, 2.0] {
            assert_eq!(pd.betti_at(delta), 0);
        }
    }

    #[test]
    fn coherent_square_survives_forever() {
        use Direction::{Backward, Forward};
        let dg = one_square(
            [Forward, Forward, Backward, Backward],
            [0.1, 0.2, 0.3, 0.4],
        );
        let pd = compute_pd1(&dg);
        assert_eq!(pd.pairs.len(), 1);
        let p = &pd.pairs[0];
        assert_eq!(p.birth, 0.4);
        assert!(p.death.is_infinite());
        assert_eq!(pd.betti_at(0.35), 0);
        assert_eq!(pd.betti_at(0.4), 1);
    }

    #[test]
    fn essential_count_matches_nonboundary_squares() {
        let spec = GridSpec::new((-2.1, -2.3), 1.0, 6, 6).unwrap();
        let field = crate::field::gen_spiral(
            &crate::field::SpiralParams {
                a: 1.0,
                alpha: 1.1,
                rho: 1.3,
                center: (0.4, 0.2),
            },
            &spec,
        )
        .unwrap();
        let dg = build_grid_digraph(&field).unwrap();
        let pd = compute_pd1(&dg);
        let nonboundary = spec
            .square_refs()
            .filter(|&s| classify_square(&dg, s) != SquareShape::BoundarySquare)
            .count();
        assert_eq!(pd.num_essential(), nonboundary);
    }

    #[test]
    fn tie_break_permutation_keeps_point_multiset() {
        // All four edges of a coherent square share one weight; both
        // tie-break orders must give the same diagram points.
        use Direction::{Backward, Forward};
        let dg = one_square([Forward, Forward, Backward, Backward], [0.5; 4]);
        let filt = Filtration::new(&dg);
        let pd_canonical = compute_pd1_ordered(&dg, &filt.edges_sorted).unwrap();
        let mut reversed = filt.edges_sorted.clone();
        reversed.reverse(); // still monotone: all weights equal
        let pd_reversed = compute_pd1_ordered(&dg, &reversed).unwrap();
        assert_eq!(pd_canonical.sorted_points(), pd_reversed.sorted_points());
    }

    #[test]
    fn ordered_rejects_bad_orders() {
        use Direction::{Backward, Forward};
        let dg = one_square([Forward, Forward, Backward, Backward], [0.1, 0.2, 0.3, 0.4]);
        let filt = Filtration::new(&dg);
        let mut too_short = filt.edges_sorted.clone();
        too_short.pop();
        assert!(compute_pd1_ordered(&dg, &too_short).is_err());
        let mut not_monotone = filt.edges_sorted.clone();
        not_monotone.swap(0, 3);
        assert!(compute_pd1_ordered(&dg, &not_monotone).is_err());
    }

    #[test]
    fn filtration_thresholds_are_distinct_and_sorted() {
        use Direction::{Backward, Forward};
        let dg = one_square([Forward, Forward, Backward, Backward], [0.3, 0.1, 0.3, 0.2]);
        let filt = Filtration::new(&dg);
        assert_eq!(filt.thresholds, vec![0.1, 0.2, 0.3]);
        let ws: Vec<f64> = filt.edges_sorted.iter().map(|&e| dg.weight(e)).collect();
        assert!(ws.windows(2).all(|w| w[0] <= w[1]));
    }
}
