//! Bottleneck and q-Wasserstein distances between persistence diagrams,
//! and distance series over time-ordered field sequences.
//!
//! Ground metric is L-infinity with diagonal projections for finite points.
//! Essential points (infinite death) are matched only among themselves by
//! birth difference; diagrams with different essential counts are infinitely
//! far apart.

use rayon::prelude::*;

use crate::digraph::build_grid_digraph;
use crate::error::{Error, Result};
use crate::field::GridField;
use crate::pph::{compute_pd1, PersistenceDiagram};

/// How one diagram point was matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pairing {
    /// Point `left` of the first diagram matched to point `right` of the
    /// second; indices into `pairs` of the respective diagrams.
    Matched { left: usize, right: usize },
    /// Point of the first diagram sent to the diagonal.
    LeftToDiagonal(usize),
    /// Point of the second diagram sent to the diagonal.
    RightToDiagonal(usize),
}

/// A diagram distance value with an optional optimal matching.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagramDistanceResult {
    pub value: f64,
    pub matching: Option<Vec<Pairing>>,
}

#[derive(Debug, Clone, Copy)]
struct FinitePoint {
    birth: f64,
    death: f64,
    orig: usize,
}

impl FinitePoint {
    fn to_diagonal(&self) -> f64 {
        (self.death - self.birth) / 2.0
    }
}

fn linf(a: &FinitePoint, b: &FinitePoint) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

fn split(pd: &PersistenceDiagram) -> (Vec<FinitePoint>, Vec<(f64, usize)>) {
    let mut finite = Vec::new();
    let mut infinite = Vec::new();
    for (k, p) in pd.pairs.iter().enumerate() {
        if p.death.is_infinite() {
            infinite.push((p.birth, k));
        } else {
            finite.push(FinitePoint {
                birth: p.birth,
                death: p.death,
                orig: k,
            });
        }
    }
    infinite.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    (finite, infinite)
}

/// Kuhn's augmenting-path maximum bipartite matching. `adj[i]` lists the
/// right nodes reachable from left node `i`. Returns the right-to-left
/// assignment.
fn max_matching(n_left: usize, n_right: usize, adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    fn try_augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                if owner[j].is_none()
                    || try_augment(owner[j].unwrap(), adj, seen, owner)
                {
                    owner[j] = Some(i);
                    return true;
                }
            }
        }
        false
    }
    let mut owner: Vec<Option<usize>> = vec![None; n_right];
    for i in 0..n_left {
        let mut seen = vec![false; n_right];
        try_augment(i, adj, &mut seen, &mut owner);
    }
    owner
}

/// Adjacency of the finite-part matching problem at tolerance `lambda`.
/// Left side: points of the first diagram, then one diagonal slot per point
/// of the second. Right side: points of the second diagram, then one
/// diagonal slot per point of the first.
fn adjacency_at(p1: &[FinitePoint], p2: &[FinitePoint], lambda: f64) -> Vec<Vec<usize>> {
    let (n, m) = (p1.len(), p2.len());
    let mut adj = vec![Vec::new(); n + m];
    for (i, a) in p1.iter().enumerate() {
        for (j, b) in p2.iter().enumerate() {
            if linf(a, b) <= lambda {
                adj[i].push(j);
            }
        }
        if a.to_diagonal() <= lambda {
            adj[i].extend(m..m + n);
        }
    }
    for (j, b) in p2.iter().enumerate() {
        if b.to_diagonal() <= lambda {
            adj[n + j].push(j);
        }
        adj[n + j].extend(m..m + n); // diagonal-to-diagonal, cost 0
    }
    adj
}

fn perfect_at(p1: &[FinitePoint], p2: &[FinitePoint], lambda: f64) -> Option<Vec<Option<usize>>> {
    let (n, m) = (p1.len(), p2.len());
    let adj = adjacency_at(p1, p2, lambda);
    let owner = max_matching(n + m, m + n, &adj);
    let size = owner.iter().filter(|o| o.is_some()).count();
    (size == n + m).then_some(owner)
}

/// Bottleneck distance with an optimal matching. Exact: the value is one of
/// the finitely many candidate costs, found by binary search with a perfect
/// matching test.
pub fn bottleneck_distance(
    pd1: &PersistenceDiagram,
    pd2: &PersistenceDiagram,
) -> DiagramDistanceResult {
    let (f1, i1) = split(pd1);
    let (f2, i2) = split(pd2);
    if i1.len() != i2.len() {
        return DiagramDistanceResult {
            value: f64::INFINITY,
            matching: None,
        };
    }
    let infinite_cost = i1
        .iter()
        .zip(i2.iter())
        .map(|(a, b)| (a.0 - b.0).abs())
        .fold(0.0f64, f64::max);

    let mut candidates: Vec<f64> = vec![0.0];
    for a in &f1 {
        candidates.push(a.to_diagonal());
        for b in &f2 {
            candidates.push(linf(a, b));
        }
    }
    candidates.extend(f2.iter().map(FinitePoint::to_diagonal));
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // Smallest feasible candidate.
    let mut lo = 0usize;
    let mut hi = candidates.len() - 1;
    debug_assert!(perfect_at(&f1, &f2, candidates[hi]).is_some());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if perfect_at(&f1, &f2, candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let lambda = candidates[lo];
    let owner = perfect_at(&f1, &f2, lambda).expect("binary search ended on a feasible candidate");

    let (n, m) = (f1.len(), f2.len());
    let mut matching = Vec::new();
    for (j, o) in owner.iter().enumerate() {
        match (*o, j < m) {
            (Some(i), true) if i < n => matching.push(Pairing::Matched {
                left: f1[i].orig,
                right: f2[j].orig,
            }),
            (Some(i), true) if i >= n => matching.push(Pairing::RightToDiagonal(f2[j].orig)),
            (Some(i), false) if i < n => matching.push(Pairing::LeftToDiagonal(f1[i].orig)),
            _ => {} // diagonal matched to diagonal
        }
    }
    for (a, b) in i1.iter().zip(i2.iter()) {
        matching.push(Pairing::Matched {
            left: a.1,
            right: b.1,
        });
    }
    DiagramDistanceResult {
        value: lambda.max(infinite_cost),
        matching: Some(matching),
    }
}

/// Minimum-cost assignment on a square cost matrix (Hungarian algorithm
/// with potentials). Returns the column assigned to each row.
fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based potentials; p[j] is the row matched to column j, p[0] scratch.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut p = vec![usize::MAX; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 0..n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost[i0][j - 1] - u[i0 + 1] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    if p[j] != usize::MAX {
                        u[p[j] + 1] += delta;
                    }
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == usize::MAX {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![usize::MAX; n];
    for j in 1..=n {
        if p[j] != usize::MAX {
            assign[p[j]] = j - 1;
        }
    }
    assign
}

/// q-Wasserstein distance with L-infinity ground metric: optimal transport
/// over points plus the diagonal; essential points matched among themselves
/// by birth with their costs included.
///
/// The order `q` must be at least 1.
pub fn wasserstein_distance(
    pd1: &PersistenceDiagram,
    pd2: &PersistenceDiagram,
    q: f64,
) -> DiagramDistanceResult {
    assert!(q >= 1.0, "wasserstein order must be at least 1, got {q}");
    let (f1, i1) = split(pd1);
    let (f2, i2) = split(pd2);
    if i1.len() != i2.len() {
        return DiagramDistanceResult {
            value: f64::INFINITY,
            matching: None,
        };
    }
    let (n, m) = (f1.len(), f2.len());
    let size = n + m;
    let mut total = 0.0f64;
    let mut matching = Vec::new();
    if size > 0 {
        // Rows: points of pd1 then diagonal slots for pd2. Columns: points
        // of pd2 then diagonal slots for pd1. Diagonal slots are
        // interchangeable, so slot identity carries no cost.
        let mut cost = vec![vec![0.0f64; size]; size];
        for i in 0..size {
            for j in 0..size {
                cost[i][j] = match (i < n, j < m) {
                    (true, true) => linf(&f1[i], &f2[j]).powf(q),
                    (true, false) => f1[i].to_diagonal().powf(q),
                    (false, true) => f2[j].to_diagonal().powf(q),
                    (false, false) => 0.0,
                };
            }
        }
        let assign = hungarian(&cost);
        for (i, &j) in assign.iter().enumerate() {
            total += cost[i][j];
            match (i < n, j < m) {
                (true, true) => matching.push(Pairing::Matched {
                    left: f1[i].orig,
                    right: f2[j].orig,
                }),
                (true, false) => matching.push(Pairing::LeftToDiagonal(f1[i].orig)),
                (false, true) => matching.push(Pairing::RightToDiagonal(f2[j].orig)),
                (false, false) => {}
            }
        }
    }
    for (a, b) in i1.iter().zip(i2.iter()) {
        total += (a.0 - b.0).abs().powf(q);
        matching.push(Pairing::Matched {
            left: a.1,
            right: b.1,
        });
    }
    DiagramDistanceResult {
        value: total.powf(1.0 / q),
        matching: Some(matching),
    }
}

/// Bottleneck distances between the diagrams of consecutive fields:
/// entry `(t, d)` is the distance between the diagrams of `fields[t]` and
/// `fields[t - 1]`, `t` starting at 1. All fields must share one grid.
pub fn distance_series(fields: &[GridField]) -> Result<Vec<(usize, f64)>> {
    if fields.len() < 2 {
        return Ok(Vec::new());
    }
    let spec = fields[0].spec;
    if fields.iter().any(|f| f.spec != spec) {
        return Err(Error::SpecMismatch);
    }
    let diagrams: Vec<PersistenceDiagram> = fields
        .par_iter()
        .map(|f| build_grid_digraph(f).map(|dg| compute_pd1(&dg)))
        .collect::<Result<_>>()?;
    Ok(diagrams
        .windows(2)
        .enumerate()
        .map(|(k, w)| (k + 1, bottleneck_distance(&w[1], &w[0]).value))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pd(points: &[(f64, f64)]) -> PersistenceDiagram {
        PersistenceDiagram::from_points(points)
    }

    #[test]
    fn identical_diagrams_have_zero_distance() {
        let d = pd(&[(0.1, 0.9), (0.3, 1.4), (2.0, f64::INFINITY)]);
        assert_eq!(bottleneck_distance(&d, &d).value, 0.0);
        assert_eq!(wasserstein_distance(&d, &d, 1.0).value, 0.0);
    }

    #[test]
    fn single_point_to_empty() {
        let a = pd(&[(0.0, 2.0)]);
        let b = pd(&[]);
        let r = bottleneck_distance(&a, &b);
        assert_eq!(r.value, 1.0);
        assert_eq!(r.matching, Some(vec![Pairing::LeftToDiagonal(0)]));
    }

    #[test]
    fn essential_points_match_by_birth() {
        let a = pd(&[(1.0, f64::INFINITY)]);
        let b = pd(&[(1.5, f64::INFINITY)]);
        assert_eq!(bottleneck_distance(&a, &b).value, 0.5);
    }

    #[test]
    fn essential_count_mismatch_is_infinite() {
        let a = pd(&[(1.0, f64::INFINITY)]);
        let b = pd(&[]);
        let r = bottleneck_distance(&a, &b);
        assert!(r.value.is_infinite());
        assert!(r.matching.is_none());
        assert!(wasserstein_distance(&a, &b, 2.0).value.is_infinite());
    }

    #[test]
    fn wasserstein_extra_point_costs_half_persistence() {
        let a = pd(&[(0.0, 2.0)]);
        let b = pd(&[(0.0, 2.0), (1.0, 1.2)]);
        let r = wasserstein_distance(&a, &b, 1.0);
        assert!((r.value - 0.1).abs() < 1e-12, "value {}", r.value);
        let m = r.matching.unwrap();
        assert!(m.contains(&Pairing::Matched { left: 0, right: 0 }));
        assert!(m.contains(&Pairing::RightToDiagonal(1)));
    }

    /// Exhaustive bottleneck over all partial matchings.
    fn brute_bottleneck(p1: &[(f64, f64)], p2: &[(f64, f64)]) -> f64 {
        fn rec(k: usize, p1: &[(f64, f64)], p2: &[(f64, f64)], used: &mut [bool]) -> f64 {
            if k == p1.len() {
                let leftover = p2
                    .iter()
                    .zip(used.iter())
                    .filter(|(_, &u)| !u)
                    .map(|((b, d), _)| (d - b) / 2.0)
                    .fold(0.0f64, f64::max);
                return leftover;
            }
            let (b1, d1) = p1[k];
            // Option: diagonal.
            let mut best = rec(k + 1, p1, p2, used).max((d1 - b1) / 2.0);
            for j in 0..p2.len() {
                if !used[j] {
                    used[j] = true;
                    let (b2, d2) = p2[j];
                    let c = (b1 - b2).abs().max((d1 - d2).abs());
                    best = best.min(rec(k + 1, p1, p2, used).max(c));
                    used[j] = false;
                }
            }
            best
        }
        let mut used = vec![false; p2.len()];
        rec(0, p1, p2, &mut used)
    }

    #[test]
    fn matches_brute_force_on_small_diagrams() {
        let cases = [
            (vec![(0.0, 1.0), (0.5, 2.0)], vec![(0.1, 0.9)]),
            (vec![(0.0, 4.0)], vec![(1.0, 3.0), (2.0, 2.5)]),
            (vec![], vec![(0.3, 0.8)]),
        ];
        for (a, b) in cases {
            let fast = bottleneck_distance(&pd(&a), &pd(&b)).value;
            let brute = brute_bottleneck(&a, &b);
            assert_eq!(fast, brute, "{a:?} vs {b:?}");
        }
    }

    proptest! {
        #[test]
        fn random_small_diagrams_match_brute_force(
            a in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 0..5),
            b in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 0..5),
        ) {
            let a: Vec<(f64, f64)> = a.into_iter().map(|(x, p)| (x, x + p)).collect();
            let b: Vec<(f64, f64)> = b.into_iter().map(|(x, p)| (x, x + p)).collect();
            let fast = bottleneck_distance(&pd(&a), &pd(&b)).value;
            prop_assert_eq!(fast, brute_bottleneck(&a, &b));
        }

        #[test]
        fn doubling_scales_both_distances_exactly(
            a in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 0..5),
            b in proptest::collection::vec((0.0f64..5.0, 0.0f64..5.0), 0..5),
        ) {
            let a: Vec<(f64, f64)> = a.into_iter().map(|(x, p)| (x, x + p)).collect();
            let b: Vec<(f64, f64)> = b.into_iter().map(|(x, p)| (x, x + p)).collect();
            let a2: Vec<(f64, f64)> = a.iter().map(|&(x, y)| (2.0 * x, 2.0 * y)).collect();
            let b2: Vec<(f64, f64)> = b.iter().map(|&(x, y)| (2.0 * x, 2.0 * y)).collect();
            prop_assert_eq!(
                bottleneck_distance(&pd(&a2), &pd(&b2)).value,
                2.0 * bottleneck_distance(&pd(&a), &pd(&b)).value
            );
            let w1 = wasserstein_distance(&pd(&a), &pd(&b), 1.0).value;
            let w2 = wasserstein_distance(&pd(&a2), &pd(&b2), 1.0).value;
            prop_assert!((w2 - 2.0 * w1).abs() < 1e-9 * (1.0 + w1));
        }
    }

    #[test]
    fn series_of_constant_fields_is_zero() {
        use crate::field::{gen_spiral, GridSpec, SpiralParams};
        let spec = GridSpec::new((0.0, 0.0), 1.0, 5, 5).unwrap();
        let field = gen_spiral(
            &SpiralParams {
                a: 1.0,
                alpha: 1.3,
                rho: 1.0,
                center: (2.3, 2.6),
            },
            &spec,
        )
        .unwrap();
        let series = distance_series(&[field.clone(), field.clone(), field]).unwrap();
        assert_eq!(series, vec![(1, 0.0), (2, 0.0)]);
    }

    #[test]
    fn series_rejects_mismatched_specs() {
        use crate::field::{gen_spiral, GridSpec, SpiralParams};
        let params = SpiralParams {
            a: 1.0,
            alpha: 1.3,
            rho: 1.0,
            center: (1.3, 1.6),
        };
        let f1 = gen_spiral(&params, &GridSpec::new((0.0, 0.0), 1.0, 4, 4).unwrap()).unwrap();
        let f2 = gen_spiral(&params, &GridSpec::new((0.0, 0.0), 1.0, 5, 4).unwrap()).unwrap();
        assert!(matches!(
            distance_series(&[f1, f2]),
            Err(Error::SpecMismatch)
        ));
    }
}
