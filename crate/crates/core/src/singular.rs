//! Singularity location: winding numbers of unit squares, detection driven
//! by the essential points of the persistence diagram, and weighted-center
//! coordinate estimates.

use std::collections::HashSet;

use crate::digraph::{rotation_angle, EdgeSlot, GridDigraph, SquareRef};
use crate::error::Result;
use crate::field::{GridField, GridPoint};
use crate::pph::PersistenceDiagram;

/// A detected singular square.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport {
    pub square: SquareRef,
    /// Winding number of the square, +1 for every emitted report.
    pub index: i32,
    /// Weighted-center estimate of the singularity coordinate.
    pub center: (f64, f64),
    /// The essential birth value whose edge exposed the square.
    pub trigger_weight: f64,
    /// Digraph weights of the square's edges: bottom, right, top, left.
    pub edge_weights: [f64; 4],
}

/// Sum of signed rotation angles along a closed vertex loop divided by two
/// pi, rounded to the nearest integer. The loop is traversed in the order
/// given; the last vertex connects back to the first.
pub fn loop_winding(field: &GridField, loop_points: &[GridPoint]) -> Result<i32> {
    assert!(loop_points.len() >= 3, "a closed loop needs at least 3 vertices");
    let mut sum = 0.0;
    for k in 0..loop_points.len() {
        let a = loop_points[k];
        let b = loop_points[(k + 1) % loop_points.len()];
        sum += rotation_angle(field.vector(a), field.vector(b))
            .map_err(|e| e.with_adjacency(a, b))?;
    }
    let turns = sum / std::f64::consts::TAU;
    let rounded = turns.round();
    assert!(
        (turns - rounded).abs() < 0.25,
        "winding sum {turns} is not close to an integer; sampling assumptions violated"
    );
    Ok(rounded as i32)
}

/// Winding number of the field along a unit square's boundary, corners
/// traversed counterclockwise from the lower-left.
pub fn winding_number(field: &GridField, s: SquareRef) -> Result<i32> {
    loop_winding(field, &s.corners())
}

/// Weighted center of a square: edge midpoints averaged with their digraph
/// weights. With equal weights this is the geometric center; heavier edges
/// pull the estimate toward themselves, like the singularity they flank.
pub fn weighted_center(field: &GridField, s: SquareRef, dg: &GridDigraph) -> (f64, f64) {
    let spec = &field.spec;
    let edges = spec.square_edges(s);
    let mut sum_w = 0.0;
    let mut sum_x = 0.0;
    let mut sum_y = 0.0;
    for e in edges {
        let (a, b) = spec.edge_endpoints(e);
        let (ax, ay) = spec.coord(a);
        let (bx, by) = spec.coord(b);
        let w = dg.weight(e);
        sum_w += w;
        sum_x += w * 0.5 * (ax + bx);
        sum_y += w * 0.5 * (ay + by);
    }
    (sum_x / sum_w, sum_y / sum_w)
}

/// Runs the detection half of the extraction algorithm: walk the essential
/// diagram points in non-decreasing birth order, examine the squares next to
/// every edge carrying that weight, and report each square of winding number
/// +1 once, with its weighted center. Squares of winding number -1 violate
/// the no-saddle assumption and are skipped with a warning.
pub fn locate_singularities(
    field: &GridField,
    dg: &GridDigraph,
    pd: &PersistenceDiagram,
) -> Result<Vec<SingularityReport>> {
    let spec = dg.spec();
    let mut essential: Vec<(f64, EdgeSlot)> = pd
        .essential()
        .map(|p| (p.birth, p.creator))
        .collect();
    essential.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

    let mut seen: HashSet<SquareRef> = HashSet::new();
    let mut reports = Vec::new();
    for &(trigger, _) in &essential {
        for slot in spec.edge_slots() {
            if dg.weight(slot) != trigger {
                continue;
            }
            for square in spec.edge_squares(slot).into_iter().flatten() {
                if !seen.insert(square) {
                    continue;
                }
                match winding_number(field, square)? {
                    1 => {
                        let edges = spec.square_edges(square);
                        reports.push(SingularityReport {
                            square,
                            index: 1,
                            center: weighted_center(field, square, dg),
                            trigger_weight: trigger,
                            edge_weights: [
                                dg.weight(edges[0]),
                                dg.weight(edges[1]),
                                dg.weight(edges[2]),
                                dg.weight(edges[3]),
                            ],
                        });
                    }
                    -1 => {
                        log::warn!(
                            "square {square} has index -1 (saddle); skipped, assumption A2 does not hold"
                        );
                    }
                    _ => {}
                }
            }
        }
    }
    Ok(reports)
}
