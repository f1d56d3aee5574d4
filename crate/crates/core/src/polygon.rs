//! Singular polygons from the reduced digraph filtration.
//!
//! The reduced digraph of an edge subset is its 2-core: pendant edges are
//! peeled until every remaining edge has both endpoints of degree at least
//! two, which preserves path homology. Faces of the resulting planar
//! subgraph are computed as cell regions (unit squares glued across missing
//! edges); the singular polygon is the boundary of the face containing the
//! singular square at the earliest filtration threshold where that boundary
//! is a simple cycle of index +1.

use crate::digraph::{Axis, EdgeSlot, GridDigraph, SquareRef};
use crate::error::{Error, Result};
use crate::field::{GridField, GridPoint, GridSpec};
use crate::pph::PersistenceDiagram;
use crate::singular::{loop_winding, SingularityReport};

/// The maximal subgraph of an edge subset without isolated (pendant) edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedDigraph {
    /// Retained edge slots, ascending.
    pub edges: Vec<EdgeSlot>,
}

/// A closed grid cycle of index +1 around a singular square, together with
/// the filtration threshold at which it first forms.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularPolygon {
    /// Simple closed vertex loop, counterclockwise; the first vertex is not
    /// repeated at the end.
    pub loop_points: Vec<GridPoint>,
    /// Smallest essential threshold at which the loop exists in the reduced
    /// digraph.
    pub birth_weight: f64,
    pub enclosed_square: SquareRef,
    /// Winding number of the loop, always +1.
    pub index: i32,
}

fn point_of_index(spec: &GridSpec, idx: usize) -> GridPoint {
    GridPoint::new(idx % spec.cols, idx / spec.cols)
}

/// Peels pendant edges in place until no vertex of degree one remains.
fn two_core(spec: &GridSpec, present: &mut [bool]) {
    let mut degree = vec![0u8; spec.num_points()];
    for slot in spec.edge_slots() {
        if present[slot.0] {
            let (a, b) = spec.edge_endpoints(slot);
            degree[spec.index(a)] += 1;
            degree[spec.index(b)] += 1;
        }
    }
    let mut stack: Vec<usize> = (0..spec.num_points()).filter(|&v| degree[v] == 1).collect();
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let p = point_of_index(spec, v);
        for slot in spec.point_edges(p) {
            if present[slot.0] {
                present[slot.0] = false;
                let (a, b) = spec.edge_endpoints(slot);
                for q in [a, b] {
                    let qi = spec.index(q);
                    degree[qi] -= 1;
                    if degree[qi] == 1 {
                        stack.push(qi);
                    }
                }
                break;
            }
        }
    }
}

fn present_mask(spec: &GridSpec, edges: &[EdgeSlot]) -> Vec<bool> {
    let mut present = vec![false; spec.num_edges()];
    for &e in edges {
        present[e.0] = true;
    }
    present
}

fn collect_present(present: &[bool]) -> Vec<EdgeSlot> {
    present
        .iter()
        .enumerate()
        .filter_map(|(k, &p)| p.then_some(EdgeSlot(k)))
        .collect()
}

/// Iteratively removes edges incident to degree-1 vertices until fixpoint.
/// The result is the 2-core of the subset and is independent of removal
/// order.
pub fn reduce_digraph(spec: &GridSpec, edges: &[EdgeSlot]) -> ReducedDigraph {
    let mut present = present_mask(spec, edges);
    two_core(spec, &mut present);
    ReducedDigraph {
        edges: collect_present(&present),
    }
}

/// Cells of the two sides of an edge; `None` is the unbounded outside.
fn edge_sides(spec: &GridSpec, e: EdgeSlot) -> [Option<SquareRef>; 2] {
    spec.edge_squares(e)
}

/// Labels every unit cell with its face: 0 for the unbounded face, then
/// 1, 2, ... for bounded faces in discovery order. Two side-adjacent cells
/// share a face exactly when the edge between them is absent, and a rim
/// cell joins the unbounded face when its domain-side edge is absent.
fn cell_regions(spec: &GridSpec, present: &[bool]) -> Vec<i32> {
    let cw = spec.cols - 1;
    let ch = spec.rows - 1;
    let cell_id = |s: SquareRef| s.j * cw + s.i;
    let mut label = vec![-1i32; cw * ch];
    let mut queue: Vec<SquareRef> = Vec::new();

    // Seed the unbounded face from every rim cell with a missing rim edge.
    for j in 0..ch {
        for i in 0..cw {
            let s = SquareRef::new(i, j);
            let rim_open = (j == 0 && !present[spec.horiz_slot(i, 0).0])
                || (j == ch - 1 && !present[spec.horiz_slot(i, spec.rows - 1).0])
                || (i == 0 && !present[spec.vert_slot(0, j).0])
                || (i == cw - 1 && !present[spec.vert_slot(spec.cols - 1, j).0]);
            if rim_open && label[cell_id(s)] == -1 {
                label[cell_id(s)] = 0;
                queue.push(s);
            }
        }
    }
    let flood = |label: &mut Vec<i32>, queue: &mut Vec<SquareRef>, lab: i32| {
        while let Some(s) = queue.pop() {
            let mut neighbors: Vec<(SquareRef, EdgeSlot)> = Vec::with_capacity(4);
            if s.i > 0 {
                neighbors.push((SquareRef::new(s.i - 1, s.j), spec.vert_slot(s.i, s.j)));
            }
            if s.i < cw - 1 {
                neighbors.push((SquareRef::new(s.i + 1, s.j), spec.vert_slot(s.i + 1, s.j)));
            }
            if s.j > 0 {
                neighbors.push((SquareRef::new(s.i, s.j - 1), spec.horiz_slot(s.i, s.j)));
            }
            if s.j < ch - 1 {
                neighbors.push((SquareRef::new(s.i, s.j + 1), spec.horiz_slot(s.i, s.j + 1)));
            }
            for (t, shared) in neighbors {
                if !present[shared.0] && label[cell_id(t)] == -1 {
                    label[cell_id(t)] = lab;
                    queue.push(t);
                }
            }
        }
    };
    flood(&mut label, &mut queue, 0);

    let mut next = 1;
    for j in 0..ch {
        for i in 0..cw {
            let s = SquareRef::new(i, j);
            if label[cell_id(s)] == -1 {
                label[cell_id(s)] = next;
                queue.push(s);
                flood(&mut label, &mut queue, next);
                next += 1;
            }
        }
    }
    label
}

/// Present edges with exactly one side in region `r`.
fn region_boundary(spec: &GridSpec, present: &[bool], label: &[i32], r: i32) -> Vec<EdgeSlot> {
    let cw = spec.cols - 1;
    let in_region = |side: Option<SquareRef>| match side {
        Some(s) => label[s.j * cw + s.i] == r,
        None => false, // outside counts as the unbounded face
    };
    spec.edge_slots()
        .filter(|&e| {
            if !present[e.0] {
                return false;
            }
            let [a, b] = edge_sides(spec, e);
            in_region(a) != in_region(b)
        })
        .collect()
}

const HEADINGS: [(isize, isize); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)]; // E N W S

/// Region-on-the-left orientation of a boundary edge: tail point and
/// heading index.
fn oriented(spec: &GridSpec, label: &[i32], r: i32, e: EdgeSlot) -> (GridPoint, usize) {
    let cw = spec.cols - 1;
    let info = spec.edge_info(e);
    let in_region = |s: Option<SquareRef>| s.is_some_and(|s| label[s.j * cw + s.i] == r);
    let [first, second] = edge_sides(spec, e);
    match info.axis {
        // Horizontal edge: sides are [below, above].
        Axis::Horizontal => {
            if in_region(second) {
                (GridPoint::new(info.i, info.j), 0) // region above: east
            } else {
                debug_assert!(in_region(first));
                (GridPoint::new(info.i + 1, info.j), 2) // region below: west
            }
        }
        // Vertical edge: sides are [left, right].
        Axis::Vertical => {
            if in_region(first) {
                (GridPoint::new(info.i, info.j), 1) // region left: north
            } else {
                debug_assert!(in_region(second));
                (GridPoint::new(info.i, info.j + 1), 3) // region right: south
            }
        }
    }
}

fn step(p: GridPoint, heading: usize) -> GridPoint {
    let (dx, dy) = HEADINGS[heading];
    GridPoint::new(
        (p.i as isize + dx) as usize,
        (p.j as isize + dy) as usize,
    )
}

/// Walks the boundary of a region with the region kept on the left,
/// starting from `start`. At a pinch vertex the sharpest available left
/// turn continues along the same face. Returns the closed walk as a vertex
/// list plus the number of edges consumed.
fn trace_walk(
    spec: &GridSpec,
    outgoing: &[[Option<EdgeSlot>; 4]],
    start_tail: GridPoint,
    start_heading: usize,
) -> (Vec<GridPoint>, usize) {
    let mut walk = Vec::new();
    let mut used = 0usize;
    let mut tail = start_tail;
    let mut heading = start_heading;
    loop {
        walk.push(tail);
        used += 1;
        let head = step(tail, heading);
        if head == start_tail {
            // About to re-enter the start; close only if the start edge is
            // the unique continuation there.
            let next = continuation(spec, outgoing, head, heading);
            if next == Some(start_heading) {
                break;
            }
        }
        match continuation(spec, outgoing, head, heading) {
            Some(h) => {
                tail = head;
                heading = h;
            }
            None => break, // dead end: not a closed boundary
        }
    }
    (walk, used)
}

/// Left, straight, right turn priority keeps the region on the left.
fn continuation(
    spec: &GridSpec,
    outgoing: &[[Option<EdgeSlot>; 4]],
    at: GridPoint,
    heading: usize,
) -> Option<usize> {
    let slots = &outgoing[spec.index(at)];
    for turn in [1usize, 0, 3] {
        let h = (heading + turn) % 4;
        if slots[h].is_some() {
            return Some(h);
        }
    }
    None
}

/// Boundary cycle of the region, provided it is a single simple cycle:
/// every boundary vertex has exactly two incident boundary edges and one
/// walk covers the whole boundary. Returns the loop counterclockwise with
/// the smallest vertex first.
fn region_cycle(
    spec: &GridSpec,
    present: &[bool],
    label: &[i32],
    r: i32,
) -> Option<Vec<GridPoint>> {
    let boundary = region_boundary(spec, present, label, r);
    if boundary.len() < 4 {
        return None;
    }
    let mut incident = vec![0u8; spec.num_points()];
    let mut outgoing: Vec<[Option<EdgeSlot>; 4]> = vec![[None; 4]; spec.num_points()];
    let mut start: Option<(GridPoint, usize)> = None;
    for &e in &boundary {
        let (a, b) = spec.edge_endpoints(e);
        incident[spec.index(a)] += 1;
        incident[spec.index(b)] += 1;
        let (tail, heading) = oriented(spec, label, r, e);
        outgoing[spec.index(tail)][heading] = Some(e);
        // Canonical start: eastward edge with minimal (j, i) tail; such an
        // edge exists on the outer boundary (bottom of the lowest cells).
        if heading == 0 {
            let better = match start {
                None => true,
                Some((t, _)) => (tail.j, tail.i) < (t.j, t.i),
            };
            if better {
                start = Some((tail, heading));
            }
        }
    }
    if incident.iter().any(|&d| d != 0 && d != 2) {
        return None; // pinched boundary
    }
    let (start_tail, start_heading) = start?;
    let (walk, used) = trace_walk(spec, &outgoing, start_tail, start_heading);
    if used != boundary.len() || walk.len() != used {
        return None; // boundary has several components (holes) or a stall
    }
    Some(canonical_rotation(walk))
}

fn canonical_rotation(mut walk: Vec<GridPoint>) -> Vec<GridPoint> {
    if let Some(min_at) = walk
        .iter()
        .enumerate()
        .min_by_key(|&(_, p)| (p.i, p.j))
        .map(|(k, _)| k)
    {
        walk.rotate_left(min_at);
    }
    walk
}

/// All bounded faces of a planar grid subgraph, each as its outer boundary
/// walk traversed counterclockwise (smallest vertex first). For subgraphs
/// without pinch vertices these walks are simple cycles.
pub fn faces_of_subgraph(spec: &GridSpec, edges: &[EdgeSlot]) -> Vec<Vec<GridPoint>> {
    let present = present_mask(spec, edges);
    let label = cell_regions(spec, &present);
    let n_regions = label.iter().copied().max().unwrap_or(0);
    let mut faces = Vec::new();
    for r in 1..=n_regions {
        let boundary = region_boundary(spec, &present, &label, r);
        if boundary.is_empty() {
            continue;
        }
        let mut outgoing: Vec<[Option<EdgeSlot>; 4]> = vec![[None; 4]; spec.num_points()];
        let mut start: Option<(GridPoint, usize)> = None;
        for &e in &boundary {
            let (tail, heading) = oriented(spec, &label, r, e);
            outgoing[spec.index(tail)][heading] = Some(e);
            if heading == 0 {
                let better = match start {
                    None => true,
                    Some((t, _)) => (tail.j, tail.i) < (t.j, t.i),
                };
                if better {
                    start = Some((tail, heading));
                }
            }
        }
        if let Some((tail, heading)) = start {
            let (walk, _) = trace_walk(spec, &outgoing, tail, heading);
            faces.push(canonical_rotation(walk));
        }
    }
    faces.sort_by_key(|f| f.first().map(|p| (p.j, p.i)));
    faces
}

/// Unit squares strictly inside a simple closed grid loop, by crossing
/// parity of a downward ray against the loop's horizontal edges.
pub fn cells_inside_loop(spec: &GridSpec, loop_points: &[GridPoint]) -> Vec<SquareRef> {
    let n = loop_points.len();
    let mut horiz = vec![false; spec.num_horiz_edges()];
    for k in 0..n {
        let a = loop_points[k];
        let b = loop_points[(k + 1) % n];
        if a.j == b.j {
            let i = a.i.min(b.i);
            horiz[spec.horiz_slot(i, a.j).0] = true;
        }
    }
    spec.square_refs()
        .filter(|s| {
            let crossings = (0..=s.j)
                .filter(|&j| horiz[spec.horiz_slot(s.i, j).0])
                .count();
            crossings % 2 == 1
        })
        .collect()
}

/// Edges of the digraph with weight at most `w`, ascending by slot.
pub fn edges_at_most(dg: &GridDigraph, w: f64) -> Vec<EdgeSlot> {
    dg.spec()
        .edge_slots()
        .filter(|&e| dg.weight(e) <= w)
        .collect()
}

/// Runs the segmentation half of the extraction algorithm: walk the
/// essential thresholds in non-decreasing order; at each, reduce the
/// threshold sub-digraph and check whether the face containing the singular
/// square is bounded by a simple cycle of index +1. The first hit is the
/// singular polygon.
pub fn extract_singular_polygon(
    field: &GridField,
    dg: &GridDigraph,
    pd: &PersistenceDiagram,
    report: &SingularityReport,
) -> Result<SingularPolygon> {
    let mut thresholds: Vec<f64> = pd.essential().map(|p| p.birth).collect();
    thresholds.sort_by(f64::total_cmp);
    thresholds.dedup();
    for w in thresholds {
        if let Some(polygon) = polygon_at_threshold(field, dg, w, report.square)? {
            return Ok(polygon);
        }
    }
    Err(Error::PolygonNotFound)
}

/// The qualifying polygon around `target` in the reduced sub-digraph at
/// threshold `w`, if one exists there.
pub fn polygon_at_threshold(
    field: &GridField,
    dg: &GridDigraph,
    w: f64,
    target: SquareRef,
) -> Result<Option<SingularPolygon>> {
    let spec = dg.spec();
    let mut present: Vec<bool> = spec
        .edge_slots()
        .map(|e| dg.weight(e) <= w)
        .collect();
    two_core(spec, &mut present);
    let label = cell_regions(spec, &present);
    let r = label[target.j * (spec.cols - 1) + target.i];
    if r == 0 {
        return Ok(None); // region leaks to the unbounded face
    }
    let Some(loop_points) = region_cycle(spec, &present, &label, r) else {
        return Ok(None);
    };
    if loop_winding(field, &loop_points)? != 1 {
        return Ok(None);
    }
    Ok(Some(SingularPolygon {
        loop_points,
        birth_weight: w,
        enclosed_square: target,
        index: 1,
    }))
}
