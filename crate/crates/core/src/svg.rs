//! Plain SVG renderings of grid digraphs and singular polygons. Output is
//! deterministic: no timestamps or generator metadata.

use std::fmt::Write;

use crate::digraph::{EdgeSlot, GridDigraph};
use crate::polygon::SingularPolygon;

const SCALE: f64 = 40.0;
const MARGIN: f64 = 20.0;

struct Canvas {
    body: String,
    width: f64,
    height: f64,
    x0: f64,
    y1: f64,
}

impl Canvas {
    fn new(dg: &GridDigraph) -> Self {
        let spec = dg.spec();
        let (x0, y0) = spec.origin;
        let x1 = x0 + (spec.cols - 1) as f64 * spec.spacing;
        let y1 = y0 + (spec.rows - 1) as f64 * spec.spacing;
        Canvas {
            body: String::new(),
            width: (x1 - x0) / spec.spacing * SCALE + 2.0 * MARGIN,
            height: (y1 - y0) / spec.spacing * SCALE + 2.0 * MARGIN,
            x0,
            y1,
        }
    }

    /// Maps field coordinates to canvas pixels, flipping y so north is up.
    fn px(&self, spacing: f64, x: f64, y: f64) -> (f64, f64) {
        (
            MARGIN + (x - self.x0) / spacing * SCALE,
            MARGIN + (self.y1 - y) / spacing * SCALE,
        )
    }

    fn finish(self) -> String {
        format!(
            concat!(
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" ",
                "viewBox=\"0 0 {:.0} {:.0}\">\n",
                "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" ",
                "markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">",
                "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#334\"/></marker></defs>\n",
                "{}</svg>\n"
            ),
            self.width, self.height, self.width, self.height, self.body
        )
    }
}

fn draw_edges(canvas: &mut Canvas, dg: &GridDigraph, edges: &[EdgeSlot]) {
    let spec = dg.spec();
    for &slot in edges {
        let (tail, head) = dg.directed_endpoints(slot);
        let (tx, ty) = spec.coord(tail);
        let (hx, hy) = spec.coord(head);
        let (x1, y1) = canvas.px(spec.spacing, tx, ty);
        let (x2, y2) = canvas.px(spec.spacing, hx, hy);
        // Shorten toward the head so the arrowhead sits off the vertex dot.
        let (sx, sy) = (x1 + (x2 - x1) * 0.88, y1 + (y2 - y1) * 0.88);
        writeln!(
            canvas.body,
            "<line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{sx:.2}\" y2=\"{sy:.2}\" \
             stroke=\"#334\" stroke-width=\"1.5\" marker-end=\"url(#arrow)\"/>"
        )
        .unwrap();
    }
}

fn draw_points(canvas: &mut Canvas, dg: &GridDigraph) {
    let spec = dg.spec();
    for p in spec.points() {
        let (x, y) = spec.coord(p);
        let (cx, cy) = canvas.px(spec.spacing, x, y);
        writeln!(
            canvas.body,
            "<circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"2.2\" fill=\"#668\"/>"
        )
        .unwrap();
    }
}

/// Renders the full digraph with arrowheads.
pub fn digraph_svg(dg: &GridDigraph) -> String {
    let mut canvas = Canvas::new(dg);
    let edges: Vec<EdgeSlot> = dg.spec().edge_slots().collect();
    draw_edges(&mut canvas, dg, &edges);
    draw_points(&mut canvas, dg);
    canvas.finish()
}

/// Renders the reduced digraph at the polygon's birth threshold with the
/// singular polygon filled.
pub fn polygon_svg(dg: &GridDigraph, retained: &[EdgeSlot], polygon: &SingularPolygon) -> String {
    let spec = dg.spec();
    let mut canvas = Canvas::new(dg);
    let mut path = String::new();
    for (k, p) in polygon.loop_points.iter().enumerate() {
        let (x, y) = spec.coord(*p);
        let (px, py) = canvas.px(spec.spacing, x, y);
        let op = if k == 0 { 'M' } else { 'L' };
        write!(path, "{op} {px:.2} {py:.2} ").unwrap();
    }
    path.push('Z');
    writeln!(
        canvas.body,
        "<path d=\"{path}\" fill=\"#f8c8d8\" stroke=\"#d06090\" stroke-width=\"2\"/>"
    )
    .unwrap();
    draw_edges(&mut canvas, dg, retained);
    draw_points(&mut canvas, dg);
    canvas.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::build_grid_digraph;
    use crate::field::{gen_spiral, GridSpec, SpiralParams};

    #[test]
    fn svg_is_produced_and_balanced() {
        let spec = GridSpec::new((0.0, 0.0), 0.5, 4, 4).unwrap();
        let field = gen_spiral(
            &SpiralParams {
                a: 1.0,
                alpha: 1.2,
                rho: 1.0,
                center: (0.8, 0.7),
            },
            &spec,
        )
        .unwrap();
        let dg = build_grid_digraph(&field).unwrap();
        let svg = digraph_svg(&dg);
        assert!(svg.starts_with("<?xml"));
        assert!(svg.ends_with("</svg>\n"));
        assert_eq!(svg.matches("<line").count(), spec.num_edges());
        assert_eq!(svg.matches("<circle").count(), spec.num_points());
    }
}
