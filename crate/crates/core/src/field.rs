//! Discrete planar vector fields sampled on uniform grids.
//!
//! A [`GridField`] stores one vector per grid point in row-major order
//! (index `j * cols + i` for column `i`, row `j`). Fields can be loaded and
//! stored as CSV or JSON, generated from a logarithmic-spiral model, and
//! checked against the sampling assumptions the digraph construction relies
//! on.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angular tolerance below which two adjacent vectors are treated as
/// parallel or anti-parallel (assumption A1 violation).
pub const TAU_PAR: f64 = 1e-9;

/// A grid point addressed by column `i` and row `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    pub i: usize,
    pub j: usize,
}

impl GridPoint {
    pub fn new(i: usize, j: usize) -> Self {
        GridPoint { i, j }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.i, self.j)
    }
}

/// A planar vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product; positive when `other` lies
    /// counterclockwise of `self`.
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_zero(self) -> bool {
        self.x == 0.0 && self.y == 0.0
    }
}

/// Geometry of a uniform sampling grid: origin, spacing and extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    /// Coordinate of grid point (0, 0).
    pub origin: (f64, f64),
    /// Spacing between adjacent points, identical horizontally and
    /// vertically.
    pub spacing: f64,
    /// Number of columns (points per row), at least 2.
    pub cols: usize,
    /// Number of rows, at least 2.
    pub rows: usize,
}

impl GridSpec {
    pub fn new(origin: (f64, f64), spacing: f64, cols: usize, rows: usize) -> Result<Self> {
        let spec = GridSpec {
            origin,
            spacing,
            cols,
            rows,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::Grid(format!(
                "spacing must be positive and finite, got {}",
                self.spacing
            )));
        }
        if self.cols < 2 || self.rows < 2 {
            return Err(Error::Grid(format!(
                "grid must be at least 2x2, got {}x{}",
                self.cols, self.rows
            )));
        }
        if !self.origin.0.is_finite() || !self.origin.1.is_finite() {
            return Err(Error::Grid("grid origin must be finite".into()));
        }
        Ok(())
    }

    pub fn num_points(&self) -> usize {
        self.cols * self.rows
    }

    /// Row-major storage index of a point.
    pub fn index(&self, p: GridPoint) -> usize {
        debug_assert!(p.i < self.cols && p.j < self.rows);
        p.j * self.cols + p.i
    }

    /// Planar coordinate of a grid point.
    pub fn coord(&self, p: GridPoint) -> (f64, f64) {
        (
            self.origin.0 + p.i as f64 * self.spacing,
            self.origin.1 + p.j as f64 * self.spacing,
        )
    }

    /// All grid points in row-major order.
    pub fn points(&self) -> impl Iterator<Item = GridPoint> + '_ {
        let cols = self.cols;
        (0..self.rows).flat_map(move |j| (0..cols).map(move |i| GridPoint { i, j }))
    }
}

/// A discrete planar vector field on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub spec: GridSpec,
    /// One vector per grid point, row-major.
    pub vectors: Vec<Vec2>,
}

impl GridField {
    pub fn new(spec: GridSpec, vectors: Vec<Vec2>) -> Result<Self> {
        spec.validate()?;
        if vectors.len() != spec.num_points() {
            return Err(Error::Grid(format!(
                "expected {} vectors for a {}x{} grid, got {}",
                spec.num_points(),
                spec.cols,
                spec.rows,
                vectors.len()
            )));
        }
        Ok(GridField { spec, vectors })
    }

    pub fn vector(&self, p: GridPoint) -> Vec2 {
        self.vectors[self.spec.index(p)]
    }
}

/// Parameters of the logarithmic-spiral field model.
///
/// The generated field at displacement `(dx, dy)` from `center` is
/// `a * (dx*cot(alpha) - rho*dy, dy*cot(alpha) + dx/rho)`. Positive `a`
/// yields counterclockwise circulation, negative `a` clockwise; either way
/// the singularity at `center` has index +1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpiralParams {
    /// Chirality and magnitude scale; must be nonzero.
    pub a: f64,
    /// Pitch angle between the radial line and the spiral tangent, in
    /// (0, pi). `pi/2` produces a pure rotation (center pattern).
    pub alpha: f64,
    /// Width-to-height ratio, positive.
    pub rho: f64,
    /// Location of the singularity.
    pub center: (f64, f64),
}

impl SpiralParams {
    pub fn validate(&self) -> Result<()> {
        if self.a == 0.0 || !self.a.is_finite() {
            return Err(Error::Grid("spiral parameter a must be nonzero".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < std::f64::consts::PI) {
            return Err(Error::Grid(format!(
                "spiral pitch alpha must lie in (0, pi), got {}",
                self.alpha
            )));
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return Err(Error::Grid(format!(
                "spiral ratio rho must be positive, got {}",
                self.rho
            )));
        }
        if !self.center.0.is_finite() || !self.center.1.is_finite() {
            return Err(Error::Grid("spiral center must be finite".into()));
        }
        Ok(())
    }

    fn cot_alpha(&self) -> f64 {
        // Exactly zero at alpha = pi/2 so the pure-rotation field is exact.
        if self.alpha == std::f64::consts::FRAC_PI_2 {
            0.0
        } else {
            1.0 / self.alpha.tan()
        }
    }
}

/// Evaluates the spiral model at every grid point.
///
/// Fails with [`Error::CenterOnGridPoint`] if a grid point coincides exactly
/// with the spiral center, which would store a zero vector.
pub fn gen_spiral(params: &SpiralParams, spec: &GridSpec) -> Result<GridField> {
    params.validate()?;
    spec.validate()?;
    let cot = params.cot_alpha();
    let mut vectors = Vec::with_capacity(spec.num_points());
    for p in spec.points() {
        let (x, y) = spec.coord(p);
        let dx = x - params.center.0;
        let dy = y - params.center.1;
        if dx == 0.0 && dy == 0.0 {
            return Err(Error::CenterOnGridPoint(p));
        }
        vectors.push(Vec2::new(
            params.a * (dx * cot - params.rho * dy),
            params.a * (dy * cot + dx / params.rho),
        ));
    }
    GridField::new(*spec, vectors)
}

/// A single sampling-assumption violation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    /// A1: vectors at two adjacent points are parallel or anti-parallel
    /// within [`TAU_PAR`].
    ParallelAdjacent { a: GridPoint, b: GridPoint },
    /// A3: a sampled vector is exactly zero.
    ZeroVector { at: GridPoint },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ParallelAdjacent { a, b } => {
                write!(f, "A1: vectors at {a} and {b} are (anti-)parallel")
            }
            Violation::ZeroVector { at } => write!(f, "A3: zero vector at {at}"),
        }
    }
}

/// Outcome of [`validate_assumptions`]. A4 (grid density relative to the
/// singular patterns) cannot be checked from the samples alone and is always
/// reported as unverifiable.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    /// Status of assumption A4, which is not intrinsically checkable.
    pub fn a4_status() -> &'static str {
        "unverifiable"
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        write!(
            f,
            "A4 (grid density): {} ({} violation(s) found)",
            Self::a4_status(),
            self.violations.len()
        )
    }
}

/// Checks assumptions A1 (no adjacent parallel vectors) and A3 (no zero
/// vectors) and reports every violation with its grid indices.
pub fn validate_assumptions(field: &GridField) -> ValidationReport {
    let mut report = ValidationReport::default();
    let spec = &field.spec;
    for p in spec.points() {
        if field.vector(p).is_zero() {
            report.violations.push(Violation::ZeroVector { at: p });
        }
    }
    let check_pair = |a: GridPoint, b: GridPoint, report: &mut ValidationReport| {
        let va = field.vector(a);
        let vb = field.vector(b);
        if va.is_zero() || vb.is_zero() {
            return; // already reported as A3
        }
        let angle = va.cross(vb).atan2(va.dot(vb));
        if angle.abs() < TAU_PAR || std::f64::consts::PI - angle.abs() < TAU_PAR {
            report.violations.push(Violation::ParallelAdjacent { a, b });
        }
    };
    for j in 0..spec.rows {
        for i in 0..spec.cols - 1 {
            check_pair(GridPoint::new(i, j), GridPoint::new(i + 1, j), &mut report);
        }
    }
    for j in 0..spec.rows - 1 {
        for i in 0..spec.cols {
            check_pair(GridPoint::new(i, j), GridPoint::new(i, j + 1), &mut report);
        }
    }
    report
}

/// On-disk encodings understood by [`load_field`] and [`store_field`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Format(other.to_string())),
        }
    }
}

/// Formats a float with 17 significant digits, enough for a bit-exact
/// decimal round trip.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Serialize, Deserialize)]
pub(crate) struct SpecJson {
    m: usize,
    n: usize,
    eps: f64,
    x0: f64,
    y0: f64,
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    spec: SpecJson,
    vectors: Vec<[f64; 2]>,
}

impl From<&GridSpec> for SpecJson {
    fn from(s: &GridSpec) -> Self {
        SpecJson {
            m: s.cols,
            n: s.rows,
            eps: s.spacing,
            x0: s.origin.0,
            y0: s.origin.1,
        }
    }
}

impl TryFrom<SpecJson> for GridSpec {
    type Error = Error;

    fn try_from(s: SpecJson) -> Result<Self> {
        GridSpec::new((s.x0, s.y0), s.eps, s.m, s.n)
    }
}

impl GridField {
    /// Serializes to the CSV field format: a `m=..,n=..,eps=..,x0=..,y0=..`
    /// header followed by one `i,j,u,v` line per point in row-major order.
    pub fn to_csv(&self) -> Result<String> {
        self.spec.validate()?;
        if self.vectors.len() != self.spec.num_points() {
            return Err(Error::Grid("vector count does not match grid".into()));
        }
        let s = &self.spec;
        let mut out = format!(
            "m={},n={},eps={},x0={},y0={}\n",
            s.cols,
            s.rows,
            fmt_f64(s.spacing),
            fmt_f64(s.origin.0),
            fmt_f64(s.origin.1)
        );
        for p in s.points() {
            let v = self.vector(p);
            out.push_str(&format!("{},{},{},{}\n", p.i, p.j, fmt_f64(v.x), fmt_f64(v.y)));
        }
        Ok(out)
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            msg: "empty file".into(),
        })?;
        let mut m = None;
        let mut n = None;
        let mut eps = None;
        let mut x0 = None;
        let mut y0 = None;
        for item in header.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(|| Error::Parse {
                line: 1,
                msg: format!("header item `{item}` is not key=value"),
            })?;
            let bad = || Error::Parse {
                line: 1,
                msg: format!("invalid value for `{}`: `{}`", key.trim(), value),
            };
            match key.trim() {
                "m" => m = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                "n" => n = Some(value.trim().parse::<usize>().map_err(|_| bad())?),
                "eps" => eps = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                "x0" => x0 = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                "y0" => y0 = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        msg: format!("unknown header key `{other}`"),
                    })
                }
            }
        }
        let missing = |what: &str| Error::Parse {
            line: 1,
            msg: format!("missing `{what}` in header"),
        };
        let spec = GridSpec::new(
            (x0.ok_or_else(|| missing("x0"))?, y0.ok_or_else(|| missing("y0"))?),
            eps.ok_or_else(|| missing("eps"))?,
            m.ok_or_else(|| missing("m"))?,
            n.ok_or_else(|| missing("n"))?,
        )?;

        let mut vectors = Vec::with_capacity(spec.num_points());
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line: lineno,
                    msg: format!("expected 4 fields `i,j,u,v`, got {}", fields.len()),
                });
            }
            let bad = |what: &str| Error::Parse {
                line: lineno,
                msg: format!("invalid {what}"),
            };
            let i: usize = fields[0].trim().parse().map_err(|_| bad("index i"))?;
            let j: usize = fields[1].trim().parse().map_err(|_| bad("index j"))?;
            let u: f64 = fields[2].trim().parse().map_err(|_| bad("component u"))?;
            let v: f64 = fields[3].trim().parse().map_err(|_| bad("component v"))?;
            let expected = vectors.len();
            if i >= spec.cols || j >= spec.rows || spec.index(GridPoint::new(i, j)) != expected {
                return Err(Error::Grid(format!(
                    "irregular grid: line {lineno} carries point ({i}, {j}), expected row-major point #{expected}"
                )));
            }
            vectors.push(Vec2::new(u, v));
        }
        if vectors.len() != spec.num_points() {
            return Err(Error::Grid(format!(
                "expected {} vector rows, got {}",
                spec.num_points(),
                vectors.len()
            )));
        }
        GridField::new(spec, vectors)
    }

    pub fn to_json(&self) -> Result<String> {
        self.spec.validate()?;
        if self.vectors.len() != self.spec.num_points() {
            return Err(Error::Grid("vector count does not match grid".into()));
        }
        let proxy = FieldJson {
            spec: SpecJson::from(&self.spec),
            vectors: self.vectors.iter().map(|v| [v.x, v.y]).collect(),
        };
        serde_json::to_string_pretty(&proxy).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let proxy: FieldJson = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        let spec = GridSpec::try_from(proxy.spec)?;
        let vectors = proxy.vectors.iter().map(|&[x, y]| Vec2::new(x, y)).collect();
        GridField::new(spec, vectors)
    }
}

/// Reads a field from disk in the given format.
pub fn load_field<P: AsRef<Path>>(path: P, format: Format) -> Result<GridField> {
    let text = fs::read_to_string(path)?;
    match format {
        Format::Csv => GridField::from_csv(&text),
        Format::Json => GridField::from_json(&text),
    }
}

/// Writes a field to disk; the decimal encoding round-trips bit-exactly.
pub fn store_field<P: AsRef<Path>>(field: &GridField, path: P, format: Format) -> Result<()> {
    let text = match format {
        Format::Csv => field.to_csv()?,
        Format::Json => field.to_json()?,
    };
    fs::write(path, text)?;
    Ok(())
}

/// Guesses the format from a file extension, defaulting to CSV.
pub fn format_for_path<P: AsRef<Path>>(path: P) -> Format {
    match path.as_ref().extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    }
}
