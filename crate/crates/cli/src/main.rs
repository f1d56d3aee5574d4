use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use vfpph::digraph::{build_grid_digraph, GridDigraph};
use vfpph::distance::{bottleneck_distance, distance_series, wasserstein_distance};
use vfpph::error::Error;
use vfpph::field::{
    format_for_path, gen_spiral, load_field, store_field, validate_assumptions, Format, GridField,
    GridSpec, SpiralParams,
};
use vfpph::polygon::{edges_at_most, extract_singular_polygon, reduce_digraph};
use vfpph::pph::{compute_pd1, PersistenceDiagram};
use vfpph::singular::locate_singularities;
use vfpph::svg::{digraph_svg, polygon_svg};

/// Singular-pattern extraction from planar vector fields: angle-based grid
/// digraphs, persistent path homology, singularity location, singular
/// polygons and diagram distances.
#[derive(Parser)]
#[command(name = "vfpph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Field file (CSV or JSON; format inferred from the extension unless
    /// --format is given).
    input: PathBuf,
    /// Force input format: csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl InputArgs {
    fn load(&self) -> Result<GridField, Error> {
        let format = match &self.format {
            Some(tag) => Format::from_str(tag)?,
            None => format_for_path(&self.input),
        };
        load_field(&self.input, format)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a logarithmic-spiral field and store it.
    Gen {
        /// Spiral pitch angle in radians, inside (0, pi); pi/2 is a pure
        /// rotation.
        #[arg(long)]
        alpha: f64,
        /// Width-to-height ratio.
        #[arg(long, default_value_t = 1.0)]
        rho: f64,
        /// Chirality and scale; positive turns counterclockwise.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        /// Grid size as MxN (columns x rows).
        #[arg(long)]
        grid: String,
        /// Grid spacing.
        #[arg(long)]
        eps: f64,
        /// Grid origin x.
        #[arg(long, default_value_t = 0.0)]
        x0: f64,
        /// Grid origin y.
        #[arg(long, default_value_t = 0.0)]
        y0: f64,
        /// Singularity position as `cx,cy`; defaults to the domain midpoint.
        #[arg(long)]
        center: Option<String>,
        /// Output field file.
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Check sampling assumptions and report violations.
    Validate(InputArgs),
    /// Export the angle-based grid digraph as JSON.
    DumpDigraph {
        #[command(flatten)]
        input: InputArgs,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Also render the digraph as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Compute the 1-dimensional persistence diagram.
    Persistence {
        /// Field file, or a digraph JSON dump when --digraph is set.
        input: PathBuf,
        /// Force input field format: csv or json.
        #[arg(long)]
        format: Option<String>,
        /// Treat the input as a digraph dump produced by dump-digraph.
        #[arg(long)]
        digraph: bool,
        /// Output encoding: csv (default) or json with creator metadata.
        #[arg(long, default_value = "csv")]
        emit: String,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Locate singular squares and their weighted centers.
    Locate {
        #[command(flatten)]
        input: InputArgs,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Extract the singular polygon around each located singularity.
    Polygon {
        #[command(flatten)]
        input: InputArgs,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Render the reduced digraph with the polygon filled (first
        /// polygon only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Bottleneck (default) or Wasserstein distance between two fields.
    Compare {
        field_a: PathBuf,
        field_b: PathBuf,
        /// Use the q-Wasserstein distance of this order instead.
        #[arg(long)]
        wasserstein: Option<f64>,
    },
    /// Bottleneck distances between consecutive fields of a manifest
    /// (newline-delimited field paths).
    Series {
        manifest: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

/// Significant digits for printed numbers; 17 round-trips f64 exactly.
fn precision() -> usize {
    std::env::var("VFPPH_PRECISION")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&p| (1..=17).contains(&p))
        .unwrap_or(17)
}

fn fmt(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.*e}", precision() - 1)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_pair(text: &str, what: &str) -> Result<(f64, f64), Error> {
    let (a, b) = text
        .split_once(',')
        .ok_or_else(|| Error::Format(format!("{what} must be `a,b`, got `{text}`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Error::Format(format!("invalid number `{s}` in {what}")))
    };
    Ok((parse(a)?, parse(b)?))
}

fn parse_grid(text: &str) -> Result<(usize, usize), Error> {
    let (m, n) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| Error::Format(format!("grid must be MxN, got `{text}`")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| Error::Format(format!("invalid grid dimension `{s}`")))
    };
    Ok((parse(m)?, parse(n)?))
}

fn diagram_csv(pd: &PersistenceDiagram) -> String {
    let mut out = String::from("birth,death\n");
    for p in &pd.pairs {
        out.push_str(&format!("{},{}\n", fmt(p.birth), fmt(p.death)));
    }
    out
}

fn diagram_json(pd: &PersistenceDiagram) -> String {
    let pairs: Vec<serde_json::Value> = pd
        .pairs
        .iter()
        .map(|p| {
            serde_json::json!({
                "birth": p.birth,
                "death": if p.death.is_infinite() {
                    serde_json::Value::Null
                } else {
                    serde_json::json!(p.death)
                },
                "creator_slot": p.creator.0,
            })
        })
        .collect();
    let mut text =
        serde_json::to_string_pretty(&serde_json::json!({ "pairs": pairs })).expect("serializable");
    text.push('\n');
    text
}

fn load_field_auto(path: &Path, format: &Option<String>) -> Result<GridField, Error> {
    let format = match format {
        Some(tag) => Format::from_str(tag)?,
        None => format_for_path(path),
    };
    load_field(path, format)
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Gen {
            alpha,
            rho,
            a,
            grid,
            eps,
            x0,
            y0,
            center,
            out,
        } => {
            let (cols, rows) = parse_grid(&grid)?;
            let spec = GridSpec::new((x0, y0), eps, cols, rows)?;
            let center = match center {
                Some(text) => parse_pair(&text, "--center")?,
                None => (
                    x0 + (cols - 1) as f64 * eps / 2.0,
                    y0 + (rows - 1) as f64 * eps / 2.0,
                ),
            };
            let field = gen_spiral(
                &SpiralParams {
                    a,
                    alpha,
                    rho,
                    center,
                },
                &spec,
            )?;
            store_field(&field, &out, format_for_path(&out))
        }
        Command::Validate(input) => {
            let field = input.load()?;
            let report = validate_assumptions(&field);
            println!("{report}");
            Ok(())
        }
        Command::DumpDigraph { input, out, svg } => {
            let field = input.load()?;
            let dg = build_grid_digraph(&field)?;
            let mut text = dg.to_json();
            text.push('\n');
            emit(&out, &text)?;
            if let Some(path) = svg {
                fs::write(path, digraph_svg(&dg))?;
            }
            Ok(())
        }
        Command::Persistence {
            input,
            format,
            digraph,
            emit: encoding,
            out,
        } => {
            let dg = if digraph {
                GridDigraph::from_json(&fs::read_to_string(&input)?)?
            } else {
                build_grid_digraph(&load_field_auto(&input, &format)?)?
            };
            let pd = compute_pd1(&dg);
            let text = match encoding.as_str() {
                "csv" => diagram_csv(&pd),
                "json" => diagram_json(&pd),
                other => return Err(Error::Format(other.to_string())),
            };
            emit(&out, &text)
        }
        Command::Locate { input, out } => {
            let field = input.load()?;
            let dg = build_grid_digraph(&field)?;
            let pd = compute_pd1(&dg);
            let reports = locate_singularities(&field, &dg, &pd)?;
            let mut text =
                String::from("square_i,square_j,index,center_x,center_y,trigger_weight\n");
            for r in &reports {
                text.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    r.square.i,
                    r.square.j,
                    r.index,
                    fmt(r.center.0),
                    fmt(r.center.1),
                    fmt(r.trigger_weight)
                ));
            }
            emit(&out, &text)
        }
        Command::Polygon { input, out, svg } => {
            let field = input.load()?;
            let dg = build_grid_digraph(&field)?;
            let pd = compute_pd1(&dg);
            let reports = locate_singularities(&field, &dg, &pd)?;
            if reports.is_empty() {
                return Err(Error::PolygonNotFound);
            }
            let mut text = String::new();
            let mut first_polygon = None;
            for report in &reports {
                let polygon = extract_singular_polygon(&field, &dg, &pd, report)?;
                let value = serde_json::json!({
                    "loop": polygon
                        .loop_points
                        .iter()
                        .map(|p| serde_json::json!([p.i, p.j]))
                        .collect::<Vec<_>>(),
                    "birth_weight": polygon.birth_weight,
                    "enclosed_square": [polygon.enclosed_square.i, polygon.enclosed_square.j],
                });
                text.push_str(&serde_json::to_string(&value).expect("serializable"));
                text.push('\n');
                first_polygon.get_or_insert(polygon);
            }
            emit(&out, &text)?;
            if let Some(path) = svg {
                let polygon = first_polygon.expect("at least one report");
                let retained =
                    reduce_digraph(dg.spec(), &edges_at_most(&dg, polygon.birth_weight));
                fs::write(path, polygon_svg(&dg, &retained.edges, &polygon))?;
            }
            Ok(())
        }
        Command::Compare {
            field_a,
            field_b,
            wasserstein,
        } => {
            let fa = load_field_auto(&field_a, &None)?;
            let fb = load_field_auto(&field_b, &None)?;
            let pda = compute_pd1(&build_grid_digraph(&fa)?);
            let pdb = compute_pd1(&build_grid_digraph(&fb)?);
            let result = match wasserstein {
                Some(q) => {
                    if q < 1.0 {
                        return Err(Error::Format(format!(
                            "wasserstein order must be at least 1, got {q}"
                        )));
                    }
                    wasserstein_distance(&pda, &pdb, q)
                }
                None => bottleneck_distance(&pda, &pdb),
            };
            println!("{}", fmt(result.value));
            Ok(())
        }
        Command::Series { manifest, out } => {
            let text = fs::read_to_string(&manifest)?;
            let dir = manifest.parent().map(Path::to_path_buf).unwrap_or_default();
            let mut fields = Vec::new();
            for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
                let path = {
                    let p = PathBuf::from(line);
                    if p.is_relative() {
                        dir.join(p)
                    } else {
                        p
                    }
                };
                fields.push(load_field_auto(&path, &None)?);
            }
            let series = distance_series(&fields)?;
            let mut csv = String::from("step,bottleneck\n");
            for (step, value) in series {
                csv.push_str(&format!("{step},{}\n", fmt(value)));
            }
            emit(&out, &csv)
        }
    }
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io(_) | Error::Parse { .. } | Error::Format(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
