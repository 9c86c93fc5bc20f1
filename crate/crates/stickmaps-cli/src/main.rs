//! Command-line front end: generate/load knots, compute indicatrices and
//! maps, verify map graphs, and estimate indicatrix lengths by random great
//! circles. Every report embeds the tool version, the full run
//! configuration, and the input hash, so identical configurations produce
//! byte-identical output.
//!
//! Exit codes: 0 success/verified, 1 verification failure, 2 input or
//! validation error, 3 degeneracy budget exceeded (more than 5% of samples
//! degenerate).

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use stickmaps::geometry::{fibonacci_sphere, random_unit_vectors, UnitVector};
use stickmaps::graphs::{self, VerifyParams};
use stickmaps::indicatrix::Indicatrices;
use stickmaps::knot::{self, PolygonalKnot};
use stickmaps::maps::{sample_map, MapKind, Tolerances};

const TOOL_NAME: &str = "stickmaps";
const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = TOOL_NAME, version = TOOL_VERSION, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a knot conformation and write it as knot JSON.
    Gen {
        /// Generator spec: torus:P,Q,N,R,r | hextrefoil | random:N,seed=S
        #[arg(long = "gen", value_name = "SPEC")]
        spec: String,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Compute one spherical indicatrix plus the curvature/torsion summary.
    Indicatrix {
        #[command(flatten)]
        source: KnotSource,
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Evaluate one map over sampled directions by both methods.
    Map {
        #[command(flatten)]
        source: KnotSource,
        #[arg(long = "map", value_enum)]
        map: MapArg,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = Sampler::Fibonacci)]
        sampler: Sampler,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "tolerance-scale", default_value_t = 1.0)]
        tolerance_scale: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Verify that a map's value-change curve matches the predicted graph.
    Verify {
        #[command(flatten)]
        source: KnotSource,
        #[arg(long = "graph", value_enum)]
        graph: MapArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[arg(long, default_value_t = 1_000)]
        probes: usize,
        /// Verify against a deliberately wrong curve; the run must fail.
        #[arg(long = "negative-control")]
        negative_control: bool,
        #[arg(long = "tolerance-scale", default_value_t = 1.0)]
        tolerance_scale: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Estimate an indicatrix length from random great-circle intersections.
    Crofton {
        #[command(flatten)]
        source: KnotSource,
        #[arg(long, value_enum)]
        indicatrix: Which,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "tolerance-scale", default_value_t = 1.0)]
        tolerance_scale: f64,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct KnotSource {
    /// Knot JSON file.
    #[arg(long, value_name = "PATH", conflicts_with = "gen")]
    knot: Option<PathBuf>,
    /// Inline generator spec (same syntax as `gen --gen`).
    #[arg(long = "gen", value_name = "SPEC")]
    gen: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Tantrix,
    Binotrix,
    Notrix,
    Darboux,
}

impl Which {
    fn name(self) -> &'static str {
        match self {
            Which::Tantrix => "tantrix",
            Which::Binotrix => "binotrix",
            Which::Notrix => "notrix",
            Which::Darboux => "darboux",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MapArg {
    Bridge,
    Inflection,
    Tbridge,
    Tinflection,
}

impl From<MapArg> for MapKind {
    fn from(m: MapArg) -> MapKind {
        match m {
            MapArg::Bridge => MapKind::Bridge,
            MapArg::Inflection => MapKind::Inflection,
            MapArg::Tbridge => MapKind::TantrixBridge,
            MapArg::Tinflection => MapKind::TantrixInflection,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Sampler {
    Fibonacci,
    Random,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

#[derive(Serialize)]
struct Tool {
    name: &'static str,
    version: &'static str,
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    tool: Tool,
    config: serde_json::Value,
    input_hash: String,
    result: T,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Gen { spec, out } => cmd_gen(&spec, out.as_deref()),
        Command::Indicatrix { source, which, out } => {
            cmd_indicatrix(&source, which, out.as_deref())
        }
        Command::Map {
            source,
            map,
            samples,
            sampler,
            seed,
            tolerance_scale,
            out,
        } => cmd_map(
            &source,
            map,
            samples,
            sampler,
            seed,
            tolerance_scale,
            out.as_deref(),
        ),
        Command::Verify {
            source,
            graph,
            seed,
            pairs,
            probes,
            negative_control,
            tolerance_scale,
            out,
        } => cmd_verify(
            &source,
            graph,
            seed,
            pairs,
            probes,
            negative_control,
            tolerance_scale,
            out.as_deref(),
        ),
        Command::Crofton {
            source,
            indicatrix,
            samples,
            seed,
            tolerance_scale,
            out,
        } => cmd_crofton(
            &source,
            indicatrix,
            samples,
            seed,
            tolerance_scale,
            out.as_deref(),
        ),
    }
}

fn generate(spec: &str) -> Result<PolygonalKnot, Failure> {
    let (kind, rest) = match spec.split_once(':') {
        Some((k, r)) => (k, r),
        None => (spec, ""),
    };
    match kind {
        "hextrefoil" => Ok(knot::hexagonal_trefoil()),
        "torus" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.len() != 5 {
                return Err(Failure::input(format!(
                    "torus spec needs p,q,n,R,r — got `{rest}`"
                )));
            }
            let p: u32 = parse(parts[0], "p")?;
            let q: u32 = parse(parts[1], "q")?;
            let n: usize = parse(parts[2], "n")?;
            let major: f64 = parse(parts[3], "R")?;
            let minor: f64 = parse(parts[4], "r")?;
            knot::torus_knot_polygon(p, q, n, major, minor)
                .map_err(|e| Failure::input(e.to_string()))
        }
        "random" => {
            let parts: Vec<&str> = rest.split(',').collect();
            if parts.is_empty() || parts.len() > 2 {
                return Err(Failure::input(format!(
                    "random spec needs n[,seed=S] — got `{rest}`"
                )));
            }
            let n: usize = parse(parts[0], "n")?;
            let seed = match parts.get(1) {
                Some(s) => {
                    let s = s.strip_prefix("seed=").unwrap_or(s);
                    parse(s, "seed")?
                }
                None => 0,
            };
            knot::random_knot(n, seed).map_err(|e| Failure::input(e.to_string()))
        }
        other => Err(Failure::input(format!("unknown generator `{other}`"))),
    }
}

fn parse<T: std::str::FromStr>(s: &str, what: &str) -> Result<T, Failure> {
    s.trim()
        .parse()
        .map_err(|_| Failure::input(format!("cannot parse {what} from `{s}`")))
}

/// Resolves the knot plus a description and content hash for the report.
fn resolve(source: &KnotSource) -> Result<(PolygonalKnot, String, String), Failure> {
    match (&source.knot, &source.gen) {
        (Some(path), None) => {
            let bytes = std::fs::read(path)
                .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
            let k = knot::load(path).map_err(|e| Failure::input(e.to_string()))?;
            Ok((k, format!("file:{}", path.display()), hash_bytes(&bytes)))
        }
        (None, Some(spec)) => {
            let k = generate(spec)?;
            let canonical = knot::to_json(&k).to_string();
            Ok((k, format!("gen:{spec}"), hash_bytes(canonical.as_bytes())))
        }
        _ => Err(Failure::input("exactly one of --knot or --gen is required")),
    }
}

fn hash_bytes(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

fn emit<T: Serialize>(envelope: &Envelope<T>, out: Option<&Path>) -> Result<(), Failure> {
    let mut body = serde_json::to_string_pretty(envelope)
        .map_err(|e| Failure::input(format!("serialization failed: {e}")))?;
    body.push('\n');
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn tolerances(scale: f64) -> Result<Tolerances, Failure> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Failure::input("tolerance scale must be positive"));
    }
    Ok(Tolerances::scaled(scale))
}

fn cmd_gen(spec: &str, out: Option<&Path>) -> Result<u8, Failure> {
    let k = generate(spec)?;
    let json = serde_json::json!({
        "name": k.name(),
        "vertices": k.vertices().iter().map(|v| [v.x, v.y, v.z]).collect::<Vec<_>>(),
    });
    let mut body = serde_json::to_string_pretty(&json).expect("knot JSON is serializable");
    body.push('\n');
    match out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?,
        None => print!("{body}"),
    }
    Ok(0)
}

fn cmd_indicatrix(source: &KnotSource, which: Which, out: Option<&Path>) -> Result<u8, Failure> {
    let (k, desc, hash) = resolve(source)?;
    let ind = Indicatrices::new(&k).map_err(|e| Failure::input(e.to_string()))?;
    let polygon = match which {
        Which::Tantrix => ind.tantrix(),
        Which::Binotrix => ind.binotrix(),
        Which::Notrix => ind.notrix(),
        Which::Darboux => ind.darboux().map_err(|e| Failure::input(e.to_string()))?,
    };
    let fd = ind.frenet_data();
    let envelope = Envelope {
        tool: Tool {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        config: serde_json::json!({
            "command": "indicatrix",
            "knot": desc,
            "which": which.name(),
        }),
        input_hash: hash,
        result: serde_json::json!({
            "which": which.name(),
            "n": k.n(),
            "total_length": polygon.total_length(),
            "frenet": fd,
            "polygon": polygon,
        }),
    };
    emit(&envelope, out)?;
    Ok(0)
}

fn directions(sampler: Sampler, samples: usize, seed: u64) -> Vec<UnitVector> {
    match sampler {
        Sampler::Fibonacci => fibonacci_sphere(samples),
        Sampler::Random => random_unit_vectors(seed, samples),
    }
}

fn cmd_map(
    source: &KnotSource,
    map: MapArg,
    samples: usize,
    sampler: Sampler,
    seed: u64,
    tolerance_scale: f64,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    if samples == 0 {
        return Err(Failure::input("--samples must be positive"));
    }
    let tol = tolerances(tolerance_scale)?;
    let (k, desc, hash) = resolve(source)?;
    let kind: MapKind = map.into();
    let dirs = directions(sampler, samples, seed);
    let report = sample_map(&k, kind, &dirs, tol).map_err(|e| Failure::input(e.to_string()))?;
    let degenerate_fraction = report.degenerate_count as f64 / samples as f64;
    let envelope = Envelope {
        tool: Tool {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        config: serde_json::json!({
            "command": "map",
            "knot": desc,
            "map": kind.name(),
            "samples": samples,
            "sampler": match sampler { Sampler::Fibonacci => "fibonacci", Sampler::Random => "random" },
            "seed": seed,
            "tolerance_scale": tolerance_scale,
        }),
        input_hash: hash,
        result: &report,
    };
    emit(&envelope, out)?;
    if degenerate_fraction > 0.05 {
        eprintln!(
            "degeneracy budget exceeded: {:.1}% of samples degenerate",
            100.0 * degenerate_fraction
        );
        return Ok(3);
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    source: &KnotSource,
    graph: MapArg,
    seed: u64,
    pairs: usize,
    probes: usize,
    negative_control: bool,
    tolerance_scale: f64,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    let tol = tolerances(tolerance_scale)?;
    let (k, desc, hash) = resolve(source)?;
    let kind: MapKind = graph.into();
    // The negative control verifies against the graph predicted for a
    // different map; the run is expected to fail.
    let curve_kind = if negative_control {
        match kind {
            MapKind::Bridge => MapKind::Inflection,
            MapKind::Inflection => MapKind::Bridge,
            MapKind::TantrixBridge => MapKind::TantrixInflection,
            MapKind::TantrixInflection => MapKind::TantrixBridge,
        }
    } else {
        kind
    };
    let curve = graphs::graph_for(&k, curve_kind).map_err(|e| Failure::input(e.to_string()))?;
    let mut params = VerifyParams::new(seed);
    params.constancy_pairs = pairs;
    params.crossing_probes = probes;
    params.tol = tol;
    let verdict = graphs::verify_graph(&k, kind, &curve, &params)
        .map_err(|e| Failure::input(e.to_string()))?;
    let passed = verdict.passed();
    let total = verdict.samples_tested + verdict.degenerate_skips;
    let degenerate_fraction = if total > 0 {
        verdict.degenerate_skips as f64 / total as f64
    } else {
        0.0
    };
    let envelope = Envelope {
        tool: Tool {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        config: serde_json::json!({
            "command": "verify",
            "knot": desc,
            "graph": kind.name(),
            "seed": seed,
            "pairs": pairs,
            "probes": probes,
            "negative_control": negative_control,
            "tolerance_scale": tolerance_scale,
        }),
        input_hash: hash,
        result: serde_json::json!({
            "verdict": verdict,
            "passed": passed,
            "graph_arcs": curve.arcs.len(),
            "graph_total_length": curve.total_length(),
        }),
    };
    emit(&envelope, out)?;
    if degenerate_fraction > 0.05 {
        eprintln!(
            "degeneracy budget exceeded: {:.1}% of samples degenerate",
            100.0 * degenerate_fraction
        );
        return Ok(3);
    }
    Ok(if passed { 0 } else { 1 })
}

fn cmd_crofton(
    source: &KnotSource,
    which: Which,
    samples: usize,
    seed: u64,
    tolerance_scale: f64,
    out: Option<&Path>,
) -> Result<u8, Failure> {
    if samples == 0 {
        return Err(Failure::input("--samples must be positive"));
    }
    let tol = tolerances(tolerance_scale)?;
    let (k, desc, hash) = resolve(source)?;
    let ind = Indicatrices::new(&k).map_err(|e| Failure::input(e.to_string()))?;
    let fd = ind.frenet_data();
    let (polygon, exact) = match which {
        Which::Tantrix => (ind.tantrix(), fd.total_curvature),
        Which::Binotrix => (ind.binotrix(), fd.total_absolute_torsion),
        Which::Notrix => {
            let p = ind.notrix();
            let exact = p.total_length();
            (p, exact)
        }
        Which::Darboux => {
            let p = ind.darboux().map_err(|e| Failure::input(e.to_string()))?;
            let exact = p.total_length();
            (p, exact)
        }
    };
    let est = graphs::crofton_length(&polygon, samples, seed, tol.on_circle);
    let z = if est.stderr > 0.0 {
        (est.estimate - exact) / est.stderr
    } else {
        0.0
    };
    let envelope = Envelope {
        tool: Tool {
            name: TOOL_NAME,
            version: TOOL_VERSION,
        },
        config: serde_json::json!({
            "command": "crofton",
            "knot": desc,
            "indicatrix": which.name(),
            "samples": samples,
            "seed": seed,
            "tolerance_scale": tolerance_scale,
        }),
        input_hash: hash,
        result: serde_json::json!({
            "estimate": est.estimate,
            "stderr": est.stderr,
            "n_circles": est.n_circles,
            "exact_length": exact,
            "z_score": z,
        }),
    };
    emit(&envelope, out)?;
    Ok(0)
}
