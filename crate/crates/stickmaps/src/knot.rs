//! Closed polygonal knot conformations: general-position validation, fixture
//! generators, and JSON file I/O.

use std::io::Read;
use std::path::Path;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Vec3;

/// Scale-free general-position tolerance, applied to normalized quantities
/// (unit-direction cross norms, volume over edge-scale cubed).
pub const EPS_GP: f64 = 1e-7;
/// Relative guard for degenerate (near-zero-length) edges.
pub const EPS_EDGE_REL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum KnotError {
    #[error("a closed polygon needs at least 4 vertices, got {n}")]
    TooFewVertices { n: usize },
    #[error("vertex {index} has a non-finite coordinate")]
    NonFiniteCoordinate { index: usize },
    #[error("invalid generator parameters: {reason}")]
    InvalidParameters { reason: String },
    #[error("generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },
    #[error("parse error in {path}: {detail}")]
    Parse { path: String, detail: String },
    #[error("knot fails general-position validation: {0}")]
    Validation(ValidationReport),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Which general-position rule a violation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    DegenerateEdge,
    FourConsecutiveCoplanar,
    ParallelEdges,
    ParallelOsculatingPlanes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub rule: Rule,
    pub indices: Vec<usize>,
    /// Normalized magnitude of the offending quantity, for triaging near-misses.
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.ok {
            return write!(f, "ok");
        }
        let mut first = true;
        for v in &self.violations {
            if !first {
                write!(f, "; ")?;
            }
            write!(
                f,
                "{:?} at {:?} (magnitude {:.3e})",
                v.rule, v.indices, v.magnitude
            )?;
            first = false;
        }
        Ok(())
    }
}

/// A closed polygonal curve in space. Vertex indices are cyclic.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonalKnot {
    vertices: Vec<Vec3>,
    name: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct KnotFile {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    name: Option<String>,
    vertices: Vec<[f64; 3]>,
}

impl PolygonalKnot {
    pub fn new(vertices: Vec<Vec3>) -> Result<Self, KnotError> {
        if vertices.len() < 4 {
            return Err(KnotError::TooFewVertices { n: vertices.len() });
        }
        for (index, v) in vertices.iter().enumerate() {
            if !(v.x.is_finite() && v.y.is_finite() && v.z.is_finite()) {
                return Err(KnotError::NonFiniteCoordinate { index });
            }
        }
        Ok(PolygonalKnot {
            vertices,
            name: None,
        })
    }

    pub fn from_coords(coords: Vec<[f64; 3]>) -> Result<Self, KnotError> {
        Self::new(coords.into_iter().map(Vec3::from).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, i: usize) -> Vec3 {
        self.vertices[i % self.vertices.len()]
    }

    /// Edge vector from vertex `i` to vertex `i+1`.
    pub fn edge_vector(&self, i: usize) -> Vec3 {
        self.vertex(i + 1) - self.vertex(i)
    }

    /// Unit direction of the edge ending at vertex `i` (from vertex `i-1` to
    /// vertex `i`); the tangent the edge contributes to the tangent indicatrix.
    pub fn tangent(&self, i: usize) -> Vec3 {
        let n = self.vertices.len();
        self.edge_vector((i + n - 1) % n).normalize()
    }

    /// Sum of turning angles at the vertices. Defined whenever consecutive
    /// vertices are distinct; does not require full general position.
    pub fn total_curvature(&self) -> f64 {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let before = self.tangent(i);
                let after = self.tangent(i + 1);
                before.cross(&after).norm().atan2(before.dot(&after))
            })
            .sum()
    }

    /// Traversal order reversed; same point set.
    pub fn reversed(&self) -> PolygonalKnot {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        PolygonalKnot {
            vertices,
            name: self.name.clone(),
        }
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }
}

/// Checks the general-position rules and reports every violation with a
/// normalized magnitude. Rules are built from directions and normalized
/// volumes, so the outcome is invariant under rigid motion and uniform scaling.
pub fn validate(k: &PolygonalKnot) -> ValidationReport {
    let n = k.n();
    let mut violations = Vec::new();

    let scale = k
        .vertices()
        .iter()
        .flat_map(|v| [v.x.abs(), v.y.abs(), v.z.abs()])
        .fold(0.0_f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let eps_edge = EPS_EDGE_REL * scale;

    for i in 0..n {
        let len = k.edge_vector(i).norm();
        if len <= eps_edge {
            violations.push(Violation {
                rule: Rule::DegenerateEdge,
                indices: vec![i, (i + 1) % n],
                magnitude: len / scale,
            });
        }
    }
    if !violations.is_empty() {
        // Directions are undefined; the remaining rules would cascade.
        return ValidationReport {
            ok: false,
            violations,
        };
    }

    let dirs: Vec<Vec3> = (0..n).map(|i| k.edge_vector(i).normalize()).collect();

    // No four consecutive vertices coplanar: tetrahedron volume over the
    // local edge-length scale cubed.
    for i in 0..n {
        let p = [
            k.vertex(i),
            k.vertex(i + 1),
            k.vertex(i + 2),
            k.vertex(i + 3),
        ];
        let e1 = p[1] - p[0];
        let e2 = p[2] - p[1];
        let e3 = p[3] - p[2];
        let local = (e1.norm() + e2.norm() + e3.norm()) / 3.0;
        let vol = e1.cross(&e2).dot(&e3).abs() / 6.0;
        let magnitude = vol / local.powi(3);
        if magnitude <= EPS_GP {
            violations.push(Violation {
                rule: Rule::FourConsecutiveCoplanar,
                indices: vec![i, (i + 1) % n, (i + 2) % n, (i + 3) % n],
                magnitude,
            });
        }
    }

    // No two undirected edges parallel.
    for i in 0..n {
        for j in (i + 1)..n {
            let magnitude = dirs[i].cross(&dirs[j]).norm();
            if magnitude <= EPS_GP {
                violations.push(Violation {
                    rule: Rule::ParallelEdges,
                    indices: vec![i, j],
                    magnitude,
                });
            }
        }
    }

    // No two osculating planes parallel. The binormal at vertex i is the
    // normalized cross of the adjacent edge directions; skip vertices whose
    // adjacent edges are already flagged parallel.
    let binormals: Vec<Option<Vec3>> = (0..n)
        .map(|i| {
            let prev = dirs[(i + n - 1) % n];
            let cross = prev.cross(&dirs[i]);
            (cross.norm() > EPS_GP).then(|| cross.normalize())
        })
        .collect();
    for i in 0..n {
        for j in (i + 1)..n {
            if let (Some(bi), Some(bj)) = (binormals[i], binormals[j]) {
                let magnitude = bi.cross(&bj).norm();
                if magnitude <= EPS_GP {
                    violations.push(Violation {
                        rule: Rule::ParallelOsculatingPlanes,
                        indices: vec![i, j],
                        magnitude,
                    });
                }
            }
        }
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Samples the standard torus-knot parametrization at `n` equally spaced
/// parameter values. On a validation failure the phase is advanced by a
/// fixed deterministic schedule until validation passes.
pub fn torus_knot_polygon(
    p: u32,
    q: u32,
    n: usize,
    major_radius: f64,
    minor_radius: f64,
) -> Result<PolygonalKnot, KnotError> {
    if gcd(p, q) != 1 {
        return Err(KnotError::InvalidParameters {
            reason: format!("p = {p} and q = {q} must be coprime"),
        });
    }
    if n < 3 * p.max(q) as usize {
        return Err(KnotError::InvalidParameters {
            reason: format!("n = {n} is below 3*max(p, q) = {}", 3 * p.max(q)),
        });
    }
    if !(major_radius > minor_radius && minor_radius > 0.0) {
        return Err(KnotError::InvalidParameters {
            reason: format!("need R > r > 0, got R = {major_radius}, r = {minor_radius}"),
        });
    }

    const MAX_ATTEMPTS: usize = 64;
    // Irrational-ish step keeps successive phases from realigning with the
    // sample spacing.
    let phase_step = 0.734_061_2 / n as f64;
    let mut last_report = None;
    for attempt in 0..MAX_ATTEMPTS {
        let phase = attempt as f64 * phase_step;
        let vertices: Vec<Vec3> = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + phase;
                let (pf, qf) = (p as f64, q as f64);
                let radial = major_radius + minor_radius * (qf * t).cos();
                Vec3::new(
                    radial * (pf * t).cos(),
                    radial * (pf * t).sin(),
                    minor_radius * (qf * t).sin(),
                )
            })
            .collect();
        let knot = PolygonalKnot::new(vertices)?.with_name(format!(
            "torus({p},{q}) n={n} R={major_radius} r={minor_radius}"
        ));
        let report = knot.validate();
        if report.ok {
            return Ok(knot);
        }
        last_report = Some(report);
    }
    Err(KnotError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason: format!(
            "every phase failed validation; last report: {}",
            last_report.expect("at least one attempt ran")
        ),
    })
}

/// The built-in six-stick trefoil: two stacked equilateral triangles offset
/// by a half turn, visited alternately. Coordinates are frozen; the fixture
/// passes validation, has total curvature above 4*pi, and its bridge map
/// attains minimum 4 and maximum 6 over a dense direction sweep.
pub fn hexagonal_trefoil() -> PolygonalKnot {
    let r_major = 2.0;
    let z = 1.0;
    let s3 = 3.0_f64.sqrt();
    PolygonalKnot::new(vec![
        Vec3::new(r_major, 0.0, z),
        Vec3::new(-1.0, s3, -z),
        Vec3::new(-1.0, -s3, z),
        Vec3::new(r_major, 0.0, -z),
        Vec3::new(-1.0, s3, z),
        Vec3::new(-1.0, -s3, -z),
    ])
    .expect("fixture has 6 finite vertices")
    .with_name("hexagonal trefoil")
}

/// Seeded rejection sampler: uniform vertices in the unit cube, resampled
/// until the conformation passes validation.
pub fn random_knot(n: usize, seed: u64) -> Result<PolygonalKnot, KnotError> {
    if n < 4 {
        return Err(KnotError::TooFewVertices { n });
    }
    const MAX_ATTEMPTS: usize = 1000;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let vertices: Vec<Vec3> = (0..n)
            .map(|_| {
                Vec3::new(
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                )
            })
            .collect();
        let knot = PolygonalKnot::new(vertices)?;
        if knot.validate().ok {
            return Ok(knot.with_name(format!("random n={n} seed={seed}")));
        }
    }
    Err(KnotError::GenerationFailed {
        attempts: MAX_ATTEMPTS,
        reason: format!("no valid conformation with n = {n} found for seed {seed}"),
    })
}

/// Reads a knot from the JSON file format `{"name": ..., "vertices": [[x,y,z], ...]}`.
/// Non-general-position inputs are rejected, not repaired.
pub fn load(path: impl AsRef<Path>) -> Result<PolygonalKnot, KnotError> {
    let path = path.as_ref();
    let display = path.display().to_string();
    let mut contents = String::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_string(&mut contents))
        .map_err(|source| KnotError::Io {
            path: display.clone(),
            source,
        })?;
    let file: KnotFile = serde_json::from_str(&contents).map_err(|e| KnotError::Parse {
        path: display.clone(),
        detail: format!("line {}, column {}: {}", e.line(), e.column(), e),
    })?;
    let mut knot = PolygonalKnot::from_coords(file.vertices)?;
    if let Some(name) = file.name {
        knot = knot.with_name(name);
    }
    let report = knot.validate();
    if !report.ok {
        return Err(KnotError::Validation(report));
    }
    Ok(knot)
}

/// Writes the knot as JSON. Numbers round-trip exactly through `load`.
pub fn save(k: &PolygonalKnot, path: impl AsRef<Path>) -> Result<(), KnotError> {
    let path = path.as_ref();
    let file = KnotFile {
        name: k.name.clone(),
        vertices: k.vertices().iter().map(|v| [v.x, v.y, v.z]).collect(),
    };
    let json = serde_json::to_string_pretty(&file).expect("knot file serialization is infallible");
    std::fs::write(path, json).map_err(|source| KnotError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Serializes a knot to the same JSON document `save` writes.
pub fn to_json(k: &PolygonalKnot) -> serde_json::Value {
    serde_json::json!({
        "name": k.name,
        "vertices": k.vertices().iter().map(|v| [v.x, v.y, v.z]).collect::<Vec<_>>(),
    })
}

/// The fixture quadrilateral used throughout the test suite.
pub fn fixture_quadrilateral() -> PolygonalKnot {
    PolygonalKnot::from_coords(vec![
        [0.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 1.0],
    ])
    .expect("fixture has 4 finite vertices")
    .with_name("Q")
}
