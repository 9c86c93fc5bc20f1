//! Primitives on the unit sphere: unit vectors, great circles, shorter arcs,
//! signed projected angles, and arc/circle intersection counting with the
//! interval convention.
//!
//! All tolerances are absolute and sized for double precision at desk scale;
//! inputs constructed from unit-vector cross products clear them by several
//! orders of magnitude.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vec3 = nalgebra::Vector3<f64>;

/// Unit-norm check after normalization.
pub const EPS_UNIT: f64 = 1e-9;
/// Guard on |dot + 1| for antipodal endpoint detection.
pub const EPS_ANTIPODAL: f64 = 1e-9;
/// Minimum norm of a projection onto a plane before the projected angle is
/// considered undefined.
pub const EPS_PROJ: f64 = 1e-9;
/// Angular tolerance for boundary cases (angles at 0 or pi).
pub const EPS_ANGLE: f64 = 1e-9;
/// A point p lies on the great circle with pole c when |c . p| < EPS_ON_CIRCLE.
pub const EPS_ON_CIRCLE: f64 = 1e-9;
/// Guard on the cross-product norm of arc endpoints (zero-length arcs).
pub const EPS_ARC: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("vector has near-zero norm {norm:.3e}, cannot normalize")]
    ZeroVector { norm: f64 },
    #[error("vector norm {norm} deviates from 1 by more than {eps}")]
    NotUnit { norm: f64, eps: f64 },
    #[error("arc endpoints are antipodal within tolerance (dot = {dot})")]
    AntipodalEndpoints { dot: f64 },
    #[error("arc endpoints coincide within tolerance (cross norm = {cross_norm:.3e})")]
    DegenerateArc { cross_norm: f64 },
    #[error("projection onto the plane normal to the axis has norm {norm:.3e} < {eps}")]
    DegenerateProjection { norm: f64, eps: f64 },
    #[error("projected angle magnitude {angle} is within {eps} of pi")]
    BoundaryTorsion { angle: f64, eps: f64 },
    #[error("polygon needs at least 3 vertices, got {n}")]
    TooFewPolygonVertices { n: usize },
    #[error("polygon arc {index} is degenerate: {source}")]
    DegeneratePolygonArc {
        index: usize,
        source: Box<GeometryError>,
    },
}

/// A point of the unit sphere. Constructors normalize and reject near-zero input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitVector(Vec3);

impl UnitVector {
    /// Normalizes `v`; errors when the norm is below `EPS_PROJ`.
    pub fn normalize(v: Vec3) -> Result<Self, GeometryError> {
        let norm = v.norm();
        if norm < EPS_PROJ {
            return Err(GeometryError::ZeroVector { norm });
        }
        Ok(UnitVector(v / norm))
    }

    /// Accepts `v` only if it is already unit within `EPS_UNIT`.
    pub fn try_new(v: Vec3) -> Result<Self, GeometryError> {
        let norm = v.norm();
        if (norm - 1.0).abs() > EPS_UNIT {
            return Err(GeometryError::NotUnit {
                norm,
                eps: EPS_UNIT,
            });
        }
        Ok(UnitVector(v / norm))
    }

    pub fn from_coords(x: f64, y: f64, z: f64) -> Result<Self, GeometryError> {
        Self::normalize(Vec3::new(x, y, z))
    }

    pub fn as_vec3(&self) -> Vec3 {
        self.0
    }

    pub fn dot(&self, other: &UnitVector) -> f64 {
        self.0.dot(&other.0)
    }

    /// Raw cross product; not normalized.
    pub fn cross(&self, other: &UnitVector) -> Vec3 {
        self.0.cross(&other.0)
    }

    pub fn neg(&self) -> UnitVector {
        UnitVector(-self.0)
    }

    /// Angle to `other` in [0, pi], computed with atan2 for accuracy near 0 and pi.
    pub fn angle_to(&self, other: &UnitVector) -> f64 {
        self.0.cross(&other.0).norm().atan2(self.0.dot(&other.0))
    }

    pub fn approx_eq(&self, other: &UnitVector, tol: f64) -> bool {
        (self.0 - other.0).norm() <= tol
    }
}

impl Serialize for UnitVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.0.x, self.0.y, self.0.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(d)?;
        UnitVector::try_new(Vec3::new(x, y, z)).map_err(serde::de::Error::custom)
    }
}

/// A great circle encoded by its pole. `pole` and `-pole` denote the same
/// undirected circle but opposite co-orientations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreatCircle {
    pub pole: UnitVector,
}

impl GreatCircle {
    pub fn new(pole: UnitVector) -> Self {
        GreatCircle { pole }
    }

    /// Signed distance proxy: sine of the angular distance from the circle.
    pub fn signed_height(&self, p: &UnitVector) -> f64 {
        self.pole.dot(p)
    }

    pub fn contains(&self, p: &UnitVector, eps: f64) -> bool {
        self.signed_height(p).abs() < eps
    }
}

/// The shorter great-circle arc between two non-equal, non-antipodal points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: UnitVector,
    pub end: UnitVector,
}

impl Arc {
    pub fn try_new(start: UnitVector, end: UnitVector) -> Result<Self, GeometryError> {
        let dot = start.dot(&end);
        if (dot + 1.0).abs() < EPS_ANTIPODAL {
            return Err(GeometryError::AntipodalEndpoints { dot });
        }
        let cross_norm = start.cross(&end).norm();
        if cross_norm < EPS_ARC && dot > 0.0 {
            return Err(GeometryError::DegenerateArc { cross_norm });
        }
        Ok(Arc { start, end })
    }

    /// Arc length in (0, pi).
    pub fn length(&self) -> f64 {
        self.start.angle_to(&self.end)
    }

    /// Pole of the arc's great circle on the left of the direction of travel,
    /// viewed from outside the sphere.
    pub fn pole(&self) -> UnitVector {
        UnitVector::normalize(self.start.cross(&self.end))
            .expect("arc invariant guarantees a nonzero cross product")
    }

    pub fn reversed(&self) -> Arc {
        Arc {
            start: self.end,
            end: self.start,
        }
    }

    /// Point at angular parameter `alpha` from the start (0 <= alpha <= length).
    pub fn point_at(&self, alpha: f64) -> UnitVector {
        let pole = self.pole();
        let d = pole.as_vec3().cross(&self.start.as_vec3());
        UnitVector::normalize(self.start.as_vec3() * alpha.cos() + d * alpha.sin())
            .expect("rotation of a unit vector stays unit")
    }

    /// Angular coordinate of `p` along the arc's circle, measured from the
    /// start in the direction of travel, in (-pi, pi].
    pub fn angle_of(&self, p: &UnitVector) -> f64 {
        let pole = self.pole();
        let d = pole.as_vec3().cross(&self.start.as_vec3());
        p.as_vec3().dot(&d).atan2(p.dot(&self.start))
    }

    /// Whether `p` (assumed on the arc's great circle) lies within the arc
    /// span, inclusive up to `margin` beyond the endpoints.
    pub fn within_span(&self, p: &UnitVector, margin: f64) -> bool {
        let alpha = self.angle_of(p);
        alpha >= -margin && alpha <= self.length() + margin
    }
}

/// Free-standing form of [`Arc::length`].
pub fn arc_length(a: &Arc) -> f64 {
    a.length()
}

/// Intersection tally of a single arc or a closed polygon with a great circle.
///
/// `transversal` counts strict sign-change crossings, `interval` counts
/// maximal connected pieces lying on the circle (a contained arc, or at
/// polygon level a maximal chain of on-circle vertices and arcs), and
/// `on_circle_vertices` counts endpoints/vertices on the circle. The total
/// applies the convention that an intersection over an interval counts once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IntersectionCount {
    pub transversal: usize,
    pub interval: usize,
    pub on_circle_vertices: usize,
}

impl IntersectionCount {
    pub fn total(&self) -> usize {
        self.transversal + self.interval
    }
}

/// Counts intersections of one arc with a great circle.
///
/// An endpoint on the circle is attributed to the vertex (reported in
/// `on_circle_vertices`), not counted as a crossing; chains of such vertices
/// are merged at polygon level. Both endpoints on the circle means the whole
/// shorter arc lies in the circle (`interval = 1`).
pub fn arc_circle_intersection(a: &Arc, c: &GreatCircle, eps: f64) -> IntersectionCount {
    let s0 = c.signed_height(&a.start);
    let s1 = c.signed_height(&a.end);
    let on0 = s0.abs() < eps;
    let on1 = s1.abs() < eps;
    match (on0, on1) {
        (true, true) => IntersectionCount {
            transversal: 0,
            interval: 1,
            on_circle_vertices: 2,
        },
        (true, false) | (false, true) => IntersectionCount {
            transversal: 0,
            interval: 0,
            on_circle_vertices: 1,
        },
        (false, false) => IntersectionCount {
            transversal: usize::from(s0 * s1 < 0.0),
            interval: 0,
            on_circle_vertices: 0,
        },
    }
}

/// Directed angle between the projections of `prev` and `next` onto the plane
/// orthogonal to `axis`, in (-pi, pi).
///
/// Sign convention: looking along the directed axis (axis pointing away from
/// the viewer), counterclockwise from the projected `prev` to the projected
/// `next` is positive. Equivalently the sign equals the sign of
/// `(prev x axis) . next`.
pub fn signed_torsion_angle(prev: Vec3, axis: Vec3, next: Vec3) -> Result<f64, GeometryError> {
    let axis_norm = axis.norm();
    if axis_norm < EPS_PROJ {
        return Err(GeometryError::ZeroVector { norm: axis_norm });
    }
    let a = axis / axis_norm;
    let p = prev - a * prev.dot(&a);
    let n = next - a * next.dot(&a);
    for proj in [&p, &n] {
        if proj.norm() < EPS_PROJ {
            return Err(GeometryError::DegenerateProjection {
                norm: proj.norm(),
                eps: EPS_PROJ,
            });
        }
    }
    let angle = (-a.dot(&p.cross(&n))).atan2(p.dot(&n));
    if angle.abs() > std::f64::consts::PI - EPS_ANGLE {
        return Err(GeometryError::BoundaryTorsion {
            angle,
            eps: EPS_ANGLE,
        });
    }
    Ok(angle)
}

/// Side of the directed arc a co-orienting normal points toward.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoOrientation {
    /// Normal points to the left of the direction of travel, viewed from
    /// outside the sphere.
    Left,
    Right,
}

/// A closed spherical polygon: a cyclic vertex sequence joined by shorter
/// great-circle arcs, with a co-orientation.
///
/// The co-orientation is either uniform (`Left`/`Right` relative to the
/// direction of travel) or, for polygons produced by dualization, an explicit
/// per-arc co-oriented pole that need not agree with a uniform rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalPolygon {
    vertices: Vec<UnitVector>,
    co_orientation: CoOrientation,
    // In-memory refinement only; the JSON export carries vertices and the
    // uniform co-orientation.
    #[serde(skip)]
    co_poles: Option<Vec<UnitVector>>,
}

impl SphericalPolygon {
    /// Builds a polygon, checking every consecutive pair is a valid shorter arc.
    pub fn new(
        vertices: Vec<UnitVector>,
        co_orientation: CoOrientation,
    ) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::TooFewPolygonVertices { n: vertices.len() });
        }
        let n = vertices.len();
        for i in 0..n {
            Arc::try_new(vertices[i], vertices[(i + 1) % n]).map_err(|e| {
                GeometryError::DegeneratePolygonArc {
                    index: i,
                    source: Box::new(e),
                }
            })?;
        }
        Ok(SphericalPolygon {
            vertices,
            co_orientation,
            co_poles: None,
        })
    }

    /// Attaches explicit per-arc co-oriented poles (one per arc, arc `i`
    /// running from vertex `i` to vertex `i+1`).
    pub fn with_co_poles(mut self, co_poles: Vec<UnitVector>) -> Self {
        assert_eq!(co_poles.len(), self.vertices.len());
        self.co_poles = Some(co_poles);
        self
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn co_orientation(&self) -> CoOrientation {
        self.co_orientation
    }

    pub fn vertices(&self) -> &[UnitVector] {
        &self.vertices
    }

    /// Vertex with cyclic indexing.
    pub fn vertex(&self, i: usize) -> UnitVector {
        self.vertices[i % self.vertices.len()]
    }

    /// Arc `i` runs from vertex `i` to vertex `i+1`.
    pub fn arc(&self, i: usize) -> Arc {
        let n = self.vertices.len();
        Arc {
            start: self.vertices[i % n],
            end: self.vertices[(i + 1) % n],
        }
    }

    pub fn arcs(&self) -> impl Iterator<Item = Arc> + '_ {
        (0..self.vertices.len()).map(move |i| self.arc(i))
    }

    /// Pole of arc `i` on the co-oriented side.
    pub fn co_pole(&self, i: usize) -> UnitVector {
        let n = self.vertices.len();
        if let Some(poles) = &self.co_poles {
            return poles[i % n];
        }
        let left = self.arc(i).pole();
        match self.co_orientation {
            CoOrientation::Left => left,
            CoOrientation::Right => left.neg(),
        }
    }

    /// Sum of arc lengths.
    pub fn total_length(&self) -> f64 {
        self.arcs().map(|a| a.length()).sum()
    }

    /// Exterior angle at vertex `i`: the angle between the co-oriented poles
    /// of the two arcs meeting there. For a uniformly left-co-oriented
    /// polygon this is the unsigned turning angle of the direction of travel.
    pub fn exterior_angle(&self, i: usize) -> f64 {
        let n = self.vertices.len();
        let before = self.co_pole((i + n - 1) % n);
        let after = self.co_pole(i);
        before.angle_to(&after)
    }

    /// Every vertex negated; arc structure preserved. Explicit co-poles are
    /// carried along (negated), and a uniform co-orientation flips side
    /// because the antipodal map reverses handedness.
    pub fn antipode(&self) -> SphericalPolygon {
        SphericalPolygon {
            vertices: self.vertices.iter().map(UnitVector::neg).collect(),
            co_orientation: match self.co_orientation {
                CoOrientation::Left => CoOrientation::Right,
                CoOrientation::Right => CoOrientation::Left,
            },
            co_poles: self
                .co_poles
                .as_ref()
                .map(|ps| ps.iter().map(UnitVector::neg).collect()),
        }
    }

    /// Total intersection count with a great circle under the interval
    /// convention: strict crossings plus one per maximal on-circle chain of
    /// vertices (the arcs between consecutive on-circle vertices lie in the
    /// circle automatically).
    pub fn circle_count(&self, circle: &GreatCircle, eps: f64) -> IntersectionCount {
        let n = self.vertices.len();
        let heights: Vec<f64> = self
            .vertices
            .iter()
            .map(|v| circle.signed_height(v))
            .collect();
        let on: Vec<bool> = heights.iter().map(|h| h.abs() < eps).collect();
        let on_count = on.iter().filter(|&&b| b).count();

        if on_count == n {
            return IntersectionCount {
                transversal: 0,
                interval: 1,
                on_circle_vertices: n,
            };
        }

        let mut transversal = 0;
        for i in 0..n {
            let j = (i + 1) % n;
            if !on[i] && !on[j] && heights[i] * heights[j] < 0.0 {
                transversal += 1;
            }
        }

        // Each maximal cyclic run of on-circle vertices is one interval
        // intersection; runs are delimited by off-circle vertices.
        let mut interval = 0;
        for i in 0..n {
            let prev = (i + n - 1) % n;
            if on[i] && !on[prev] {
                interval += 1;
            }
        }

        IntersectionCount {
            transversal,
            interval,
            on_circle_vertices: on_count,
        }
    }

    /// Index-aligned comparison.
    pub fn approx_eq(&self, other: &SphericalPolygon, tol: f64) -> bool {
        self.vertices.len() == other.vertices.len()
            && self
                .vertices
                .iter()
                .zip(&other.vertices)
                .all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Comparison as cyclic sequences: equal up to a rotation of the index
    /// origin. Returns the matching offset if any.
    pub fn cyclic_offset_eq(&self, other: &SphericalPolygon, tol: f64) -> Option<usize> {
        let n = self.vertices.len();
        if n != other.vertices.len() {
            return None;
        }
        (0..n).find(|&off| {
            (0..n).all(|i| self.vertices[(i + off) % n].approx_eq(&other.vertices[i], tol))
        })
    }
}

/// Free-standing form of [`SphericalPolygon::antipode`].
pub fn antipode(p: &SphericalPolygon) -> SphericalPolygon {
    p.antipode()
}

/// Whether two shorter arcs share a point, up to `margin` slack at the arc
/// ends. Near-cocircular arcs are resolved by span overlap of the endpoints.
pub fn arcs_intersect(a: &Arc, b: &Arc, margin: f64) -> bool {
    let pa = a.pole();
    let pb = b.pole();
    let dir = pa.cross(&pb);
    if dir.norm() < EPS_ARC {
        // Same (or mirrored) great circle: intersect iff spans overlap.
        if pa.dot(&b.start).abs() > EPS_ON_CIRCLE {
            return false;
        }
        return a.within_span(&b.start, margin)
            || a.within_span(&b.end, margin)
            || b.within_span(&a.start, margin)
            || b.within_span(&a.end, margin);
    }
    let candidate = UnitVector::normalize(dir).expect("norm checked above");
    for p in [candidate, candidate.neg()] {
        if a.within_span(&p, margin) && b.within_span(&p, margin) {
            return true;
        }
    }
    false
}

/// Deterministic, nearly uniform direction sweep: the Fibonacci sphere
/// lattice with `count` points.
pub fn fibonacci_sphere(count: usize) -> Vec<UnitVector> {
    let golden_angle = std::f64::consts::PI * (3.0 - 5.0_f64.sqrt());
    (0..count)
        .map(|k| {
            let z = 1.0 - (2.0 * k as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden_angle * k as f64;
            UnitVector::try_new(Vec3::new(r * phi.cos(), r * phi.sin(), z))
                .expect("lattice points are unit by construction")
        })
        .collect()
}

/// Seeded uniform directions on the sphere.
pub fn random_unit_vectors(seed: u64, count: usize) -> Vec<UnitVector> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    sample_unit_vectors(&mut rng, count)
}

/// Uniform directions from an existing RNG.
pub fn sample_unit_vectors<R: rand::Rng>(rng: &mut R, count: usize) -> Vec<UnitVector> {
    use rand_distr::Distribution;
    let sphere = rand_distr::UnitSphere;
    (0..count)
        .map(|_| {
            let [x, y, z]: [f64; 3] = sphere.sample(rng);
            UnitVector::try_new(Vec3::new(x, y, z)).expect("UnitSphere samples are unit")
        })
        .collect()
}

/// Rotation by `angle` about `axis` (right-handed).
pub fn rotation_about(axis: &UnitVector, angle: f64) -> nalgebra::Rotation3<f64> {
    nalgebra::Rotation3::from_axis_angle(&nalgebra::Unit::new_unchecked(axis.as_vec3()), angle)
}
