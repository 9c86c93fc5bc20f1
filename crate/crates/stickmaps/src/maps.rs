//! The four projection-counting maps of a stick knot, each evaluated by two
//! independent methods: direct analysis of the projection, and intersection
//! counting on the matching indicatrix. For directions outside the
//! tolerance bands the two methods agree exactly.
//!
//! Map/indicatrix pairing:
//!
//! * bridge — stationary points of the height function — tantrix
//! * inflection — inflection sticks of the planar projection — binotrix
//! * tantrix-bridge — stationary points of the tantrix height — notrix
//! * tantrix-inflection — corner/turn sign changes of the projected tantrix — darboux
//!
//! A direction is degenerate for a map when some decision quantity falls
//! inside the `on_circle` tolerance band (a vertex of the relevant
//! indicatrix close to the probe circle, or a projection classification near
//! a type boundary). Degenerate directions still get counts, but agreement
//! is only guaranteed outside the bands.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{GreatCircle, UnitVector, Vec3, EPS_ON_CIRCLE};
use crate::indicatrix::{Indicatrices, IndicatrixError};
use crate::knot::PolygonalKnot;

#[derive(Debug, Error)]
pub enum MapsError {
    #[error(transparent)]
    Indicatrix(#[from] IndicatrixError),
    #[error("direction is not a regular projection: a Darboux vertex lies on the probe circle")]
    NonRegularDirection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MapKind {
    Bridge,
    Inflection,
    #[serde(rename = "tbridge")]
    TantrixBridge,
    #[serde(rename = "tinflection")]
    TantrixInflection,
}

impl MapKind {
    pub const ALL: [MapKind; 4] = [
        MapKind::Bridge,
        MapKind::Inflection,
        MapKind::TantrixBridge,
        MapKind::TantrixInflection,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MapKind::Bridge => "bridge",
            MapKind::Inflection => "inflection",
            MapKind::TantrixBridge => "tbridge",
            MapKind::TantrixInflection => "tinflection",
        }
    }
}

impl std::str::FromStr for MapKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bridge" => Ok(MapKind::Bridge),
            "inflection" => Ok(MapKind::Inflection),
            "tbridge" | "tantrix-bridge" => Ok(MapKind::TantrixBridge),
            "tinflection" | "tantrix-inflection" => Ok(MapKind::TantrixInflection),
            other => Err(format!("unknown map kind: {other}")),
        }
    }
}

/// Direction-degeneracy tolerances. `on_circle` bounds every band; the CLI
/// exposes a bounded multiplier on the default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub on_circle: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            on_circle: EPS_ON_CIRCLE,
        }
    }
}

impl Tolerances {
    pub const MIN_ON_CIRCLE: f64 = 1e-12;
    pub const MAX_ON_CIRCLE: f64 = 1e-4;

    /// Default tolerances scaled by `factor`, clamped to the supported range.
    pub fn scaled(factor: f64) -> Self {
        Tolerances {
            on_circle: (EPS_ON_CIRCLE * factor).clamp(Self::MIN_ON_CIRCLE, Self::MAX_ON_CIRCLE),
        }
    }
}

/// One map evaluation: the count and whether the direction fell inside a
/// tolerance band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eval {
    pub count: usize,
    pub degenerate: bool,
}

/// Per-edge/per-pair classification of one planar projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionClassification {
    /// Edges whose neighbors project to opposite sides of the extended edge line.
    pub type_i: usize,
    /// Adjacent edge pairs projected to collinear sticks.
    pub type_ii: usize,
    /// Edges projected to a point.
    pub type_iii: usize,
    /// Tantrix corner configurations; present only for regular projections.
    pub d_a: Option<usize>,
    pub d_b: Option<usize>,
    pub d_c: Option<usize>,
    pub degenerate: bool,
}

/// Evaluates all four maps for one knot. Construction validates the knot and
/// builds the shared indicatrix frames once.
#[derive(Debug, Clone)]
pub struct MapEvaluator {
    vertices: Vec<Vec3>,
    ind: Indicatrices,
    tol: Tolerances,
}

impl MapEvaluator {
    pub fn new(knot: &PolygonalKnot, tol: Tolerances) -> Result<Self, MapsError> {
        Ok(MapEvaluator {
            vertices: knot.vertices().to_vec(),
            ind: Indicatrices::new(knot)?,
            tol,
        })
    }

    pub fn indicatrices(&self) -> &Indicatrices {
        &self.ind
    }

    pub fn n(&self) -> usize {
        self.vertices.len()
    }

    fn eps(&self) -> f64 {
        self.tol.on_circle
    }

    /// Stationary points of the height function along `v`, from vertex
    /// heights: strict extrema at vertices plus one per maximal chain of
    /// level edges (plateau or shelf alike).
    pub fn bridge_direct(&self, v: &UnitVector) -> Eval {
        let n = self.n();
        let eps = self.eps();
        let heights: Vec<f64> = self.vertices.iter().map(|x| v.as_vec3().dot(x)).collect();
        // Normalized slope of the edge ending at vertex i.
        let slopes: Vec<f64> = (0..n)
            .map(|i| {
                let prev = (i + n - 1) % n;
                let edge = self.vertices[i] - self.vertices[prev];
                (heights[i] - heights[prev]) / edge.norm()
            })
            .collect();
        let level: Vec<bool> = slopes.iter().map(|s| s.abs() < eps).collect();
        let degenerate = level.iter().any(|&l| l);

        if level.iter().all(|&l| l) {
            return Eval {
                count: 1,
                degenerate: true,
            };
        }

        let mut count = 0;
        for i in 0..n {
            // Vertex i sits between the edges with slopes[i] and slopes[i+1].
            let next = (i + 1) % n;
            if !level[i] && !level[next] && slopes[i] * slopes[next] < 0.0 {
                count += 1;
            }
        }
        for i in 0..n {
            let prev = (i + n - 1) % n;
            if level[i] && !level[prev] {
                count += 1;
            }
        }
        Eval { count, degenerate }
    }

    /// Bridge count as intersections of the tantrix with the circle
    /// orthogonal to `v`, interval convention included.
    pub fn bridge_via_tantrix(&self, v: &UnitVector) -> Eval {
        self.indicatrix_count(&self.ind.tantrix(), v)
    }

    /// Inflection-stick count from the planar projection orthogonal to `v`.
    pub fn inflection_direct(&self, v: &UnitVector) -> Eval {
        let c = self.classify_inflection_sticks(v);
        Eval {
            count: c.type_i + c.type_ii + c.type_iii,
            degenerate: c.degenerate,
        }
    }

    /// Inflection count as intersections of the binotrix with the circle
    /// orthogonal to `v`.
    pub fn inflection_via_binotrix(&self, v: &UnitVector) -> Eval {
        self.indicatrix_count(&self.ind.binotrix(), v)
    }

    /// Stationary points of the tantrix height along `v`: vertex extrema,
    /// interior arc extrema, and level arcs counted once.
    pub fn tantrix_bridge_direct(&self, v: &UnitVector) -> Eval {
        let n = self.n();
        let eps = self.eps();
        let vv = v.as_vec3();

        // Height derivative entering and leaving each tantrix vertex.
        let mut du = Vec::with_capacity(n);
        let mut dw = Vec::with_capacity(n);
        for i in 0..n {
            let prev = (i + n - 1) % n;
            let t_i = self.ind.tangent(i).as_vec3();
            du.push(vv.dot(&self.ind.binormal(prev).as_vec3().cross(&t_i)));
            dw.push(vv.dot(&self.ind.binormal(i).as_vec3().cross(&t_i)));
        }
        let mut degenerate = du.iter().chain(dw.iter()).any(|d| d.abs() < eps);

        let mut count = 0;
        for i in 0..n {
            if du[i].abs() >= eps && dw[i].abs() >= eps && du[i] * dw[i] < 0.0 {
                count += 1;
            }
        }
        // Interior extrema: the height along a great circle is stationary at
        // the two antipodal points nearest/farthest from v; an arc shorter
        // than pi contains at most one.
        let tantrix = self.ind.tantrix();
        for i in 0..n {
            let pole = self.ind.binormal(i).as_vec3();
            let vp = vv - pole * vv.dot(&pole);
            let amplitude = vp.norm();
            if amplitude < eps {
                // Level arc: the whole arc is stationary; counts once.
                count += 1;
                degenerate = true;
                continue;
            }
            let arc = tantrix.arc(i);
            let len = arc.length();
            for candidate in [vp / amplitude, -vp / amplitude] {
                let x = UnitVector::try_new(candidate).expect("normalized above");
                let alpha = arc.angle_of(&x);
                if alpha > 0.0 && alpha < len {
                    count += 1;
                }
            }
        }
        Eval { count, degenerate }
    }

    /// Tantrix-bridge count as intersections of the notrix with the circle
    /// orthogonal to `v`.
    pub fn tantrix_bridge_via_notrix(&self, v: &UnitVector) -> Eval {
        self.indicatrix_count(&self.ind.notrix(), v)
    }

    /// Whether `v` gives a regular projection for the tantrix-inflection
    /// map: no Darboux vertex on the probe circle.
    pub fn is_regular_projection(&self, v: &UnitVector) -> bool {
        let eps = self.eps();
        let n = self.n();
        (0..n).all(|i| {
            v.dot(&self.ind.tangent(i)).abs() >= eps && v.dot(&self.ind.binormal(i)).abs() >= eps
        })
    }

    /// Tantrix-inflection count `d_a + d_b + 2 d_c` from the projected
    /// tantrix. Errors on non-regular projections.
    pub fn tantrix_inflection_direct(&self, v: &UnitVector) -> Result<Eval, MapsError> {
        let (d_a, d_b, d_c, degenerate) = self.classify_tantrix_corners(v)?;
        Ok(Eval {
            count: d_a + d_b + 2 * d_c,
            degenerate,
        })
    }

    /// Tantrix-inflection count as intersections of the Darboux indicatrix
    /// with the circle orthogonal to `v`. Errors on non-regular projections.
    pub fn tantrix_inflection_via_darboux(&self, v: &UnitVector) -> Result<Eval, MapsError> {
        if !self.is_regular_projection(v) {
            return Err(MapsError::NonRegularDirection);
        }
        let darboux = self
            .ind
            .darboux()
            .expect("validated knots have nonzero torsion");
        Ok(self.indicatrix_count(&darboux, v))
    }

    /// Full per-direction classification of the projection: inflection stick
    /// types, and the tantrix corner configurations when regular.
    pub fn classify_projection(&self, v: &UnitVector) -> ProjectionClassification {
        let mut c = self.classify_inflection_sticks(v);
        if let Ok((d_a, d_b, d_c, degenerate)) = self.classify_tantrix_corners(v) {
            c.d_a = Some(d_a);
            c.d_b = Some(d_b);
            c.d_c = Some(d_c);
            c.degenerate |= degenerate;
        }
        c
    }

    /// Evaluates one map by both methods.
    pub fn evaluate(&self, kind: MapKind, v: &UnitVector) -> SampleRecord {
        let (direct, via) = match kind {
            MapKind::Bridge => (
                Some(self.bridge_direct(v)),
                Some(self.bridge_via_tantrix(v)),
            ),
            MapKind::Inflection => (
                Some(self.inflection_direct(v)),
                Some(self.inflection_via_binotrix(v)),
            ),
            MapKind::TantrixBridge => (
                Some(self.tantrix_bridge_direct(v)),
                Some(self.tantrix_bridge_via_notrix(v)),
            ),
            MapKind::TantrixInflection => (
                self.tantrix_inflection_direct(v).ok(),
                self.tantrix_inflection_via_darboux(v).ok(),
            ),
        };
        let degenerate = match (&direct, &via) {
            (Some(d), Some(i)) => d.degenerate || i.degenerate,
            _ => true,
        };
        SampleRecord {
            v: [v.as_vec3().x, v.as_vec3().y, v.as_vec3().z],
            direct: direct.map(|e| e.count),
            indicatrix: via.map(|e| e.count),
            degenerate,
        }
    }

    /// Intersection total of an indicatrix polygon with the circle
    /// orthogonal to `v`; degenerate when a vertex sits on the circle.
    fn indicatrix_count(
        &self,
        polygon: &crate::geometry::SphericalPolygon,
        v: &UnitVector,
    ) -> Eval {
        let count = polygon.circle_count(&GreatCircle::new(*v), self.eps());
        Eval {
            count: count.total(),
            degenerate: count.on_circle_vertices > 0,
        }
    }

    fn classify_inflection_sticks(&self, v: &UnitVector) -> ProjectionClassification {
        let n = self.n();
        let eps = self.eps();
        let vv = v.as_vec3();
        // Orthonormal basis of the projection plane with e1 x e2 = v, so the
        // 2D cross product matches the sign of v . (a x b).
        let seed = if vv.x.abs() < 0.9 {
            Vec3::new(1.0, 0.0, 0.0)
        } else {
            Vec3::new(0.0, 1.0, 0.0)
        };
        let e1 = vv.cross(&seed).normalize();
        let e2 = vv.cross(&e1);

        // Projected unit tangent of the edge ending at vertex i.
        let proj: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = self.ind.tangent(i).as_vec3();
                [t.dot(&e1), t.dot(&e2)]
            })
            .collect();
        let norms: Vec<f64> = proj
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .collect();
        let cross2 = |a: &[f64; 2], b: &[f64; 2]| a[0] * b[1] - a[1] * b[0];

        let point_edge: Vec<bool> = norms.iter().map(|&m| m < eps).collect();
        let mut degenerate = point_edge.iter().any(|&b| b);

        let mut type_iii = 0;
        for &p in &point_edge {
            if p {
                type_iii += 1;
            }
        }

        // Collinearity of adjacent projected edges, on normalized directions.
        let mut collinear = vec![false; n];
        for i in 0..n {
            let j = (i + 1) % n;
            if point_edge[i] || point_edge[j] {
                continue;
            }
            let c = cross2(&proj[i], &proj[j]) / (norms[i] * norms[j]);
            if c.abs() < eps {
                collinear[i] = true;
                degenerate = true;
            }
        }
        let type_ii = collinear.iter().filter(|&&b| b).count();

        // Opposite-side test for each edge against its neighbors' far endpoints.
        let mut type_i = 0;
        for i in 0..n {
            if point_edge[i] {
                continue;
            }
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            if point_edge[prev] || point_edge[next] || collinear[prev] || collinear[i] {
                continue;
            }
            let u = [proj[i][0] / norms[i], proj[i][1] / norms[i]];
            let side_prev = cross2(
                &u,
                &[-proj[prev][0] / norms[prev], -proj[prev][1] / norms[prev]],
            );
            let side_next = cross2(
                &u,
                &[proj[next][0] / norms[next], proj[next][1] / norms[next]],
            );
            if side_prev.abs() < eps || side_next.abs() < eps {
                degenerate = true;
                continue;
            }
            if side_prev * side_next < 0.0 {
                type_i += 1;
            }
        }

        ProjectionClassification {
            type_i,
            type_ii,
            type_iii,
            d_a: None,
            d_b: None,
            d_c: None,
            degenerate,
        }
    }

    /// Corner classification of the projected tantrix: per tantrix arc, the
    /// projected turn direction, and per vertex, whether the left angle
    /// between the projected arcs is below or above pi. A corner where the
    /// angle sign disagrees with the adjacent turn directions marks a
    /// crossing of the matching Darboux arc.
    fn classify_tantrix_corners(
        &self,
        v: &UnitVector,
    ) -> Result<(usize, usize, usize, bool), MapsError> {
        if !self.is_regular_projection(v) {
            return Err(MapsError::NonRegularDirection);
        }
        let n = self.n();
        let eps = self.eps();
        let vv = v.as_vec3();
        let tantrix = self.ind.tantrix();

        // Turn sign of the projected arc i, from the projected second
        // derivative at the arc midpoint.
        let mut turn = Vec::with_capacity(n);
        // Left-angle sign at vertex i from the projected corner tangents.
        let mut angle = Vec::with_capacity(n);
        let mut degenerate = false;
        for i in 0..n {
            let arc = tantrix.arc(i);
            let pole = arc.pole().as_vec3();
            let m = arc.point_at(arc.length() / 2.0).as_vec3();
            let xp = pole.cross(&m);
            let xpp = pole.cross(&xp);
            let turn_val = vv.dot(&xp.cross(&xpp));
            if turn_val.abs() < eps {
                degenerate = true;
            }
            turn.push(turn_val);

            let prev = (i + n - 1) % n;
            let t_i = self.ind.tangent(i).as_vec3();
            let incoming = self.ind.binormal(prev).as_vec3().cross(&t_i);
            let outgoing = self.ind.binormal(i).as_vec3().cross(&t_i);
            let angle_val = vv.dot(&incoming.cross(&outgoing));
            if angle_val.abs() < eps {
                degenerate = true;
            }
            angle.push(angle_val);
        }

        let mut d_a = 0;
        let mut d_b = 0;
        let mut d_c = 0;
        for i in 0..n {
            let next = (i + 1) % n;
            let corner_event = angle[i] * turn[i] < 0.0;
            let arc_end_event = turn[i] * angle[next] < 0.0;
            match (corner_event, arc_end_event) {
                (true, true) => d_c += 1,
                (true, false) => d_b += 1,
                (false, true) => d_a += 1,
                (false, false) => {}
            }
        }
        Ok((d_a, d_b, d_c, degenerate))
    }
}

/// One direction's record in a map sample report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub v: [f64; 3],
    pub direct: Option<usize>,
    pub indicatrix: Option<usize>,
    pub degenerate: bool,
}

/// Evaluation of one map over a direction set, with per-direction
/// diagnostics and aggregates over the non-degenerate directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSampleReport {
    pub map: MapKind,
    pub samples: Vec<SampleRecord>,
    pub min: Option<usize>,
    pub max: Option<usize>,
    /// (count, frequency) pairs over non-degenerate directions, ascending.
    pub histogram: Vec<(usize, usize)>,
    pub degenerate_count: usize,
    pub disagreements: usize,
}

/// Evaluates `kind` at every direction by both methods and aggregates.
/// Deterministic for a fixed direction list.
pub fn sample_map(
    knot: &PolygonalKnot,
    kind: MapKind,
    directions: &[UnitVector],
    tol: Tolerances,
) -> Result<MapSampleReport, MapsError> {
    let eval = MapEvaluator::new(knot, tol)?;
    let samples: Vec<SampleRecord> = directions.iter().map(|v| eval.evaluate(kind, v)).collect();

    let mut histogram = std::collections::BTreeMap::new();
    let mut min = None;
    let mut max = None;
    let mut degenerate_count = 0;
    let mut disagreements = 0;
    for s in &samples {
        if s.degenerate {
            degenerate_count += 1;
            continue;
        }
        if s.direct != s.indicatrix {
            disagreements += 1;
        }
        if let Some(c) = s.direct {
            *histogram.entry(c).or_insert(0usize) += 1;
            min = Some(min.map_or(c, |m: usize| m.min(c)));
            max = Some(max.map_or(c, |m: usize| m.max(c)));
        }
    }

    Ok(MapSampleReport {
        map: kind,
        samples,
        min,
        max,
        histogram: histogram.into_iter().collect(),
        degenerate_count,
        disagreements,
    })
}

/// Free-standing single-direction evaluators; each validates the knot.
/// For sweeps construct a [`MapEvaluator`] once instead.
pub fn bridge_direct(k: &PolygonalKnot, v: &UnitVector) -> Result<Eval, MapsError> {
    Ok(MapEvaluator::new(k, Tolerances::default())?.bridge_direct(v))
}

pub fn bridge_via_tantrix(k: &PolygonalKnot, v: &UnitVector) -> Result<Eval, MapsError> {
    Ok(MapEvaluator::new(k, Tolerances::default())?.bridge_via_tantrix(v))
}

pub fn inflection_direct(k: &PolygonalKnot, v: &UnitVector) -> Result<Eval, MapsError> {
    Ok(MapEvaluator::new(k, Tolerances::default())?.inflection_direct(v))
}

pub fn inflection_via_binotrix(k: &PolygonalKnot, v: &UnitVector) -> Result<Eval, MapsError> {
    Ok(MapEvaluator::new(k, Tolerances::default())?.inflection_via_binotrix(v))
}

pub fn tantrix_bridge_direct(k: &PolygonalKnot, v: &UnitVector) -> Result<Eval, MapsError> {
    Ok(MapEvaluator::new(k, Tolerances::default())?.tantrix_bridge_direct(v))
}

pub fn tantrix_bridge_via_notrix(k: &PolygonalKnot, v: &UnitVector) -> Result<Eval, MapsError> {
    Ok(MapEvaluator::new(k, Tolerances::default())?.tantrix_bridge_via_notrix(v))
}

pub fn tantrix_inflection_direct(k: &PolygonalKnot, v: &UnitVector) -> Result<Eval, MapsError> {
    MapEvaluator::new(k, Tolerances::default())?.tantrix_inflection_direct(v)
}

pub fn tantrix_inflection_via_darboux(
    k: &PolygonalKnot,
    v: &UnitVector,
) -> Result<Eval, MapsError> {
    MapEvaluator::new(k, Tolerances::default())?.tantrix_inflection_via_darboux(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{fibonacci_sphere, random_unit_vectors};
    use crate::knot::{fixture_quadrilateral, hexagonal_trefoil, random_knot};

    fn uv(x: f64, y: f64, z: f64) -> UnitVector {
        UnitVector::from_coords(x, y, z).unwrap()
    }

    #[test]
    fn bridge_count_on_fixture_by_hand() {
        // Heights of Q along normalize(1,2,3): 0, 1, 3, 5 (up to 1/sqrt(14));
        // one minimum at X0, one maximum at X3.
        let k = fixture_quadrilateral();
        let v = uv(1.0, 2.0, 3.0);
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        let direct = eval.bridge_direct(&v);
        let via = eval.bridge_via_tantrix(&v);
        assert!(!direct.degenerate);
        assert_eq!(direct.count, 2);
        assert_eq!(via.count, 2);
    }

    #[test]
    fn bridge_count_is_even_and_at_least_two_generic() {
        let k = random_knot(9, 4).unwrap();
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        for v in random_unit_vectors(77, 50) {
            let e = eval.bridge_direct(&v);
            if !e.degenerate {
                assert!(e.count >= 2);
                assert_eq!(e.count % 2, 0);
            }
        }
    }

    #[test]
    fn tantrix_containing_circle_counts_once() {
        // A planar-ish probe: use the tantrix of Q and a pole equal to a
        // binotrix vertex makes one tantrix arc lie in the circle.
        let k = fixture_quadrilateral();
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        let pole = eval.indicatrices().binormal(1);
        let count = eval
            .indicatrices()
            .tantrix()
            .circle_count(&GreatCircle::new(pole), EPS_ON_CIRCLE);
        assert_eq!(count.interval, 1);
    }

    #[test]
    fn lemma_agreement_on_random_knots() {
        for seed in 0..8 {
            let k = random_knot(6 + (seed as usize % 6), seed).unwrap();
            let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
            for v in random_unit_vectors(1000 + seed, 40) {
                let pairs = [
                    (eval.bridge_direct(&v), eval.bridge_via_tantrix(&v)),
                    (eval.inflection_direct(&v), eval.inflection_via_binotrix(&v)),
                    (
                        eval.tantrix_bridge_direct(&v),
                        eval.tantrix_bridge_via_notrix(&v),
                    ),
                ];
                for (idx, (d, i)) in pairs.iter().enumerate() {
                    if !d.degenerate && !i.degenerate {
                        assert_eq!(d.count, i.count, "map {idx} seed {seed}");
                    }
                }
                if let (Ok(d), Ok(i)) = (
                    eval.tantrix_inflection_direct(&v),
                    eval.tantrix_inflection_via_darboux(&v),
                ) {
                    if !d.degenerate && !i.degenerate {
                        assert_eq!(d.count, i.count, "tinflection seed {seed}");
                    }
                }
            }
        }
    }

    #[test]
    fn type_iii_stick_when_edge_parallel_to_direction() {
        let k = fixture_quadrilateral();
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        // Direction along edge X0->X1.
        let v = eval.indicatrices().tangent(1);
        let c = eval.classify_inflection_sticks(&v);
        assert_eq!(c.type_iii, 1);
        assert!(c.degenerate);
        // Both adjacent binotrix vertices lie on the circle.
        let b = eval.indicatrices().binotrix();
        let count = b.circle_count(&GreatCircle::new(v), EPS_ON_CIRCLE);
        assert!(count.on_circle_vertices >= 2);
        // Totals still agree under the interval convention.
        assert_eq!(
            eval.inflection_direct(&v).count,
            eval.inflection_via_binotrix(&v).count
        );
    }

    #[test]
    fn type_ii_stick_when_binotrix_vertex_on_circle() {
        let k = fixture_quadrilateral();
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        // Pick v orthogonal to b[1] but to no other binormal or tangent:
        // v = unit(b1 x r) for a generic r.
        let b1 = eval.indicatrices().binormal(1).as_vec3();
        let v = UnitVector::normalize(b1.cross(&Vec3::new(0.3, 0.4, 0.8))).unwrap();
        let c = eval.classify_inflection_sticks(&v);
        assert_eq!(c.type_ii, 1, "{c:?}");
        assert_eq!(c.type_iii, 0);
        assert_eq!(
            eval.inflection_direct(&v).count,
            eval.inflection_via_binotrix(&v).count
        );
    }

    #[test]
    fn zig_zag_has_a_type_i_stick() {
        // Projected along z, the middle edge (1,1) -> (2,0) of this zig-zag
        // has its neighbors' far endpoints on opposite sides of its line;
        // small z offsets keep the knot in general position.
        let k = PolygonalKnot::from_coords(vec![
            [0.0, 0.0, 0.10],
            [1.0, 1.0, -0.05],
            [2.0, 0.0, 0.12],
            [3.0, 1.0, -0.07],
            [1.5, 3.0, 0.05],
        ])
        .unwrap();
        assert!(k.validate().ok, "{}", k.validate());
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        let v = uv(0.0, 0.0, 1.0);
        let c = eval.classify_inflection_sticks(&v);
        assert!(c.type_i >= 1, "{c:?}");
        assert_eq!(c.type_ii + c.type_iii, 0);
        assert_eq!(
            eval.inflection_direct(&v).count,
            eval.inflection_via_binotrix(&v).count
        );
    }

    #[test]
    fn degenerate_fraction_is_small_under_random_rotations() {
        for (i, k) in [fixture_quadrilateral(), hexagonal_trefoil()]
            .iter()
            .enumerate()
        {
            let rot = nalgebra::Rotation3::from_euler_angles(
                0.31 + i as f64,
                -0.77 + 0.3 * i as f64,
                1.91 - 0.5 * i as f64,
            );
            let rotated =
                PolygonalKnot::new(k.vertices().iter().map(|p| rot * p).collect()).unwrap();
            let dirs = random_unit_vectors(97 + i as u64, 1000);
            for kind in MapKind::ALL {
                let report = sample_map(&rotated, kind, &dirs, Tolerances::default()).unwrap();
                assert!(
                    (report.degenerate_count as f64) < 0.01 * dirs.len() as f64,
                    "{kind:?}: {} degenerate of {}",
                    report.degenerate_count,
                    dirs.len()
                );
            }
        }
    }

    #[test]
    fn interior_arc_extremum_detected() {
        // Arc from unit(1,0,1) to unit(-1,0,1) with v = z: one interior
        // maximum at the top of the arc.
        let arc = crate::geometry::Arc::try_new(uv(1.0, 0.0, 1.0), uv(-1.0, 0.0, 1.0)).unwrap();
        let v = Vec3::new(0.0, 0.0, 1.0);
        let pole = arc.pole().as_vec3();
        let vp = v - pole * v.dot(&pole);
        let x = UnitVector::normalize(vp).unwrap();
        let alpha = arc.angle_of(&x);
        assert!(alpha > 0.0 && alpha < arc.length());
    }

    #[test]
    fn non_regular_direction_is_refused_for_tinflection() {
        let k = fixture_quadrilateral();
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        // A direction orthogonal to a Darboux vertex: v perpendicular to t[1].
        let t1 = eval.indicatrices().tangent(1).as_vec3();
        let v = UnitVector::normalize(t1.cross(&Vec3::new(0.2, 0.9, -0.4))).unwrap();
        assert!(matches!(
            eval.tantrix_inflection_direct(&v),
            Err(MapsError::NonRegularDirection)
        ));
    }

    #[test]
    fn maps_are_antipodally_invariant() {
        let k = random_knot(8, 21).unwrap();
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        for v in random_unit_vectors(5, 30) {
            let nv = v.neg();
            assert_eq!(eval.bridge_direct(&v).count, eval.bridge_direct(&nv).count);
            assert_eq!(
                eval.inflection_direct(&v).count,
                eval.inflection_direct(&nv).count
            );
            assert_eq!(
                eval.tantrix_bridge_direct(&v).count,
                eval.tantrix_bridge_direct(&nv).count
            );
        }
    }

    #[test]
    fn upper_bounds_hold() {
        let k = hexagonal_trefoil();
        let n = k.n();
        let eval = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        for v in fibonacci_sphere(500) {
            assert!(eval.bridge_direct(&v).count <= n);
            assert!(eval.inflection_direct(&v).count <= n);
            assert!(eval.tantrix_bridge_direct(&v).count <= 2 * n);
            if let Ok(e) = eval.tantrix_inflection_direct(&v) {
                assert!(e.count <= 2 * n);
            }
        }
    }

    #[test]
    fn sample_map_is_deterministic() {
        let k = hexagonal_trefoil();
        let dirs = fibonacci_sphere(200);
        let a = sample_map(&k, MapKind::Bridge, &dirs, Tolerances::default()).unwrap();
        let b = sample_map(&k, MapKind::Bridge, &dirs, Tolerances::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.disagreements, 0);
    }

    #[test]
    fn rotation_equivariance() {
        let k = random_knot(7, 13).unwrap();
        let rot = nalgebra::Rotation3::from_euler_angles(1.0, -0.4, 0.8);
        let rk = PolygonalKnot::new(k.vertices().iter().map(|p| rot * p).collect()).unwrap();
        let ev = MapEvaluator::new(&k, Tolerances::default()).unwrap();
        let rev = MapEvaluator::new(&rk, Tolerances::default()).unwrap();
        for v in random_unit_vectors(31, 25) {
            let rv = UnitVector::normalize(rot * v.as_vec3()).unwrap();
            assert_eq!(ev.bridge_direct(&v).count, rev.bridge_direct(&rv).count);
            assert_eq!(
                ev.inflection_direct(&v).count,
                rev.inflection_direct(&rv).count
            );
            assert_eq!(
                ev.tantrix_bridge_direct(&v).count,
                rev.tantrix_bridge_direct(&rv).count
            );
        }
    }
}
