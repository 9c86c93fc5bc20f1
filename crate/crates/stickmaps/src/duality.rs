//! Dual spherical polygons, the direct-sum (derivative) construction, and the
//! left-pole polygon that builds map graphs.
//!
//! The dual of a co-oriented polygon has one vertex per arc: the pole of that
//! arc on the co-oriented side. Its own co-orientation is per-arc: the arc of
//! the dual separating the poles of two arcs meeting at vertex `v` lies on
//! the great circle polar to `v` and is co-oriented away from `v`. Dualizing
//! twice therefore lands on the antipodal polygon, with the vertex list
//! rotated by one position because arc `j` of the dual corresponds to vertex
//! `j+1` of the original.

use thiserror::Error;

use crate::geometry::{
    CoOrientation, GeometryError, SphericalPolygon, UnitVector, EPS_ANGLE, EPS_ANTIPODAL, EPS_UNIT,
};

#[derive(Debug, Error)]
pub enum DualityError {
    #[error("arc {index} has length within tolerance of pi; its dual is ill-conditioned")]
    ArcNearPi { index: usize },
    #[error("consecutive dual vertices {index} and {next} coincide or are antipodal")]
    DegenerateDual { index: usize, next: usize },
    #[error("input is not the dual of the base polygon (first mismatch at vertex {index})")]
    DualMismatch { index: usize },
    #[error("vertices {i} and {j} coincide or are antipodal")]
    CoincidentVertices { i: usize, j: usize },
    #[error("the direct sum is defined for left-co-oriented polygons")]
    UnsupportedCoOrientation,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Dual of a co-oriented spherical polygon.
///
/// Vertex `j` of the result is the pole of arc `j` (from vertex `j` to vertex
/// `j+1`) on the co-oriented side; consecutive dual vertices are joined by
/// shorter arcs whose lengths equal the exterior angles of the input. The
/// result carries the inherited per-arc co-orientation `-v[j+1]`.
pub fn dual_spherical_polygon(p: &SphericalPolygon) -> Result<SphericalPolygon, DualityError> {
    let n = p.len();
    for i in 0..n {
        if p.arc(i).length() >= std::f64::consts::PI - EPS_ANGLE {
            return Err(DualityError::ArcNearPi { index: i });
        }
    }
    let vertices: Vec<UnitVector> = (0..n).map(|i| p.co_pole(i)).collect();
    for i in 0..n {
        let j = (i + 1) % n;
        let dot = vertices[i].dot(&vertices[j]);
        if (dot - 1.0).abs() < EPS_ANTIPODAL || (dot + 1.0).abs() < EPS_ANTIPODAL {
            return Err(DualityError::DegenerateDual { index: i, next: j });
        }
    }
    let co_poles = (0..n).map(|j| p.vertex(j + 1).neg()).collect();
    Ok(SphericalPolygon::new(vertices, p.co_orientation())
        .map_err(DualityError::Geometry)?
        .with_co_poles(co_poles))
}

/// Direct sum of a left-co-oriented polygon and its dual: each dual arc is
/// rotated a quarter turn counterclockwise about the original vertex it
/// surrounds, each original arc a quarter turn about the dual vertex below
/// it, and the rotated arcs are chained alternately. The result has twice as
/// many vertices as `p` and its consecutive arcs meet at right angles with
/// alternating turn sense.
pub fn direct_sum(
    p: &SphericalPolygon,
    q: &SphericalPolygon,
) -> Result<SphericalPolygon, DualityError> {
    if p.co_orientation() != CoOrientation::Left {
        return Err(DualityError::UnsupportedCoOrientation);
    }
    let expected = dual_spherical_polygon(p)?;
    if q.len() != expected.len() {
        return Err(DualityError::DualMismatch { index: 0 });
    }
    for i in 0..q.len() {
        if !q.vertex(i).approx_eq(&expected.vertex(i), EPS_UNIT) {
            return Err(DualityError::DualMismatch { index: i });
        }
    }

    let n = p.len();
    let mut vertices = Vec::with_capacity(2 * n);
    for j in 0..n {
        // v[j] x V[j] is V[j] rotated by +pi/2 about v[j], and equally v[j]
        // rotated by -pi/2 about V[j]; the two chained rotations share it.
        vertices.push(
            UnitVector::normalize(p.vertex(j).cross(&q.vertex(j)))
                .map_err(DualityError::Geometry)?,
        );
        vertices.push(
            UnitVector::normalize(p.vertex(j + 1).cross(&q.vertex(j)))
                .map_err(DualityError::Geometry)?,
        );
    }
    let out =
        SphericalPolygon::new(vertices, CoOrientation::Left).map_err(DualityError::Geometry)?;
    debug_assert!(
        (0..out.len()).all(|i| (out.exterior_angle(i) - std::f64::consts::FRAC_PI_2).abs() < 1e-6),
        "direct-sum arcs must meet at right angles"
    );
    Ok(out)
}

/// The polygon of left poles of a directed spherical polygon's arcs: vertex
/// `i` of the result is the point a quarter turn to the left of arc `i`.
/// For a left-co-oriented polygon this is the dual; together with its
/// antipode it forms the graph of the great-circle intersection-count map.
///
/// Construction only needs valid arcs; it errors when adjacent vertices
/// coincide or are antipodal. The stronger hypothesis behind the graph
/// interpretation — no two vertices of `p` coincident or antipodal anywhere
/// — is reported separately by [`coincident_vertex_pairs`]; an indicatrix
/// can violate it (a notrix may contain an exactly antipodal vertex pair)
/// while its pole polygon stays well defined.
pub fn w_polygon(p: &SphericalPolygon) -> Result<SphericalPolygon, DualityError> {
    let n = p.len();
    for i in 0..n {
        let j = (i + 1) % n;
        let dot = p.vertex(i).dot(&p.vertex(j));
        if (dot.abs() - 1.0).abs() < EPS_ANTIPODAL {
            return Err(DualityError::CoincidentVertices { i, j });
        }
    }
    let vertices: Vec<UnitVector> = (0..n).map(|i| p.arc(i).pole()).collect();
    SphericalPolygon::new(vertices, CoOrientation::Left).map_err(DualityError::Geometry)
}

/// Vertex pairs of `p` that coincide or are antipodal within tolerance.
/// When nonempty, circles through one of the flagged vertices also meet the
/// other, so the intersection-count map can change by more than 2 across
/// the corresponding pole-polygon arcs.
pub fn coincident_vertex_pairs(p: &SphericalPolygon) -> Vec<(usize, usize)> {
    let n = p.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let dot = p.vertex(i).dot(&p.vertex(j));
            if (dot.abs() - 1.0).abs() < EPS_ANTIPODAL {
                pairs.push((i, j));
            }
        }
    }
    pairs
}
