//! The four spherical indicatrices of a stick knot and its discrete
//! curvature/torsion data.
//!
//! # Index conventions
//!
//! All sequences are cyclic, 0-based, for a knot with vertices `X[0..n]`:
//!
//! | quantity            | index `i` means                                  | formula                                   |
//! |---------------------|--------------------------------------------------|-------------------------------------------|
//! | tangent `t[i]`      | direction of the edge ending at `X[i]`           | `unit(X[i] - X[i-1])`                      |
//! | binormal `b[i]`     | osculating plane normal at vertex `X[i]`         | `unit(t[i] x t[i+1])`                      |
//! | curvature `theta[i]`| turning angle at vertex `X[i]`                   | `angle(t[i], t[i+1])`                      |
//! | torsion `tau[i]`    | signed torsion of the edge ending at `X[i]`      | see below                                  |
//! | tantrix vertex `i`  | `t[i]`; arc `i` joins `t[i]` to `t[i+1]`, length `theta[i]` | |
//! | binotrix vertex `i` | `b[i]`; arc `i` joins `b[i]` to `b[i+1]`, length `abs(tau[i+1])` | |
//! | notrix vertex `2i`  | `t[i] x b[i]`                                    | |
//! | notrix vertex `2i+1`| `t[i+1] x b[i]`                                  | |
//! | darboux vertex `2i` | `b[i]`                                           | |
//! | darboux vertex `2i+1` | `sign(tau[i+1]) * t[i+1]`                      | |
//!
//! The torsion `tau[i]` lies in `(-pi, pi)`, is positive exactly when
//! `(t[i-1] x t[i]) . t[i+1] > 0`, and its magnitude is the angle between the
//! adjacent osculating-plane normals `b[i-1]` and `b[i]`, so the binotrix arc
//! ending at vertex `i` has length `abs(tau[i])`. It is derived from the
//! projected edge angle (see [`signed_torsion_angle`]) as its complement:
//! the projected angle `phi` and the torsion satisfy
//! `tau = sign(phi) * (pi - abs(phi))`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{
    signed_torsion_angle, CoOrientation, GeometryError, SphericalPolygon, UnitVector, Vec3,
    EPS_ANGLE,
};
use crate::knot::{PolygonalKnot, ValidationReport};

#[derive(Debug, Error)]
pub enum IndicatrixError {
    #[error("knot fails general-position validation: {0}")]
    Validation(ValidationReport),
    #[error("zero torsion at edge {index} (adjacent vertex window is flat)")]
    ZeroTorsionEdge { index: usize },
    #[error("torsion magnitude at edge {index} is within tolerance of pi")]
    BoundaryTorsion { index: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Per-vertex curvature angles and per-edge signed torsion angles, with the
/// length identities: total curvature equals the tantrix length and total
/// absolute torsion equals the binotrix length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrenetData {
    pub theta: Vec<f64>,
    pub tau: Vec<f64>,
    pub total_curvature: f64,
    pub total_absolute_torsion: f64,
}

/// The shared frame data behind all four indicatrices of one knot.
/// Construction validates the knot once; everything else is O(n).
#[derive(Debug, Clone)]
pub struct Indicatrices {
    t: Vec<UnitVector>,
    b: Vec<UnitVector>,
    b_raw: Vec<Vec3>,
    theta: Vec<f64>,
    tau: Vec<f64>,
}

impl Indicatrices {
    pub fn new(knot: &PolygonalKnot) -> Result<Self, IndicatrixError> {
        let report = knot.validate();
        if !report.ok {
            return Err(IndicatrixError::Validation(report));
        }
        let n = knot.n();
        let t: Vec<UnitVector> = (0..n)
            .map(|i| UnitVector::normalize(knot.tangent(i)))
            .collect::<Result<_, _>>()?;
        let b_raw: Vec<Vec3> = (0..n).map(|i| t[i].cross(&t[(i + 1) % n])).collect();
        let b: Vec<UnitVector> = b_raw
            .iter()
            .map(|v| UnitVector::normalize(*v))
            .collect::<Result<_, _>>()?;
        let theta: Vec<f64> = (0..n).map(|i| t[i].angle_to(&t[(i + 1) % n])).collect();

        let mut tau = Vec::with_capacity(n);
        for i in 0..n {
            let prev = t[(i + n - 1) % n].as_vec3();
            let axis = t[i].as_vec3();
            let next = t[(i + 1) % n].as_vec3();
            let phi = match signed_torsion_angle(prev, axis, next) {
                Ok(phi) => phi,
                Err(GeometryError::BoundaryTorsion { .. }) => {
                    return Err(IndicatrixError::ZeroTorsionEdge { index: i })
                }
                Err(e) => return Err(e.into()),
            };
            if phi.abs() < EPS_ANGLE {
                return Err(IndicatrixError::BoundaryTorsion { index: i });
            }
            tau.push(phi.signum() * (std::f64::consts::PI - phi.abs()));
        }

        Ok(Indicatrices {
            t,
            b,
            b_raw,
            theta,
            tau,
        })
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn tangent(&self, i: usize) -> UnitVector {
        self.t[i % self.t.len()]
    }

    pub fn binormal(&self, i: usize) -> UnitVector {
        self.b[i % self.b.len()]
    }

    /// Unnormalized binormal `t[i] x t[i+1]`, kept for exact sign oracles.
    pub fn binormal_raw(&self, i: usize) -> Vec3 {
        self.b_raw[i % self.b_raw.len()]
    }

    pub fn curvature(&self, i: usize) -> f64 {
        self.theta[i % self.theta.len()]
    }

    pub fn torsion(&self, i: usize) -> f64 {
        self.tau[i % self.tau.len()]
    }

    pub fn torsion_sign(&self, i: usize) -> f64 {
        self.torsion(i).signum()
    }

    /// Tangent indicatrix: `n` vertices, left co-orientation.
    pub fn tantrix(&self) -> SphericalPolygon {
        SphericalPolygon::new(self.t.clone(), CoOrientation::Left)
            .expect("general position guarantees valid tantrix arcs")
    }

    /// Binormal indicatrix: `n` vertices; equals the dual of the tantrix,
    /// including the inherited per-arc co-orientation.
    pub fn binotrix(&self) -> SphericalPolygon {
        let n = self.n();
        let co_poles = (0..n).map(|i| self.t[(i + 1) % n].neg()).collect();
        SphericalPolygon::new(self.b.clone(), CoOrientation::Left)
            .expect("general position guarantees valid binotrix arcs")
            .with_co_poles(co_poles)
    }

    /// Normal indicatrix: `2n` vertices interleaving `t[i] x b[i]` and
    /// `t[i+1] x b[i]`; left co-orientation by convention.
    pub fn notrix(&self) -> SphericalPolygon {
        let n = self.n();
        let mut vertices = Vec::with_capacity(2 * n);
        for i in 0..n {
            let ti = self.t[i];
            let ti1 = self.t[(i + 1) % n];
            let bi = self.b[i];
            vertices
                .push(UnitVector::normalize(ti.cross(&bi)).expect("orthogonal unit cross is unit"));
            vertices.push(
                UnitVector::normalize(ti1.cross(&bi)).expect("orthogonal unit cross is unit"),
            );
        }
        SphericalPolygon::new(vertices, CoOrientation::Left)
            .expect("general position guarantees valid notrix arcs")
    }

    /// Darboux indicatrix: `2n` vertices alternating binormals and signed
    /// tangents; equals the dual of the notrix, including the inherited
    /// per-arc co-orientation. Every arc has length pi/2.
    pub fn darboux(&self) -> Result<SphericalPolygon, IndicatrixError> {
        let n = self.n();
        for i in 0..n {
            if self.tau[i].abs() <= EPS_ANGLE {
                return Err(IndicatrixError::ZeroTorsionEdge { index: i });
            }
        }
        let mut vertices = Vec::with_capacity(2 * n);
        for i in 0..n {
            let sign = self.torsion_sign(i + 1);
            vertices.push(self.b[i]);
            let ti1 = self.t[(i + 1) % n];
            vertices.push(if sign > 0.0 { ti1 } else { ti1.neg() });
        }
        let notrix = self.notrix();
        let co_poles = (0..2 * n).map(|j| notrix.vertex(j + 1).neg()).collect();
        Ok(SphericalPolygon::new(vertices, CoOrientation::Left)
            .expect("darboux arcs are orthogonal pairs")
            .with_co_poles(co_poles))
    }

    pub fn frenet_data(&self) -> FrenetData {
        FrenetData {
            theta: self.theta.clone(),
            tau: self.tau.clone(),
            total_curvature: self.theta.iter().sum(),
            total_absolute_torsion: self.tau.iter().map(|t| t.abs()).sum(),
        }
    }
}

/// Tangent indicatrix of a validated knot.
pub fn tantrix(k: &PolygonalKnot) -> Result<SphericalPolygon, IndicatrixError> {
    Ok(Indicatrices::new(k)?.tantrix())
}

/// Binormal indicatrix of a validated knot.
pub fn binotrix(k: &PolygonalKnot) -> Result<SphericalPolygon, IndicatrixError> {
    Ok(Indicatrices::new(k)?.binotrix())
}

/// Unnormalized binotrix vertices `t[i] x t[i+1]`.
pub fn binotrix_raw(k: &PolygonalKnot) -> Result<Vec<Vec3>, IndicatrixError> {
    let ind = Indicatrices::new(k)?;
    Ok((0..ind.n()).map(|i| ind.binormal_raw(i)).collect())
}

/// Normal indicatrix of a validated knot.
pub fn notrix(k: &PolygonalKnot) -> Result<SphericalPolygon, IndicatrixError> {
    Ok(Indicatrices::new(k)?.notrix())
}

/// Darboux indicatrix of a validated knot.
pub fn darboux(k: &PolygonalKnot) -> Result<SphericalPolygon, IndicatrixError> {
    Indicatrices::new(k)?.darboux()
}

/// Curvature and torsion angle data of a validated knot.
pub fn frenet_data(k: &PolygonalKnot) -> Result<FrenetData, IndicatrixError> {
    Ok(Indicatrices::new(k)?.frenet_data())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::{fixture_quadrilateral, random_knot, torus_knot_polygon};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn uv(x: f64, y: f64, z: f64) -> UnitVector {
        UnitVector::from_coords(x, y, z).unwrap()
    }

    #[test]
    fn tantrix_of_fixture_quadrilateral() {
        let t = tantrix(&fixture_quadrilateral()).unwrap();
        assert_eq!(t.len(), 4);
        // Vertex i is the direction of the edge ending at X[i]; the edge
        // X0 -> X1 contributes vertex 1.
        assert!(t.vertex(1).approx_eq(&uv(1.0, 0.0, 0.0), 1e-15));
        assert!(t.vertex(2).approx_eq(&uv(0.0, 1.0, 0.0), 1e-15));
        assert!(t.vertex(3).approx_eq(&uv(-1.0, 0.0, 1.0), 1e-15));
        assert!(t.vertex(0).approx_eq(&uv(0.0, -1.0, -1.0), 1e-15));
    }

    #[test]
    fn binotrix_vertex_of_fixture() {
        let b = binotrix(&fixture_quadrilateral()).unwrap();
        assert!(b.vertex(1).approx_eq(&uv(0.0, 0.0, 1.0), 1e-15));
    }

    #[test]
    fn notrix_vertex_of_fixture() {
        let nx = notrix(&fixture_quadrilateral()).unwrap();
        assert_eq!(nx.len(), 8);
        // N[2] = t[1] x b[1] = (1,0,0) x (0,0,1) = (0,-1,0).
        assert!(nx.vertex(2).approx_eq(&uv(0.0, -1.0, 0.0), 1e-15));
    }

    #[test]
    fn vertex_counts() {
        for seed in 0..5 {
            let k = random_knot(7, seed).unwrap();
            let ind = Indicatrices::new(&k).unwrap();
            assert_eq!(ind.tantrix().len(), 7);
            assert_eq!(ind.binotrix().len(), 7);
            assert_eq!(ind.notrix().len(), 14);
            assert_eq!(ind.darboux().unwrap().len(), 14);
        }
    }

    #[test]
    fn curvature_at_first_corner_of_fixture() {
        let fd = frenet_data(&fixture_quadrilateral()).unwrap();
        // Edges (1,0,0) then (0,1,0) meet at X1.
        assert!((fd.theta[1] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn tantrix_length_equals_total_curvature() {
        for seed in 0..100 {
            let k = random_knot(6 + (seed as usize % 5), seed).unwrap();
            let ind = Indicatrices::new(&k).unwrap();
            let fd = ind.frenet_data();
            assert!((ind.tantrix().total_length() - fd.total_curvature).abs() < 1e-9);
        }
    }

    #[test]
    fn binotrix_length_equals_total_absolute_torsion() {
        for seed in 0..100 {
            let k = random_knot(6 + (seed as usize % 5), seed).unwrap();
            let ind = Indicatrices::new(&k).unwrap();
            let fd = ind.frenet_data();
            assert!(
                (ind.binotrix().total_length() - fd.total_absolute_torsion).abs() < 1e-9,
                "seed {seed}: binotrix {} vs torsion sum {}",
                ind.binotrix().total_length(),
                fd.total_absolute_torsion
            );
        }
    }

    #[test]
    fn torsion_sign_matches_cross_product_oracle() {
        for seed in 0..100 {
            let k = random_knot(8, seed).unwrap();
            let ind = Indicatrices::new(&k).unwrap();
            for i in 0..ind.n() {
                let oracle = ind
                    .binormal_raw((i + ind.n() - 1) % ind.n())
                    .dot(&ind.tangent(i + 1).as_vec3());
                assert_eq!(
                    ind.torsion(i).signum(),
                    oracle.signum(),
                    "seed {seed} i {i}"
                );
            }
        }
    }

    #[test]
    fn torus_trefoil_curvature_exceeds_4pi() {
        let k = torus_knot_polygon(2, 3, 60, 2.0, 1.0).unwrap();
        let fd = frenet_data(&k).unwrap();
        assert!(fd.total_curvature > 4.0 * PI);
    }

    #[test]
    fn darboux_arcs_are_quarter_circles_and_total_n_pi() {
        for k in [fixture_quadrilateral(), crate::knot::hexagonal_trefoil()] {
            let d = darboux(&k).unwrap();
            for arc in d.arcs() {
                assert!((arc.length() - FRAC_PI_2).abs() < 1e-12);
            }
            assert!((d.total_length() - k.n() as f64 * PI).abs() < 1e-9);
        }
    }

    #[test]
    fn binormals_are_orthogonal_to_adjacent_tangents() {
        let k = random_knot(9, 3).unwrap();
        let ind = Indicatrices::new(&k).unwrap();
        for i in 0..ind.n() {
            assert!(ind.binormal(i).dot(&ind.tangent(i)).abs() < 1e-12);
            assert!(ind.binormal(i).dot(&ind.tangent(i + 1)).abs() < 1e-12);
        }
    }

    #[test]
    fn rotation_rotates_indicatrices_translation_leaves_them() {
        let k = fixture_quadrilateral();
        let rot = nalgebra::Rotation3::from_euler_angles(0.4, 1.3, -0.7);
        let moved = PolygonalKnot::new(
            k.vertices()
                .iter()
                .map(|v| rot * (v * 2.5) + Vec3::new(4.0, 5.0, -6.0))
                .collect(),
        )
        .unwrap();
        let t0 = tantrix(&k).unwrap();
        let t1 = tantrix(&moved).unwrap();
        for i in 0..t0.len() {
            let rotated = rot * t0.vertex(i).as_vec3();
            assert!((rotated - t1.vertex(i).as_vec3()).norm() < 1e-12);
        }
    }

    #[test]
    fn reversal_sends_tantrix_to_its_antipode_as_a_set() {
        let k = random_knot(8, 11).unwrap();
        let t = tantrix(&k).unwrap();
        let t_rev = tantrix(&k.reversed()).unwrap();
        let anti: Vec<_> = t.vertices().iter().map(UnitVector::neg).collect();
        for v in t_rev.vertices() {
            assert!(
                anti.iter().any(|w| w.approx_eq(v, 1e-12)),
                "reversed tantrix vertex not found in antipodal set"
            );
        }
        let fd = frenet_data(&k).unwrap();
        let fd_rev = frenet_data(&k.reversed()).unwrap();
        assert!((fd.total_curvature - fd_rev.total_curvature).abs() < 1e-9);
        assert!((fd.total_absolute_torsion - fd_rev.total_absolute_torsion).abs() < 1e-9);
    }

    #[test]
    fn invalid_knot_is_rejected() {
        let square = PolygonalKnot::from_coords(vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 1.0, 0.0],
            [0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert!(matches!(
            tantrix(&square),
            Err(IndicatrixError::Validation(_))
        ));
    }
}
