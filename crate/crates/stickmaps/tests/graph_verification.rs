//! Cross-module integration: graph construction plus the sampling verifier
//! on the built-in fixtures, and the Monte Carlo length estimator against
//! exact arc-length sums.

use stickmaps::geometry::EPS_ON_CIRCLE;
use stickmaps::graphs::{
    crofton_length, graph_for, verify_graph, GraphArc, GraphCurve, VerifyParams,
};
use stickmaps::knot::{fixture_quadrilateral, hexagonal_trefoil};
use stickmaps::maps::MapKind;
use stickmaps::Indicatrices;

fn small_params(seed: u64) -> VerifyParams {
    let mut p = VerifyParams::new(seed);
    p.constancy_pairs = 3000;
    p.crossing_probes = 400;
    p
}

#[test]
fn all_four_graphs_verify_on_fixture_quadrilateral() {
    let k = fixture_quadrilateral();
    for (i, kind) in MapKind::ALL.into_iter().enumerate() {
        let g = graph_for(&k, kind).unwrap();
        let verdict = verify_graph(&k, kind, &g, &small_params(100 + i as u64)).unwrap();
        assert!(verdict.passed(), "{kind:?}: {verdict:?}");
        assert_eq!(verdict.crossing_failures, 0, "{kind:?}");
        assert!(verdict.constancy_pairs_tested >= 3000, "{kind:?}");
    }
}

#[test]
fn all_four_graphs_verify_on_hexagonal_trefoil() {
    let k = hexagonal_trefoil();
    for (i, kind) in MapKind::ALL.into_iter().enumerate() {
        let g = graph_for(&k, kind).unwrap();
        let verdict = verify_graph(&k, kind, &g, &small_params(200 + i as u64)).unwrap();
        assert!(verdict.passed(), "{kind:?}: {verdict:?}");
    }
}

#[test]
fn crossing_delta_is_exactly_two_for_even_parity_maps() {
    let k = hexagonal_trefoil();
    for kind in [MapKind::Bridge, MapKind::Inflection, MapKind::TantrixBridge] {
        let g = graph_for(&k, kind).unwrap();
        let verdict = verify_graph(&k, kind, &g, &small_params(300)).unwrap();
        assert_eq!(
            verdict.crossing_confirmations, verdict.crossing_probes_tested,
            "{kind:?}: some crossing changed the count by something other than 2"
        );
    }
}

#[test]
fn wrong_curve_fails_as_negative_control() {
    let k = fixture_quadrilateral();
    let ind = Indicatrices::new(&k).unwrap();
    let tantrix = ind.tantrix();
    let mut arcs = Vec::new();
    for (label, poly) in [
        ("tantrix", tantrix.clone()),
        ("anti-tantrix", tantrix.antipode()),
    ] {
        for i in 0..poly.len() {
            let arc = poly.arc(i);
            arcs.push(GraphArc {
                start: arc.start,
                end: arc.end,
                provenance: format!("{label}[{i}]"),
            });
        }
    }
    let wrong = GraphCurve { arcs };
    let verdict = verify_graph(&k, MapKind::Bridge, &wrong, &small_params(400)).unwrap();
    assert!(
        verdict.constancy_violations > 0,
        "negative control produced no constancy violations: {verdict:?}"
    );
}

#[test]
fn crofton_estimates_match_exact_lengths_on_fixtures() {
    for k in [fixture_quadrilateral(), hexagonal_trefoil()] {
        let ind = Indicatrices::new(&k).unwrap();
        let fd = ind.frenet_data();
        for (poly, exact) in [
            (ind.tantrix(), fd.total_curvature),
            (ind.binotrix(), fd.total_absolute_torsion),
        ] {
            let est = crofton_length(&poly, 30_000, 9, EPS_ON_CIRCLE);
            assert!(
                (est.estimate - exact).abs() < 3.0 * est.stderr,
                "estimate {} vs exact {} (stderr {})",
                est.estimate,
                exact,
                est.stderr
            );
        }
    }
}

#[test]
fn graph_json_export_has_provenance() {
    let k = fixture_quadrilateral();
    let g = graph_for(&k, MapKind::Bridge).unwrap();
    let json = serde_json::to_value(&g).unwrap();
    let arcs = json["arcs"].as_array().unwrap();
    assert_eq!(arcs.len(), 8);
    assert!(arcs[0]["provenance"].as_str().unwrap().contains("binotrix"));
    assert!(arcs[0]["start"].as_array().unwrap().len() == 3);
}
