//! Structural audits on full graphs for small q.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rpg_core::audit::*;
use rpg_core::gf::Field;
use rpg_core::graph::{Analysis, PowerGraph};
use rpg_core::mat::JordanType;
use rpg_core::pgl::{GraphKind, GroupSpec};

fn pgl(q: u32) -> Analysis {
    Analysis::build(q, GraphKind::Pgl).unwrap()
}

fn assert_ok(o: &CheckOutcome) {
    assert!(o.passed(), "{o}");
    assert!(o.checked > 0, "{o}");
}

#[test]
fn four_obstructions_and_membership() {
    let an = pgl(4);
    let checks = obstruction_checks(&an).unwrap();
    let names: Vec<_> = checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["diagonalizable obstruction", "irreducible obstruction"]);
    checks.iter().for_each(assert_ok);
    assert_ok(&pivot_component_membership(&an).unwrap());
}

#[test]
fn obstruction_check_catches_a_wrong_size() {
    let mut an = pgl(3);
    // Pretend one NPJ component has a third vertex.
    let comp = (0..an.labeling.count()).find(|&c| an.labeling.type_profile[c][JordanType::NPJ.index()] > 0).unwrap();
    an.labeling.sizes[comp] += 1;
    an.labeling.type_profile[comp][JordanType::NPJ.index()] += 1;
    let unipotent = obstruction_checks(&an).unwrap().into_iter().find(|c| c.name == "unipotent obstruction").unwrap();
    assert_eq!(unipotent.violations, 1);
}

#[test]
fn transitions_follow_the_diagrams() {
    for q in [2, 3, 4] {
        let r = transition_audit(&pgl(q)).unwrap();
        assert!(r.outcome.passed(), "q = {q}: {}", r.outcome);
    }
    let r = transition_audit(&pgl(4)).unwrap();
    assert_eq!(r.diagram, TransitionDiagram::EvenMersenne);
    assert!(r.observed.iter().all(|o| o.0 != JordanType::LLL));
}

#[test]
fn sampled_edges_at_four() {
    let an = pgl(4);
    let o = edge_restriction_sample(&an.graph, 10_000, 0).unwrap();
    assert_ok(&o);
    assert_eq!(o.checked, 10_000);
    assert_ok(&edge_soundness_sample(&an.graph, 2_000, 0));
    assert_ok(&eccentricity_invariance(&an.graph, 100, 0).unwrap());
}

#[test]
fn even_coverage_and_prime_power_orders_at_four() {
    let an = pgl(4);
    let o = prime_order_coverage(&an, 3).unwrap();
    assert_ok(&o);
    let f = an.graph.field();
    let all = (0..an.graph.vertex_count() as u32).map(|v| an.graph.matrix(v));
    assert_ok(&mersenne_order_shapes(f, all).unwrap());
}

#[test]
fn prime_power_orders_sampled_at_eight() {
    let f = Field::with_order(8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let sample: Vec<_> = (0..20_000).map(|_| random_invertible(&f, &mut rng)).collect();
    let o = mersenne_order_shapes(&f, sample.into_iter()).unwrap();
    assert_ok(&o);
}

#[test]
fn diagonal_witness_stays_away_from_pivots_at_four() {
    let o = diagonal_witness_pivot_distance(&pgl(4)).unwrap();
    assert_ok(&o);
    // Both matrices lie in two-vertex LLL components.
    assert!(o.detail.contains("no pivot reachable"), "{o}");
}

#[test]
fn shared_plane_pairs_are_far_apart() {
    for q in [3, 4] {
        let o = pivot_jordan_plane_separation(&pgl(q), 5, 0).unwrap();
        assert_ok(&o);
    }
    assert!(pivot_jordan_plane_separation(&pgl(2), 1, 0).is_err());
}

#[test]
fn gl_pairwise_distances_at_four() {
    let g = PowerGraph::build(&GroupSpec::new(4, GraphKind::Gl).unwrap());
    assert_ok(&pivot_pairwise_distance(&g, 8));
    assert_ok(&unipotent_jordan_pivot_distance(&g, 8));
}
