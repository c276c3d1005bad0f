//! Certificates checked against built graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rpg_core::audit::{factorization_suite, random_invertible};
use rpg_core::gf::{Field, FieldElem};
use rpg_core::graph::{Bfs, PowerGraph};
use rpg_core::mat::Mat3;
use rpg_core::pgl::{GraphKind, GroupSpec};
use rpg_core::witness::*;

fn graph(q: u32) -> PowerGraph {
    PowerGraph::build(&GroupSpec::new(q, GraphKind::Pgl).unwrap())
}

#[test]
fn root_certificates_are_graph_paths() {
    for (q, p0) in [(3, 2), (4, 3), (5, 2)] {
        let g = graph(q);
        let f = g.field().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(q as u64);
        let mut done = 0;
        while done < 200 {
            let a = random_invertible(&f, &mut rng);
            if a.is_scalar() || !a.is_decomposable(&f).unwrap() || a.projective_order(&f) % p0 == 0 {
                continue;
            }
            done += 1;
            let cert = p0th_root_pivotize(&a, p0, &f).unwrap();
            assert!(cert.check_algebra(&f).valid, "q = {q}: {a}");
            assert!(verify_certificate(&g, &cert).valid, "q = {q}: {a}");
            assert!(cert.len() <= 3);
        }
    }
}

#[test]
fn halforder_pivots_are_adjacent() {
    let g = graph(5);
    let f = g.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut done = 0;
    while done < 300 {
        let a = random_invertible(&f, &mut rng);
        if a.is_scalar() || !a.is_decomposable(&f).unwrap() || a.projective_order(&f) % 2 != 0 {
            continue;
        }
        done += 1;
        let p = halforder_pivot(&a, &f).unwrap();
        assert_eq!(p.projective_order(&f), 2);
        let (u, v) = (g.id_of(&a).unwrap(), g.id_of(&p).unwrap());
        assert!(u == v || g.are_adjacent(u, v), "{a} -> {p}");
    }
}

#[test]
fn pivot_paths_over_seven() {
    let f = Field::with_order(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for (p0, p1) in [(2, 3), (3, 2)] {
        let x = f.element_of_order(p0).unwrap();
        for _ in 0..100 {
            let a = Mat3::diag(FieldElem::ONE, x, x).conjugate_by(&random_invertible(&f, &mut rng), &f).unwrap();
            let b = Mat3::diag(FieldElem::ONE, x, x).conjugate_by(&random_invertible(&f, &mut rng), &f).unwrap();
            let cert = pivot_path(&a, &b, p0, p1, &f).unwrap();
            assert!(cert.check_algebra(&f).valid);
            assert!(cert.len() <= 5);
            assert_eq!((cert.start(), cert.end()), (a, b));
        }
    }
}

#[test]
fn factorization_over_extension_fields() {
    for q in [4, 8, 9] {
        let o = factorization_suite(q, 300, 1).unwrap();
        assert!(o.passed(), "{o}");
    }
}

#[test]
fn lower_witnesses_meet_main_diameter() {
    for (q, d) in [(3, 11), (4, 13), (5, 12)] {
        let g = graph(q);
        let w = build_lower_witness(q).unwrap();
        let (a, b) = (g.id_of(&w.a).unwrap(), g.id_of(&w.b).unwrap());
        assert_eq!(Bfs::new(g.vertex_count()).distance(&g, a, b), Some(d), "q = {q}");
        assert_eq!(w.lower_bound, d);
    }
}

#[test]
fn random_factorization_parameters_cover_all_b() {
    let f = Field::with_order(7).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let x = random_invertible(&f, &mut rng);
        let b = FieldElem::from_code(rng.gen_range(2..7));
        let t = centralizer_factorization(&x, b, &f).unwrap();
        assert!(t.holds(&x, b, &f));
    }
}
