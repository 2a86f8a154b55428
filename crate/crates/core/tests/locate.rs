mod common;

use common::{random_points, rng, unit_box};
use rand::Rng;
use tetquery_core::geometry::{centroid, point_in_tet};
use tetquery_core::io::{generate_box, generate_cube};
use tetquery_core::{BoundingBox, LocatorConfig, Tolerance};

#[test]
fn walk_from_random_start_reaches_the_point() {
    let m = generate_cube(6).unwrap();
    let cfg = LocatorConfig::default();
    let mut rng = rng(11);
    let ids = m.elem_ids().to_vec();
    let pts = random_points(&mut rng, &unit_box(), 1000);
    let mut reached = 0;
    for p in pts {
        let start = ids[rng.random_range(0..ids.len())];
        let r = m.traverse(start, p, &cfg).unwrap();
        if r.is_found() {
            reached += 1;
            assert!(point_in_tet(&m.corners(r.elem_id).unwrap(), p, cfg.tolerance).unwrap());
        }
    }
    // the box is convex, so the walk never leaves it
    assert_eq!(reached, 1000);
}

#[test]
fn locate_agrees_with_scan() {
    let m = generate_cube(5).unwrap();
    let cfg = LocatorConfig::default();
    let tol = Tolerance::default();
    let mut rng = rng(5);
    let mut pts = random_points(&mut rng, &unit_box(), 10_000);
    // a few exterior points too
    pts.extend([[1.5, 0.5, 0.5], [-1e-3, 0.2, 0.2], [0.5, 0.5, 1.0 + 1e-9]]);
    let batch = m.locate_batch(&pts, &cfg).unwrap();
    for (p, r) in pts.iter().zip(&batch.results) {
        let scan = m.locate_brute_force(*p, tol).unwrap();
        if r.is_found() {
            assert!(point_in_tet(&m.corners(r.elem_id).unwrap(), *p, tol).unwrap());
        } else {
            assert_eq!(scan, None, "{p:?}");
        }
        assert_eq!(r.is_found(), scan.is_some());
    }
}

#[test]
fn walks_rarely_need_the_scan() {
    let m = generate_cube(8).unwrap();
    let cfg = LocatorConfig {
        fallback_enabled: false,
        ..Default::default()
    };
    let pts = random_points(&mut rng(2), &unit_box(), 5000);
    let batch = m.locate_batch(&pts, &cfg).unwrap();
    let found = batch.results.iter().filter(|r| r.is_found()).count();
    assert_eq!(found, pts.len());
}

#[test]
fn centroids_locate_to_their_element() {
    let m = generate_box(
        3,
        2,
        4,
        BoundingBox {
            min: [-2.0, 0.0, 1.0],
            max: [1.0, 0.5, 9.0],
        },
    )
    .unwrap();
    let cfg = LocatorConfig::default();
    for &e in m.elem_ids() {
        let c = centroid(&m.corners(e).unwrap());
        assert_eq!(m.locate(c, &cfg).unwrap().elem_id, e);
    }
}

#[test]
fn batch_is_order_preserving_and_thread_independent() {
    let m = generate_cube(4).unwrap();
    let cfg = LocatorConfig::default();
    let pts = random_points(&mut rng(8), &unit_box(), 2000);
    let one = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap();
    let a = one.install(|| m.locate_batch(&pts, &cfg)).unwrap();
    let b = many.install(|| m.locate_batch(&pts, &cfg)).unwrap();
    assert_eq!(a, b);
    let serial: Vec<_> = pts.iter().map(|&p| m.locate(p, &cfg).unwrap()).collect();
    assert_eq!(a.results, serial);
}

#[test]
fn bad_config_is_rejected() {
    let m = generate_cube(1).unwrap();
    let cfg = LocatorConfig {
        candidate_fanout: 0,
        ..Default::default()
    };
    assert!(m.locate([0.5; 3], &cfg).is_err());
    let cfg = LocatorConfig {
        max_steps: Some(0),
        ..Default::default()
    };
    assert!(m.locate([0.5; 3], &cfg).is_err());
}
