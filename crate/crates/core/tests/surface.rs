mod common;

use std::collections::HashMap;

use tetquery_core::io::generate_cube;
use tetquery_core::surface::{extract_oriented, extract_unoriented, face_tally, femlib_face};
use tetquery_core::TetQuad;

#[test]
fn box_surface_counts_and_multiplicity() {
    for n in 1..=4usize {
        let m = generate_cube(n).unwrap();
        let tris = extract_unoriented(&m).unwrap();
        assert_eq!(tris.len(), 12 * n * n);
        let ids: Vec<u32> = tris.iter().map(|t| t.tri_id).collect();
        assert_eq!(ids, (1..=tris.len() as u32).collect::<Vec<_>>());
        assert!(tris.iter().all(|t| t.a < t.b && t.b < t.c));
        let tally = face_tally(&m);
        assert!(tally.values().all(|&c| c == 1 || c == 2));
        assert_eq!(
            tally.values().map(|&c| c as usize).sum::<usize>(),
            4 * 6 * n * n * n
        );
    }
}

#[test]
fn oriented_surface_is_edge_coherent() {
    for n in 1..=4 {
        let m = generate_cube(n).unwrap();
        let tris = extract_oriented(&m).unwrap();
        assert_eq!(tris.len(), 12 * n * n);
        let mut directed: HashMap<(i32, i32), u32> = HashMap::new();
        for t in &tris {
            for k in 0..3 {
                *directed.entry((t.v[k], t.v[(k + 1) % 3])).or_default() += 1;
            }
        }
        for (&(a, b), &count) in &directed {
            assert_eq!(count, 1, "edge {a}->{b} repeated");
            assert_eq!(directed.get(&(b, a)), Some(&1), "edge {a}->{b} has no twin");
        }
    }
}

#[test]
fn oriented_normals_agree_with_the_face_table() {
    // every oriented triangle is the FemLib face of the element it came from
    let m = generate_cube(2).unwrap();
    for t in extract_oriented(&m).unwrap() {
        let q = m.quad(t.elem_id).unwrap();
        assert_eq!(femlib_face(&q, t.face_rank), t.v);
    }
}

#[test]
fn worked_face_example() {
    let q = TetQuad::new(1, [12, 4711, 841, 3]);
    assert_eq!(femlib_face(&q, 2), [841, 3, 12]);
}
