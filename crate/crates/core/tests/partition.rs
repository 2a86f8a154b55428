mod common;

use std::collections::HashMap;

use common::rng;
use rand::seq::SliceRandom;
use tetquery_core::io::generate_cube;
use tetquery_core::partition::{cut_faces, partition};

#[test]
fn sizes_and_monotone_order_for_all_counts() {
    let m = generate_cube(4).unwrap();
    let order: Vec<i32> = m.hcode_index().map(|(_, e)| e).collect();
    for n in 1..=64 {
        let a = partition(&m, n).unwrap();
        let sizes = a.sizes();
        let (lo, hi) = (*sizes.iter().min().unwrap(), *sizes.iter().max().unwrap());
        assert!(hi - lo <= 1 && lo >= 1, "n={n}: {sizes:?}");
        let big = m.tet_count() % n;
        assert!(sizes[..big].iter().all(|&s| s == hi));
        let listed: Vec<i32> = a.entries().iter().map(|(e, _)| *e).collect();
        assert_eq!(listed, order);
        assert!(a.entries().windows(2).all(|w| w[0].1 <= w[1].1));
    }
    assert!(partition(&m, 0).is_err());
    assert!(partition(&m, m.tet_count() + 1).is_err());
}

#[test]
fn hilbert_partitions_cut_fewer_faces_than_random() {
    let m = generate_cube(6).unwrap();
    let n = 8;
    let a = partition(&m, n).unwrap();
    let ordered = cut_faces(&m, &a.as_map()).unwrap();

    let mut ids = m.elem_ids().to_vec();
    ids.shuffle(&mut rng(1));
    let len = ids.len();
    let random: HashMap<i32, u32> = ids
        .iter()
        .enumerate()
        .map(|(i, &e)| (e, (i * n / len) as u32 + 1))
        .collect();
    let shuffled = cut_faces(&m, &random).unwrap();
    println!("cut faces: hilbert {ordered}, random {shuffled}");
    assert!(ordered < shuffled);
}
