mod common;

use std::collections::BTreeSet;

use hypdt::arith::{BigInterval, Real};
use hypdt::group::{generator_matrix, relator, vertex_neighbors, word_to_moebius, ElemId, Group};
use hypdt::kernel::{Cx, Moebius};
use hypdt::Domain;
use rand::Rng;

/// Largest entrywise distance from `±identity`.
fn off_identity(m: &Moebius<BigInterval>) -> f64 {
    let s = if m.a.re.mid() > 0.0 { 1.0 } else { -1.0 };
    let one = BigInterval::from_f64(s, 256);
    [(m.a.re.clone() - one).abs().mid(), m.a.im.abs().mid(), m.b.re.abs().mid(), m.b.im.abs().mid()]
        .into_iter()
        .fold(0.0, f64::max)
}

#[test]
fn relators_are_identity() {
    for g in 2..=4 {
        for k in 0..4 * g {
            let m: Moebius<BigInterval> = word_to_moebius(g, &relator(g, k), 256);
            assert!(off_identity(&m) < 1e-30, "g={g} k={k}");
        }
    }
}

#[test]
fn opposite_generators_are_inverse() {
    for g in 2..=4 {
        for j in 0..2 * g {
            let a: Moebius<BigInterval> = generator_matrix(g, j, 256);
            let b: Moebius<BigInterval> = generator_matrix(g, j + 2 * g, 256);
            assert!(off_identity(&a.compose(&b)) < 1e-30);
        }
    }
}

#[test]
fn words_multiply() {
    let m: Moebius<f64> = word_to_moebius(2, &[0, 5, 2, 7], 53);
    let p = [0, 5, 2, 7]
        .iter()
        .map(|&j| generator_matrix::<f64>(2, j, 53))
        .fold(Moebius::identity(), |acc, x| acc.compose(&x));
    assert!(m.compose(&p.inverse()).identity_error() < 1e-12);
    assert!(word_to_moebius::<f64>(2, &[], 53).identity_error() < 1e-15);
}

#[test]
fn reduction_of_triple_products() {
    for g in [2, 3] {
        let grp = Group::get(g);
        let n: Vec<ElemId> = grp.neighbors().collect();
        let mut rng = common::rng(g as u64);
        for _ in 0..300 {
            let w: Vec<u8> = (0..3).flat_map(|_| grp.word(n[rng.gen_range(0..n.len())]).to_vec()).collect();
            let r = grp.dehn().reduce(&w);
            assert_eq!(grp.dehn().reduce(&r), r);
            let a: Moebius<BigInterval> = word_to_moebius(g, &w, 256);
            let b: Moebius<BigInterval> = word_to_moebius(g, &r, 256);
            assert!(off_identity(&a.compose(&b.inverse())) < 1e-10);
        }
    }
}

#[test]
fn neighbor_set_matches_enumeration() {
    for (g, want) in [(2, 48), (3, 120)] {
        let grp = Group::get(g);
        assert_eq!(grp.n_len() - 1, want);
        assert_eq!(want as u32, 4 * g * (4 * g - 2));
        let touching = common::touching_translations(g);
        assert_eq!(touching.len() - 1, want);
        let o = Cx::new(0.0, 0.0);
        let key = |z: Cx<f64>| ((z.re * 1e7).round() as i64, (z.im * 1e7).round() as i64);
        let a: BTreeSet<_> = touching.iter().map(|m| key(m.apply(&o))).collect();
        let b: BTreeSet<_> = grp.neighbors().map(|e| key(grp.m64(e).apply(&o))).collect();
        assert_eq!(a, b);
    }
    let g2 = Group::get(2);
    assert_eq!(g2.word(g2.neighbors().nth(1).unwrap()).as_slice(), &[0, 5, 2, 7]);
}

#[test]
fn neighbors_are_hyperbolic() {
    for g in [2, 3] {
        let grp = Group::get(g);
        for e in grp.neighbors().skip(1) {
            assert_eq!(grp.is_hyperbolic(e, 512), Some(true));
        }
    }
}

#[test]
fn vertex_neighbor_prefixes() {
    let g = 2;
    let dom = Domain::get(g);
    for k in 0..4 * g {
        let h = vertex_neighbors(g, k);
        assert_eq!(h.len(), 4 * g as usize);
        assert!(h.last().unwrap().is_empty());
        for w in &h {
            let m: Moebius<f64> = word_to_moebius(g, w, 53);
            let vk = &dom.vertices[k as usize];
            assert!(dom.vertices.iter().any(|v| m.apply(v).dist(vk) < 1e-9));
        }
    }
    let h = vertex_neighbors(2, 0);
    assert_eq!(h[0].as_slice(), &[0]);
    assert_eq!(h[1].as_slice(), &[0, 5]);
}
