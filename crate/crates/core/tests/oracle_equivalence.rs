use hypdt::delaunay::Triangulation;
use hypdt::dummy::{bolza_table_dummy, structured_dummy};
use hypdt::gen::random_points;
use hypdt::oracle::{brute_delaunay, brute_delaunay_with, compare, compare_sets, OracleOptions};

#[test]
fn random_instances_match() {
    for (seed, n) in [(1u64, 10usize), (2, 25), (3, 50)] {
        let mut tri = Triangulation::init(2, &bolza_table_dummy()).unwrap();
        for p in random_points(2, n, seed) {
            tri.insert(&p).unwrap();
            let s = tri.stats();
            assert_eq!(s.euler, -2);
            assert_eq!(3 * s.faces, 2 * s.edges);
        }
        tri.check_invariants().unwrap();
        let oracle = brute_delaunay(2, &tri.points()).unwrap();
        let cmp = compare(&tri, &oracle).unwrap();
        assert!(cmp.equal(), "seed {seed}: {cmp:?}");
    }
}

#[test]
fn structured_prediction_is_delaunay() {
    let s = structured_dummy(2).unwrap();
    let bits = Some(hypdt::arith::storage_bits(2) / 2);
    let oracle = brute_delaunay_with(2, &s.set.exact_points(), OracleOptions { bits, ..Default::default() }).unwrap();
    let cmp = compare_sets(&s.faces, &oracle.faces);
    for f in &cmp.extra {
        panic!("predicted face not Delaunay: {f:?}");
    }
    for f in &cmp.missing {
        assert!(oracle.degenerate.contains(f), "unpredicted nondegenerate face {f:?}");
    }
}
