use hypdt::delaunay::Triangulation;
use hypdt::dummy::bolza_table_dummy;
use hypdt::gen::random_points;
use hypdt::oracle::{brute_delaunay, compare};
use hypdt::surface::systole;

#[test]
fn removal_right_after_init_stays_valid() {
    let mut tri = Triangulation::init(2, &bolza_table_dummy()).unwrap();
    let ids: Vec<_> = tri.vertex_ids().collect();
    let mut refused = 0;
    for v in ids {
        let mut t = tri.clone();
        if !t.remove(v).unwrap() {
            refused += 1;
        }
    }
    assert!(refused >= 1);
    let removed = tri.remove_dummies().unwrap();
    assert!(removed < 14);
    tri.check_invariants().unwrap();
    let oracle = brute_delaunay(2, &tri.points()).unwrap();
    assert!(oracle.max_diameter < systole(2) / 2.0);
    let cmp = compare(&tri, &oracle).unwrap();
    assert!(cmp.equal_up_to_degenerate(&oracle), "{cmp:?}");
    assert_eq!(tri.remove_dummies().unwrap(), 0);
}

#[test]
fn dummies_leave_after_enough_points() {
    let mut tri = Triangulation::init(2, &bolza_table_dummy()).unwrap();
    for p in random_points(2, 200, 11) {
        tri.insert(&p).unwrap();
    }
    let removed = tri.remove_dummies().unwrap();
    tri.check_invariants().unwrap();
    assert_eq!(removed, 14);
    assert_eq!(tri.stats().dummy_remaining, 0);
    assert_eq!(tri.remove_dummies().unwrap(), 0);
}

#[test]
fn removal_matches_oracle() {
    let mut tri = Triangulation::init(2, &bolza_table_dummy()).unwrap();
    for p in random_points(2, 60, 4) {
        tri.insert(&p).unwrap();
    }
    let removed = tri.remove_dummies().unwrap();
    assert!(removed > 0);
    tri.check_invariants().unwrap();
    let oracle = brute_delaunay(2, &tri.points()).unwrap();
    assert!(compare(&tri, &oracle).unwrap().equal());
}

#[test]
fn remove_then_reinsert_restores_faces() {
    let mut tri = Triangulation::init(2, &bolza_table_dummy()).unwrap();
    let pts = random_points(2, 40, 9);
    for p in &pts {
        tri.insert(p).unwrap();
    }
    let before = tri.canonical_faces();
    let last = tri.vertex_ids().last().unwrap();
    assert!(tri.remove(last).unwrap());
    tri.check_invariants().unwrap();
    tri.insert(pts.last().unwrap()).unwrap();
    assert_eq!(tri.canonical_faces(), before);
}
