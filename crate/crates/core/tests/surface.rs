mod common;

use std::f64::consts::PI;

use hypdt::arith::{BigInterval, Real};
use hypdt::gen::random_points;
use hypdt::kernel::{hyp_distance, point_along, Cx};
use hypdt::surface::{
    min_separation_length, special_coords, systole, triangle_area_bound, Special,
};
use hypdt::{Domain, ElemId, ExactPoint};
use rand::Rng;

#[test]
fn systole_bound_and_limit() {
    assert!(((systole(2) / 2.0).cosh() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    assert!((systole(3) - 3.3257).abs() < 1e-4);
    for g in 2..=64u32 {
        assert!(systole(g) < 2.0 * ((4 * g - 2) as f64).ln());
        assert!(systole(g + 1) > systole(g));
    }
    assert!((systole(1_000_000) - 2.0 * 3f64.acosh()).abs() < 1e-6);
}

#[test]
fn distance_identities() {
    let o = Cx::new(0.0, 0.0);
    for g in 2..=6u32 {
        let d = Domain::get(g);
        let cot = 1.0 / (PI / (4 * g) as f64).tan();
        assert!((hyp_distance(&o, &d.midpoints[0]).cosh() - cot).abs() < 1e-12);
        assert!((hyp_distance(&o, &d.vertices[0]).cosh() - cot * cot).abs() < 1e-11);
        let half = 0.5 * hyp_distance(&d.midpoints[0], &d.midpoints[1]);
        assert!((half.cosh() - 2f64.sqrt() * (PI / (4 * g) as f64).cos()).abs() < 1e-12);
        let n = 4 * g as usize;
        let angles: f64 = (0..n)
            .map(|k| hyperbolic_angle(&d.vertices[k], &d.vertices[(k + n - 1) % n], &d.vertices[(k + 1) % n]))
            .sum();
        assert!((angles - 2.0 * PI).abs() < 1e-5, "g={g}: {angles}");
    }
}

/// Angle at `v` between the geodesics towards `p` and `q`.
fn hyperbolic_angle(v: &Cx<f64>, p: &Cx<f64>, q: &Cx<f64>) -> f64 {
    let tangent = |z: &Cx<f64>| {
        let near = point_along(v, z, &1e-6);
        near - v.clone()
    };
    let (a, b) = (tangent(p), tangent(q));
    a.cross(&b).atan2(a.dot(&b)).abs()
}

#[test]
fn separation_lengths() {
    let o = 0.5 * systole(2);
    assert!((min_separation_length(2, 4) - 2.0 * o).abs() < 1e-12);
    assert!((min_separation_length(2, 2) - 2.2568).abs() < 1e-4);
    for g in 2..=8u32 {
        let s = systole(g);
        assert!(min_separation_length(g, 4) >= s - 1e-12);
        assert!(min_separation_length(g, 2) >= 0.5 * s);
        for k in 2..2 * g {
            assert!(min_separation_length(g, k + 1) > min_separation_length(g, k));
        }
    }
    assert!(triangle_area_bound(0.0).abs() < 1e-15);
    assert!((triangle_area_bound(1.0) - 0.9934).abs() < 1e-3);
    assert!((triangle_area_bound(50.0) - PI).abs() < 1e-12);
}

#[test]
fn weierstrass_points() {
    for g in [2u32, 3] {
        let d = Domain::get(g);
        let w = d.weierstrass_points();
        assert_eq!(w.len(), 2 * g as usize + 2);
        assert!(w.iter().all(|p| d.contains_original(&p.point)));
        let q = d.systole / 4.0;
        for i in 0..w.len() {
            for j in 0..i {
                assert!(d.surface_distance(&w[i].approx(), &w[j].approx()) > q);
            }
        }
    }
}

#[test]
fn systolic_segments() {
    for g in [2u32, 3, 4] {
        let d = Domain::get(g);
        let segs = d.systolic_segments();
        let total: f64 = segs.iter().map(|(p, q)| hyp_distance(p, q)).sum();
        assert!((total - d.systole).abs() < 1e-12);
        let f = d.group.intern(&[1]);
        let image = d.group.m64(f).apply(&segs[0].1);
        assert!(d.side_f64(1, &image).abs() < 1e-12);
        assert!(image.dist(&segs[1].1) < 1e-12);
    }
}

#[test]
fn canonical_round_trip() {
    for g in [2u32, 3] {
        let d = Domain::get(g);
        let grp = &d.group;
        let n: Vec<ElemId> = grp.neighbors().collect();
        let mut rng = common::rng(7 + g as u64);
        for p in random_points(g, 60, g as u64) {
            let mut e = ElemId::IDENTITY;
            for _ in 0..rng.gen_range(0..=3) {
                e = grp.compose(e, n[rng.gen_range(0..n.len())]);
            }
            let moved = p.point.transformed(grp, e);
            let (q, w) = d.canonicalize(&moved).unwrap();
            assert!(q.approx().dist(&p.approx()) < 1e-10);
            assert!(grp.m64(w).apply(&q.approx()).dist(&moved.approx()) < 1e-9);
            assert!(d.contains_original(&q.point));
        }
    }
}

fn boundary_point(g: u32, k: u32, t: f64) -> ExactPoint {
    ExactPoint::lazy(move |prec| {
        let p = prec + 32;
        let a: Cx<BigInterval> = special_coords(g, Special::Vertex(k), p);
        let b: Cx<BigInterval> = special_coords(g, Special::Vertex((k + 1) % (4 * g)), p);
        let len = hyp_distance(&a, &b) * BigInterval::from_f64(t, p);
        point_along(&a, &b, &len)
    })
}

#[test]
fn boundary_has_one_owner() {
    let g = 2;
    let d = Domain::get(g);
    let grp = &d.group;
    let mut pts: Vec<ExactPoint> = Vec::new();
    for k in 0..4 * g {
        pts.push(boundary_point(g, k, 0.37));
        pts.push(ExactPoint::special(g, Special::Vertex(k)));
        pts.push(ExactPoint::special(g, Special::Midpoint(k)));
    }
    for p in &pts {
        let owners = grp
            .neighbors()
            .filter(|&e| d.contains_original(&p.transformed(grp, e)))
            .count();
        assert_eq!(owners, 1, "{p:?}");
    }
}

#[test]
fn ownership_examples() {
    let d = Domain::get(2);
    assert!(d.contains_original(&ExactPoint::origin()));
    assert!(d.contains_original(&ExactPoint::special(2, Special::Vertex(0))));
    assert!(!d.contains_original(&ExactPoint::special(2, Special::Vertex(1))));
    assert!(!d.contains_original(&ExactPoint::special(2, Special::Midpoint(0))));
    assert!(d.contains_original(&ExactPoint::special(2, Special::Midpoint(4))));
    let (q, w) = d.canonicalize(&ExactPoint::special(2, Special::Vertex(1))).unwrap();
    assert_eq!(q.point.special_tag(), Some(Special::Vertex(0)));
    let first = d
        .group
        .neighbors()
        .find(|&e| d.group.m64(e).apply(&d.vertices[0]).dist(&d.vertices[1]) < 1e-12)
        .unwrap();
    assert_eq!(w, first);
}
