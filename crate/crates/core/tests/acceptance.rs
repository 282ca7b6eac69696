//! One line per acceptance criterion; exits nonzero when any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hypdt::arith::{self, certified_sign, sign_at, storage_bits, BigInterval, Exact, F64Interval, Mode, Real, Ring, SignExpr};
use hypdt::delaunay::Triangulation;
use hypdt::dummy::{bolza_table_dummy, refinement_dummy, structured_dummy, symmetric_dummy, validity_check, DummySet};
use hypdt::gen::random_points;
use hypdt::group::{generator_matrix, relator, word_to_moebius, Group};
use hypdt::kernel::{circumdiameter, hyp_distance, incircle_det, orient_det, Cx, InCircleExpr, Moebius, OrientExpr, PointSource};
use hypdt::oracle::{brute_delaunay, brute_delaunay_with, compare, compare_sets, OracleOptions};
use hypdt::surface::{dummy_count_bounds, min_separation_length, systole};
use hypdt::{Domain, ExactPoint};
use rand::Rng;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn run(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Check) -> bool {
    let t = Instant::now();
    let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
        let msg = e
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panic: {msg}"))
    });
    let el = t.elapsed();
    let r = match r {
        Ok(d) if el > limit => Err(format!("{d}; took {:.1}s, limit {:.0}s", el.as_secs_f64(), limit.as_secs_f64())),
        other => other,
    };
    let (tag, detail) = match &r {
        Ok(d) => ("PASS", d),
        Err(d) => ("FAIL", d),
    };
    println!("{tag} {n:>2} {name}: {detail} [{:.2}s]", el.as_secs_f64());
    r.is_ok()
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn off_identity(m: &Moebius<BigInterval>) -> f64 {
    let s = if m.a.re.mid() > 0.0 { 1.0 } else { -1.0 };
    let one = BigInterval::from_f64(s, 256);
    [(m.a.re.clone() - one).abs().mid(), m.a.im.abs().mid(), m.b.re.abs().mid(), m.b.im.abs().mid()]
        .into_iter()
        .fold(0.0, f64::max)
}

fn c1_systole() -> Check {
    let d = ((systole(2) / 2.0).cosh() - (1.0 + 2f64.sqrt())).abs();
    ensure(d < 1e-12, format!("cosh(sys/2) off by {d:e}"))?;
    for g in 2..=64u32 {
        ensure(systole(g) < 2.0 * ((4 * g - 2) as f64).ln(), format!("bound fails at g={g}"))?;
    }
    Ok(format!("|cosh(sys2/2) - (1+sqrt2)| = {d:.1e}; bound holds for g=2..64"))
}

fn c2_group() -> Check {
    let mut worst: f64 = 0.0;
    for g in 2..=4u32 {
        for k in 0..4 * g {
            worst = worst.max(off_identity(&word_to_moebius(g, &relator(g, k), 256)));
        }
        for j in 0..2 * g {
            let a: Moebius<BigInterval> = generator_matrix(g, j, 256);
            let b: Moebius<BigInterval> = generator_matrix(g, j + 2 * g, 256);
            worst = worst.max(off_identity(&a.compose(&b)));
        }
    }
    ensure(worst < 1e-30, format!("max deviation {worst:e}"))?;
    Ok(format!("relators and inverse pairs within {worst:.1e} of ±identity at 256 bits"))
}

fn c3_neighbors() -> Check {
    let mut out = Vec::new();
    for (g, want) in [(2u32, 48usize), (3, 120)] {
        let grp = Group::get(g);
        let enumerated = common::touching_translations(g).len() - 1;
        ensure(grp.n_len() - 1 == want, format!("g={g}: |N|-1 = {}", grp.n_len() - 1))?;
        ensure(enumerated == want, format!("g={g}: enumeration found {enumerated}"))?;
        ensure(want as u32 == 4 * g * (4 * g - 2), "count formula")?;
        out.push(format!("g={g}: {want}"));
    }
    let g2 = Group::get(2);
    let first = g2.word(g2.neighbors().nth(1).unwrap());
    ensure(first.as_slice() == [0, 5, 2, 7], format!("first element {first:?}"))?;
    Ok(format!("{}; first element f0 f5 f2 f7", out.join(", ")))
}

fn c4_bounds() -> Check {
    let (_, up) = dummy_count_bounds(2);
    let (lo, _) = dummy_count_bounds(1_000_000);
    let coef = lo / 999_999.0;
    ensure((27.05..=27.07).contains(&up), format!("upper {up}"))?;
    ensure((5.698..=5.700).contains(&coef), format!("lower coefficient {coef}"))?;
    Ok(format!("upper(2) = {up:.4}, lower coefficient = {coef:.4}"))
}

fn c5_table() -> Check {
    let t = bolza_table_dummy();
    let (ok, diam) = validity_check(2, &t.points).map_err(|e| e.to_string())?;
    ensure(ok, format!("validity fails, max diameter {diam}"))?;
    let tri = Triangulation::init(2, &t).map_err(|e| e.to_string())?;
    let s = tri.stats();
    ensure((s.vertices, s.edges, s.faces, s.euler) == (14, 48, 32, -2), format!("{s:?}"))?;
    Ok(format!("valid (max diameter {diam:.4}); V=14 E=48 F=32 chi=-2"))
}

fn rotation_invariant(set: &DummySet) -> bool {
    let g = set.genus;
    let d = Domain::get(g);
    set.points.iter().all(|p| {
        let base = p.point.clone();
        let r = ExactPoint::lazy(move |prec| {
            let z: Cx<BigInterval> = base.at(prec);
            let th = BigInterval::pi(prec + 8) / BigInterval::from_i64(2 * g as i64, prec);
            z * Cx::cis(&th)
        });
        let q = d.canonicalize(&r).unwrap().0;
        set.points.iter().any(|s| d.surface_distance(&s.approx(), &q.approx()) < 1e-9)
    })
}

fn c6_refinement() -> Check {
    let r = refinement_dummy(2).map_err(|e| e.to_string())?;
    let s = symmetric_dummy(2).map_err(|e| e.to_string())?;
    for q in [&r, &s] {
        let (ok, diam) = validity_check(2, &q.points).map_err(|e| e.to_string())?;
        ensure(ok, format!("{:?} invalid ({diam})", q.provenance))?;
        ensure((8..=27).contains(&q.len()), format!("{:?} has {} points", q.provenance, q.len()))?;
    }
    ensure(rotation_invariant(&s), "symmetric set not rotation invariant")?;
    ensure(s.len() % 8 == 6, format!("symmetric count {} not 6 mod 8", s.len()))?;
    Ok(format!("refinement {} (reference 22), symmetric {} (reference 22)", r.len(), s.len()))
}

fn c7_structured() -> Check {
    let mut out = Vec::new();
    for (g, want) in [(2u32, 30usize), (3, 68)] {
        let s = structured_dummy(g).map_err(|e| e.to_string())?;
        ensure(s.set.len() == want, format!("g={g}: {} points", s.set.len()))?;
        let half = systole(g) / 2.0;
        let worst = s.triangles.iter().map(|t| circumdiameter(&t[0], &t[1], &t[2])).fold(0.0, f64::max);
        ensure(worst < half, format!("g={g}: circumdiameter {worst} ≥ {half}"))?;
        let opts = OracleOptions { bits: Some(storage_bits(g) / 2), ..Default::default() };
        let oracle = brute_delaunay_with(g, &s.set.exact_points(), opts).map_err(|e| e.to_string())?;
        let cmp = compare_sets(&s.faces, &oracle.faces);
        ensure(cmp.equal_up_to_degenerate(&oracle), format!("g={g}: missing {} extra {}", cmp.missing.len(), cmp.extra.len()))?;
        out.push(format!(
            "g={g}: {want} points, {} faces, max diameter {worst:.4} < {half:.4}, oracle agrees ({} cocircular alternatives)",
            s.faces.len(),
            cmp.missing.len()
        ));
    }
    Ok(out.join("; "))
}

fn c8_oracle() -> Check {
    let sizes = [10usize, 25, 50];
    let mut faces = 0;
    for i in 0..20u64 {
        let n = sizes[i as usize % 3];
        let mut tri = Triangulation::init(2, &bolza_table_dummy()).map_err(|e| e.to_string())?;
        for p in random_points(2, n, 1000 + i) {
            tri.insert(&p).map_err(|e| e.to_string())?;
            let s = tri.stats();
            ensure(s.euler == -2 && 3 * s.faces == 2 * s.edges, format!("instance {i}: {s:?}"))?;
        }
        let oracle = brute_delaunay(2, &tri.points()).map_err(|e| e.to_string())?;
        let cmp = compare(&tri, &oracle).map_err(|e| e.to_string())?;
        ensure(cmp.equal(), format!("instance {i} (n={n}): missing {} extra {}", cmp.missing.len(), cmp.extra.len()))?;
        faces += oracle.faces.len();
    }
    Ok(format!("20 instances equal to the oracle ({faces} faces total)"))
}

fn c9_removal() -> Check {
    let mut full = 0;
    for seed in 0..50u64 {
        let mut tri = Triangulation::init(2, &bolza_table_dummy()).map_err(|e| e.to_string())?;
        tri.insert_many(&random_points(2, 200, seed)).map_err(|e| e.to_string())?;
        if tri.remove_dummies().map_err(|e| e.to_string())? == 14 {
            full += 1;
        }
        tri.check_invariants().map_err(|e| e.to_string())?;
    }
    ensure(full * 100 >= 90 * 50, format!("{full}/50 seeds removed all dummies"))?;
    Ok(format!("{full}/50 seeds removed all 14 dummies"))
}

fn exact(z: &Cx<f64>) -> Cx<Exact> {
    let q = |x: f64| Exact(rug::Rational::from_f64(x).unwrap());
    Cx::new(q(z.re), q(z.im))
}

fn c10_predicates() -> Check {
    let mut rng = common::rng(10);
    let (mut filter_abstained, mut fast_wrong) = (0u32, 0u32);
    let total = 100_000;
    for i in 0..total {
        let pert = [0.0, 1e-17, -1e-17, 1e-15, -1e-15, 1e-13][rng.gen_range(0..6)];
        let (got, reference, truth, filt, fast) = if i % 2 == 0 {
            let c = Cx::new(rng.gen_range(-0.4..0.4), rng.gen_range(-0.4..0.4));
            let r: f64 = rng.gen_range(0.01..0.5);
            let on = |t: f64| c.clone() + Cx::new(t.cos(), t.sin()).scale(&r);
            let mut ts: Vec<f64> = (0..3).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
            ts.sort_by(f64::total_cmp);
            let (p, q, s) = (on(ts[0]), on(ts[1]), on(ts[2]));
            let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let u = if i % 10 == 0 {
                let d = c.clone() - p.clone();
                Cx::new(c.re + d.re, c.im - d.im)
            } else {
                c.clone() + Cx::new(t.cos(), t.sin()).scale(&(r * (1.0 + pert)))
            };
            let e = InCircleExpr(&p, &q, &s, &u);
            let truth = incircle_det(&exact(&p), &exact(&q), &exact(&s), &exact(&u)).sign().unwrap();
            (certified_sign(&e, 512), sign_at(&e, 512), truth, e.eval::<F64Interval>(53).sign(), arith::fast_sign(&e))
        } else {
            let p = Cx::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
            let q = Cx::new(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
            let t: f64 = rng.gen_range(-1.0..2.0);
            let d = q.clone() - p.clone();
            let r = if i % 10 == 1 {
                let k = rng.gen_range(1..8) as f64 / 8.0;
                Cx::new(p.re, p.im + k * 0.125)
            } else {
                p.clone() + d.scale(&t) + Cx::new(-d.im, d.re).scale(&pert)
            };
            let (p, q) = if i % 10 == 1 { (p.clone(), Cx::new(p.re, p.im + 0.5)) } else { (p, q) };
            let e = OrientExpr(&p, &q, &r);
            let truth = orient_det(&exact(&p), &exact(&q), &exact(&r)).sign().unwrap();
            (certified_sign(&e, 512), sign_at(&e, 512), truth, e.eval::<F64Interval>(53).sign(), arith::fast_sign(&e))
        };
        let got = got.map_err(|e| format!("query {i}: undecided at {} bits", e.bits))?;
        ensure(Some(got) == reference, format!("query {i}: filtered {got:?}, 512-bit {reference:?}"))?;
        ensure(got == truth, format!("query {i}: filtered {got:?}, exact {truth:?}"))?;
        match filt {
            None => filter_abstained += 1,
            Some(s) => ensure(s == truth, format!("query {i}: double interval filter wrong"))?,
        }
        if fast != truth {
            fast_wrong += 1;
        }
    }
    Ok(format!(
        "{total} queries, 0 incorrect; filter abstained on {filter_abstained}; unfiltered doubles wrong on {fast_wrong}"
    ))
}

fn c11_scale() -> Check {
    let pts = random_points(2, 100_000, 1);
    let mut times = Vec::new();
    for mode in [Mode::Fast, Mode::certified(2)] {
        let t = Instant::now();
        let mut tri = Triangulation::init_with_mode(2, &bolza_table_dummy(), mode).map_err(|e| e.to_string())?;
        tri.insert_many(&pts).map_err(|e| e.to_string())?;
        let s = tri.stats();
        ensure(s.vertices == 100_014 && s.euler == -2, format!("{mode:?}: {s:?}"))?;
        times.push(t.elapsed().as_secs_f64());
    }
    let ratio = times[1] / times[0];
    ensure(times[1] < 120.0, format!("filtered path took {:.1}s", times[1]))?;
    ensure(ratio < 10.0, format!("filtered/fast ratio {ratio:.2}"))?;
    Ok(format!("fast {:.1}s, filtered {:.1}s, ratio {ratio:.2}", times[0], times[1]))
}

/// Distance between the supporting geodesics of sides 0 and `k`.
fn perpendicular(g: u32, k: u32) -> f64 {
    let d = Domain::get(g);
    let (c0, ck) = (&d.side_centers[0], &d.side_centers[k as usize]);
    let r = d.side_radius;
    ((c0.dist(ck).powi(2) - 2.0 * r * r) / (2.0 * r * r)).acosh()
}

fn c12_identities() -> Check {
    let o = Cx::new(0.0, 0.0);
    let mut worst: f64 = 0.0;
    for g in 2..=8u32 {
        let d = Domain::get(g);
        let q = std::f64::consts::PI / (4 * g) as f64;
        let cot = 1.0 / q.tan();
        worst = worst.max((hyp_distance(&o, &d.midpoints[0]).cosh() - cot).abs());
        worst = worst.max((hyp_distance(&o, &d.vertices[0]).cosh() - cot * cot).abs() / (cot * cot));
        worst = worst.max(((0.5 * hyp_distance(&d.midpoints[0], &d.midpoints[1])).cosh() - 2f64.sqrt() * q.cos()).abs());
        for k in 2..=2 * g {
            worst = worst.max((min_separation_length(g, k) - perpendicular(g, k)).abs());
        }
        ensure(min_separation_length(g, 4) >= systole(g) - 1e-12, format!("g={g}: 4-separation below systole"))?;
        ensure(min_separation_length(g, 2) >= systole(g) / 2.0, format!("g={g}: 2-separation below half systole"))?;
    }
    let s = (min_separation_length(2, 4) - systole(2)).abs();
    ensure(worst < 1e-12, format!("max deviation {worst:e}"))?;
    ensure(s < 1e-12, format!("min_separation_length(2,4) off by {s:e}"))?;
    Ok(format!("g=2..8 within {worst:.1e}; separation lengths match common perpendiculars"))
}

fn main() {
    let checks: Vec<(u32, &str, u64, fn() -> Check)> = vec![
        (1, "systole", 1, c1_systole),
        (2, "group algebra", 5, c2_group),
        (3, "neighbor set", 5, c3_neighbors),
        (4, "bound functions", 1, c4_bounds),
        (5, "table dummy set", 10, c5_table),
        (6, "refinement and symmetric", 300, c6_refinement),
        (7, "structured", 600, c7_structured),
        (8, "oracle equivalence", 1800, c8_oracle),
        (9, "dummy removal", 1200, c9_removal),
        (10, "predicate robustness", 300, c10_predicates),
        (11, "scale", 600, c11_scale),
        (12, "polygon identities", 1, c12_identities),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (n, name, limit, f) in checks {
        if !only.is_empty() && !only.contains(&n) {
            continue;
        }
        if !run(n, name, secs(limit), f) {
            failed += 1;
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
