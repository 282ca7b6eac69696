//! Dummy point sets whose lifted Delaunay triangulation has small circumdisks.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::sync::Arc;

use rug::Rational;
use serde::Serialize;

use crate::arith::{self, BigInterval, Mode, Real, Sign};
use crate::delaunay::{canonical_face, CanonFace};
use crate::group::{ElemId, Group};
use crate::kernel::{self, Cx, DiameterBelow, PointSource};
use crate::planar;
use crate::surface::{Domain, ExactPoint, Lifted, Special, SurfacePoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Refinement,
    Symmetric,
    Structured,
    Table,
}

#[derive(Clone, Debug)]
pub struct DummySet {
    pub genus: u32,
    pub points: Vec<SurfacePoint>,
    pub provenance: Provenance,
    pub diam_bound_witness: f64,
    /// Largest circumdiameter before each refinement step.
    pub history: Vec<f64>,
}

impl DummySet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn exact_points(&self) -> Vec<ExactPoint> {
        self.points.iter().map(|p| p.point.clone()).collect()
    }
}

/// Copies `f(q)` for every `q` and `f ∈ N`, tagged with the index of `q`.
pub fn lift(grp: &Arc<Group>, pts: &[ExactPoint]) -> Vec<(usize, Lifted)> {
    let mut out = Vec::with_capacity(pts.len() * grp.n_len());
    for (i, p) in pts.iter().enumerate() {
        for e in grp.neighbors() {
            out.push((i, Lifted::new(grp, p.clone(), e)));
        }
    }
    out
}

/// Lifts a set of canonical points, dropping copies that coincide.
pub fn lift_to_neighbors(g: u32, pts: &[SurfacePoint]) -> Vec<(usize, Lifted)> {
    let grp = Group::get(g);
    let exact: Vec<ExactPoint> = pts.iter().map(|p| p.point.clone()).collect();
    let all = lift(&grp, &exact);
    let mut kept: Vec<(usize, Lifted)> = Vec::with_capacity(all.len());
    for (i, l) in all {
        let z = l.approx();
        if kept.iter().any(|(j, k)| *j == i && k.approx().dist(&z) < 1e-9) {
            continue;
        }
        kept.push((i, l));
    }
    kept
}

/// A triangle of the lifted triangulation with at least one canonical corner.
#[derive(Clone, Debug)]
pub struct TriInfo {
    pub face: CanonFace,
    pub diameter: f64,
    pub admissible: bool,
}

fn weak_mode(g: u32) -> Mode {
    Mode::Tolerant {
        cap: (arith::storage_bits(g) / 2).max(arith::FIRST_BIG_BITS),
    }
}

fn admissible(dom: &Arc<Domain>, c: [&Lifted; 3]) -> bool {
    let d = dom.clone();
    let bound = move |prec: u32| d.half_systole_big(prec);
    let e = DiameterBelow {
        pts: c,
        bound: &bound,
        bound_f64: dom.systole / 2.0,
    };
    matches!(Mode::Certified { cap: dom.cap() }.sign(&e), Ok(Sign::Positive))
}

/// All distinct surface triangles of the lifted triangulation.
pub fn analyze(g: u32, pts: &[ExactPoint]) -> Result<Vec<TriInfo>> {
    let dom = Domain::get(g);
    let grp = dom.group.clone();
    let lifted = lift(&grp, pts);
    let sites: Vec<Lifted> = lifted.iter().map(|(_, l)| l.clone()).collect();
    let tris = planar::triangulate(&sites, weak_mode(g))?;
    let mut seen: BTreeSet<CanonFace> = BTreeSet::new();
    let mut out = Vec::new();
    for t in tris {
        let e = t.map(|i| lifted[i].1.elem);
        if !e.iter().any(|x| x.is_identity()) {
            continue;
        }
        let face = canonical_face(&grp, t.map(|i| lifted[i].0), e);
        if !seen.insert(face) {
            continue;
        }
        let c = [0, 1, 2].map(|i| Lifted::new(&grp, pts[face.v[i]].clone(), face.t[i]));
        let diameter = kernel::circumdiameter(&c[0].approx(), &c[1].approx(), &c[2].approx());
        let ok = admissible(&dom, [&c[0], &c[1], &c[2]]);
        out.push(TriInfo {
            face,
            diameter,
            admissible: ok,
        });
    }
    Ok(out)
}

fn require_weierstrass(dom: &Domain, pts: &[ExactPoint]) -> Result<()> {
    for w in dom.weierstrass_points() {
        let wz = w.approx();
        if !pts.iter().any(|q| dom.surface_distance(&wz, &q.approx()) < 0.05) {
            return Err(Error::MissingWeierstrass);
        }
    }
    Ok(())
}

/// Whether every lifted Delaunay triangle meeting the domain has circumdiameter below `½ς`.
pub fn validity_check(g: u32, pts: &[SurfacePoint]) -> Result<(bool, f64)> {
    let dom = Domain::get(g);
    let exact: Vec<ExactPoint> = pts.iter().map(|p| p.point.clone()).collect();
    require_weierstrass(&dom, &exact)?;
    let info = analyze(g, &exact)?;
    let ok = info.iter().all(|t| t.admissible);
    let maxd = info.iter().map(|t| t.diameter).fold(0.0, f64::max);
    Ok((ok, maxd))
}

/// Rounds a point to storage precision and brings it into the original domain.
pub fn round_into_domain(dom: &Domain, p: &ExactPoint) -> Result<SurfacePoint> {
    let bits = arith::storage_bits(dom.g);
    let (sp, _) = dom.canonicalize(p)?;
    if sp.point.as_rational().is_some() && dom.contains_original(&sp.point) {
        return Ok(sp);
    }
    let r = sp.point.rounded(bits);
    if dom.contains_original(&r) {
        return Ok(SurfacePoint { genus: dom.g, point: r });
    }
    let base = sp.point.clone();
    let shrink = bits / 2;
    let pulled = ExactPoint::lazy(move |prec| {
        let z: Cx<BigInterval> = base.at(prec);
        let one = BigInterval::from_f64(1.0, prec);
        let eps = BigInterval::from_f64(2f64.powi(-(shrink as i32)), prec);
        z.scale(&(one - eps))
    });
    let r = pulled.rounded(bits);
    if dom.contains_original(&r) {
        return Ok(SurfacePoint { genus: dom.g, point: r });
    }
    Err(Error::Invariant("rounded point left the domain".into()))
}

fn rounded_weierstrass(dom: &Domain) -> Result<Vec<SurfacePoint>> {
    dom.weierstrass_points()
        .iter()
        .map(|w| round_into_domain(dom, &w.point))
        .collect()
}

fn is_duplicate(dom: &Domain, pts: &[SurfacePoint], z: &Cx<f64>) -> bool {
    pts.iter().any(|q| dom.surface_distance(&q.approx(), z) < 1e-12)
}

struct Candidate {
    center: ExactPoint,
    key: (i64, i64, i64),
}

fn candidates(dom: &Arc<Domain>, pts: &[ExactPoint], info: &[TriInfo]) -> Result<Vec<Candidate>> {
    let grp = &dom.group;
    let prec = arith::storage_bits(dom.g) + 64;
    let mut out = Vec::new();
    for t in info.iter().filter(|t| !t.admissible) {
        let c = [0, 1, 2].map(|i| Lifted::new(grp, pts[t.face.v[i]].clone(), t.face.t[i]));
        let z: [Cx<BigInterval>; 3] = [c[0].at(prec), c[1].at(prec), c[2].at(prec)];
        let circ = match kernel::circumcircle(&z[0], &z[1], &z[2]) {
            Ok(x) => x,
            Err(_) => continue,
        };
        let center = ExactPoint::rational(
            circ.hyp_center.re.mid_rational(prec),
            circ.hyp_center.im.mid_rational(prec),
        );
        let (canon, _) = dom.canonicalize(&center)?;
        let a = canon.approx();
        let q = |x: f64| (x * 1e10).round() as i64;
        out.push(Candidate {
            center: canon.point,
            key: (-q(t.diameter), q(a.re), q(a.im)),
        });
    }
    out.sort_by_key(|c| c.key);
    Ok(out)
}

fn refine(g: u32, symmetric: bool) -> Result<DummySet> {
    let dom = Domain::get(g);
    let mut pts = rounded_weierstrass(&dom)?;
    let mut history = Vec::new();
    let limit = 64 * g as usize;
    for _ in 0..limit {
        let exact: Vec<ExactPoint> = pts.iter().map(|p| p.point.clone()).collect();
        let info = analyze(g, &exact)?;
        let maxd = info.iter().map(|t| t.diameter).fold(0.0, f64::max);
        if info.iter().all(|t| t.admissible) {
            return Ok(DummySet {
                genus: g,
                points: pts,
                provenance: if symmetric { Provenance::Symmetric } else { Provenance::Refinement },
                diam_bound_witness: maxd,
                history,
            });
        }
        history.push(maxd);
        let mut added = false;
        for cand in candidates(&dom, &exact, &info)? {
            let orbit: Vec<ExactPoint> = if symmetric {
                (0..4 * g).map(|k| rotate(&cand.center, g, k)).collect()
            } else {
                vec![cand.center.clone()]
            };
            let mut fresh = Vec::new();
            for p in orbit {
                let sp = round_into_domain(&dom, &p)?;
                let z = sp.approx();
                if is_duplicate(&dom, &pts, &z) || is_duplicate(&dom, &fresh, &z) {
                    continue;
                }
                fresh.push(sp);
            }
            if !fresh.is_empty() {
                pts.extend(fresh);
                added = true;
                break;
            }
        }
        if !added {
            return Err(Error::Invariant("refinement found no insertable circumcenter".into()));
        }
    }
    Err(Error::Invariant("refinement did not terminate".into()))
}

/// Rotation about `O` by `kπ/2g`, evaluated lazily.
fn rotate(p: &ExactPoint, g: u32, k: u32) -> ExactPoint {
    if k == 0 {
        return p.clone();
    }
    let base = p.clone();
    ExactPoint::lazy(move |prec| {
        let z: Cx<BigInterval> = base.at(prec);
        let th = BigInterval::pi(prec + 8) * BigInterval::from_i64(k as i64, prec)
            / BigInterval::from_i64(2 * g as i64, prec);
        z * Cx::cis(&th)
    })
}

/// Inserts circumcenters of bad triangles one at a time, starting from `W`.
pub fn refinement_dummy(g: u32) -> Result<DummySet> {
    refine(g, false)
}

/// Like refinement, inserting the whole rotation orbit of each circumcenter.
pub fn symmetric_dummy(g: u32) -> Result<DummySet> {
    refine(g, true)
}

/// The structured set together with its predicted triangulation.
#[derive(Clone, Debug)]
pub struct Structured {
    pub set: DummySet,
    pub m: u32,
    pub faces: BTreeSet<CanonFace>,
    /// Corner positions of every predicted triangle inside the domain.
    pub triangles: Vec<[Cx<f64>; 3]>,
}

/// Number of steps `m = ⌈4 acosh(cot(π/4g)) / ς⌉ − 1`.
pub fn structured_steps(g: u32) -> u32 {
    let cap = arith::precision_cap(g);
    let f = |prec: u32| {
        let q = BigInterval::pi(prec + 8) / BigInterval::from_i64(4 * g as i64, prec);
        let cot = q.cos() / q.sin();
        let four = BigInterval::from_i64(4, prec);
        four * cot.acosh() / crate::surface::half_systole_t::<BigInterval>(g, prec) / BigInterval::from_i64(2, prec)
    };
    for p in arith::rungs(cap) {
        let x = f(p);
        let (lo, hi) = (x.lo().to_f64(), x.hi().to_f64());
        if lo.ceil() == hi.ceil() && lo.ceil() != lo {
            return hi.ceil() as u32 - 1;
        }
    }
    let x = f(cap).mid();
    if g == 2 {
        // cot(π/8) = 1 + √2 makes the ratio exactly 2.
        return x.round() as u32 - 1;
    }
    x.round() as u32 - 1
}

fn slice_points_f64(g: u32, m: u32) -> (Vec<Vec<Cx<f64>>>, Vec<Cx<f64>>) {
    let dom = Domain::get(g);
    let n = 4 * g;
    let quarter = dom.systole / 4.0;
    let mut rings = Vec::new();
    for j in 0..=m {
        let base = kernel::point_along(&dom.midpoints[0], &Cx::zero(), &(j as f64 * quarter));
        rings.push(
            (0..n)
                .map(|k| base.clone() * Cx::cis(&(PI * k as f64 / (2 * g) as f64)))
                .collect::<Vec<_>>(),
        );
    }
    let mids = (0..n as usize)
        .map(|k| kernel::geodesic_midpoint(&dom.midpoints[k], &dom.midpoints[(k + 1) % n as usize]))
        .collect();
    (rings, mids)
}

/// The structured set: `W`, the side-midpoint bisectors, and rings stepping in from the side midpoints.
pub fn structured_dummy(g: u32) -> Result<Structured> {
    let dom = Domain::get(g);
    let grp = dom.group.clone();
    let n = 4 * g;
    let m = structured_steps(g);
    let quarter_t = move |prec: u32, j: u32| {
        crate::surface::half_systole_t::<BigInterval>(g, prec) * BigInterval::from_i64(j as i64, prec)
            / BigInterval::from_i64(2, prec)
    };
    let mid = move |k: u32, prec: u32| {
        crate::surface::special_coords::<BigInterval>(g, Special::Midpoint(k % (4 * g)), prec + 16)
    };
    let ring = move |j: u32, k: u32, prec: u32| {
        let m0 = mid(0, prec);
        let base = kernel::point_along(&m0, &Cx::zero(), &quarter_t(prec, j));
        let th = BigInterval::pi(prec + 8) * BigInterval::from_i64(k as i64, prec)
            / BigInterval::from_i64(2 * g as i64, prec);
        base * Cx::cis(&th)
    };
    let mut raw: Vec<ExactPoint> = dom.weierstrass_points().into_iter().map(|w| w.point).collect();
    for k in 0..n {
        raw.push(ExactPoint::lazy(move |prec| kernel::geodesic_midpoint(&mid(k, prec), &mid(k + 1, prec))));
    }
    for j in 1..=m {
        for k in 0..n {
            raw.push(ExactPoint::lazy(move |prec| ring(j, k, prec)));
            raw.push(ExactPoint::lazy(move |prec| {
                kernel::reflect_geodesic(&mid(k, prec), &mid(k + 1, prec), &ring(j, k, prec))
            }));
        }
    }
    let mut points = Vec::with_capacity(raw.len());
    for p in &raw {
        let sp = round_into_domain(&dom, p)?;
        if is_duplicate(&dom, &points, &sp.approx()) {
            return Err(Error::Invariant("structured points coincide".into()));
        }
        points.push(sp);
    }

    // Predicted triangles, first in the slice [O, m_k, m_{k+1}], then reflected.
    let (rings, mids) = slice_points_f64(g, m);
    let mut triangles: Vec<[Cx<f64>; 3]> = Vec::new();
    for k in 0..n as usize {
        let k1 = (k + 1) % n as usize;
        let a = |j: usize| rings[j][k].clone();
        let b = |j: usize| rings[j][k1].clone();
        let p = mids[k].clone();
        let mu = m as usize;
        let mut slice = vec![[Cx::zero(), a(mu), b(mu)]];
        for j in 1..mu {
            slice.push([a(j), b(j), b(j + 1)]);
            slice.push([a(j), b(j + 1), a(j + 1)]);
        }
        slice.push([a(1), b(1), p.clone()]);
        slice.push([a(0), a(1), p.clone()]);
        slice.push([b(0), b(1), p.clone()]);
        let (m0, m1) = (dom.midpoints[k].clone(), dom.midpoints[k1].clone());
        let reflected: Vec<[Cx<f64>; 3]> = slice
            .iter()
            .map(|t| t.clone().map(|z| kernel::reflect_geodesic(&m0, &m1, &z)))
            .collect();
        triangles.extend(slice);
        triangles.extend(reflected);
    }
    for t in &mut triangles {
        if kernel::orient_det(&t[0], &t[1], &t[2]) < 0.0 {
            t.swap(1, 2);
        }
    }

    let exact: Vec<ExactPoint> = points.iter().map(|p| p.point.clone()).collect();
    let lifted = lift(&grp, &exact);
    let find = |z: &Cx<f64>| -> Result<(usize, ElemId)> {
        lifted
            .iter()
            .filter(|(_, l)| l.approx().dist(z) < 1e-7)
            .map(|(i, l)| (*i, l.elem))
            .next()
            .ok_or_else(|| Error::Invariant("predicted corner has no lifted point".into()))
    };
    let mut faces = BTreeSet::new();
    for t in &triangles {
        let c = [find(&t[0])?, find(&t[1])?, find(&t[2])?];
        faces.insert(canonical_face(&grp, c.map(|x| x.0), c.map(|x| x.1)));
    }
    let diam = triangles
        .iter()
        .map(|t| kernel::circumdiameter(&t[0], &t[1], &t[2]))
        .fold(0.0, f64::max);
    Ok(Structured {
        set: DummySet {
            genus: g,
            points,
            provenance: Provenance::Structured,
            diam_bound_witness: diam,
            history: Vec::new(),
        },
        m,
        faces,
        triangles,
    })
}

/// The fourteen rational points for genus 2.
pub fn bolza_table_dummy() -> DummySet {
    let q = |a: i32, b: u32| Rational::from((a, b));
    let coords = [
        (q(0, 1), q(0, 1)),
        (q(97, 125), q(-26, 81)),
        (q(-9, 14), q(0, 1)),
        (q(-5, 11), q(-5, 11)),
        (q(0, 1), q(-9, 14)),
        (q(5, 11), q(-5, 11)),
        (q(1, 2), q(-4, 19)),
        (q(1, 2), q(4, 19)),
        (q(4, 19), q(1, 2)),
        (q(-4, 19), q(1, 2)),
        (q(-1, 2), q(4, 19)),
        (q(-1, 2), q(-4, 19)),
        (q(-4, 19), q(-1, 2)),
        (q(4, 19), q(-1, 2)),
    ];
    let points = coords
        .into_iter()
        .map(|(x, y)| SurfacePoint {
            genus: 2,
            point: ExactPoint::rational(x, y),
        })
        .collect();
    DummySet {
        genus: 2,
        points,
        provenance: Provenance::Table,
        diam_bound_witness: 0.0,
        history: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_row() {
        let t = bolza_table_dummy();
        assert_eq!(t.len(), 14);
        assert_eq!(t.points[6].point.as_rational().unwrap().0, Rational::from((1, 2)));
        assert_eq!(t.points[6].point.as_rational().unwrap().1, Rational::from((-4, 19)));
    }

    #[test]
    fn table_points_are_canonical() {
        let dom = Domain::get(2);
        for p in bolza_table_dummy().points {
            assert!(dom.contains_original(&p.point), "{:?}", p.point);
        }
    }

    #[test]
    fn origin_lifts_to_n() {
        let o = vec![SurfacePoint {
            genus: 2,
            point: ExactPoint::origin(),
        }];
        assert_eq!(lift_to_neighbors(2, &o).len(), 49);
    }

    #[test]
    fn table_is_valid() {
        let (ok, d) = validity_check(2, &bolza_table_dummy().points).unwrap();
        assert!(ok, "{d}");
    }

    #[test]
    fn weierstrass_alone_is_invalid() {
        let w = Domain::get(2).weierstrass_points();
        assert!(!validity_check(2, &w).unwrap().0);
    }

    #[test]
    fn refinement_genus_two() {
        let q = refinement_dummy(2).unwrap();
        eprintln!("refinement g=2: {} points, history {:?}", q.len(), q.history);
        assert!(validity_check(2, &q.points).unwrap().0);
    }

    #[test]
    fn symmetric_genus_two() {
        let q = symmetric_dummy(2).unwrap();
        eprintln!("symmetric g=2: {} points", q.len());
        assert_eq!((q.len() - 6) % 8, 0);
    }

    #[test]
    fn structured_genus_two() {
        let s = structured_dummy(2).unwrap();
        assert_eq!(s.set.len(), 30);
        assert_eq!(s.faces.len(), 64);
    }

    #[test]
    fn steps() {
        assert_eq!(structured_steps(2), 1);
        assert_eq!(structured_steps(3), 2);
    }
}
