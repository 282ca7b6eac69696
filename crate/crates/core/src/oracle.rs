//! Brute-force Delaunay faces of a surface point set, for checking.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::TAU;

use crate::arith::{self, F64Interval, Ring, Sign, SignExpr};
use crate::delaunay::{canonical_face, CanonFace, Triangulation};
use crate::group::{ElemId, Group};
use crate::kernel::{self, Cx, InCircleExpr, OrientExpr};
use crate::surface::{Domain, ExactPoint, Lifted};
use crate::{Error, Result};

pub const DEFAULT_MAX_POINTS: usize = 100;

#[derive(Clone, Copy, Debug)]
pub struct OracleOptions {
    pub max_points: usize,
    /// Bits at which an undecided sign counts as zero; the cap when `None`.
    pub bits: Option<u32>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            max_points: DEFAULT_MAX_POINTS,
            bits: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct OracleResult {
    pub faces: BTreeSet<CanonFace>,
    /// Faces whose circumcircle passes through a further lifted point.
    pub degenerate: BTreeSet<CanonFace>,
    pub max_diameter: f64,
}

impl OracleResult {
    pub fn len(&self) -> usize {
        self.faces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.faces.is_empty()
    }
}

/// Sign decided directly at `bits`; a clear double-interval sign is taken as is.
fn sign<E: SignExpr>(e: &E, bits: u32) -> Sign {
    if let Some(s) = e.eval::<F64Interval>(53).sign() {
        return s;
    }
    arith::sign_at(e, bits).unwrap_or(Sign::Zero)
}

struct Grid {
    cell: f64,
    n: usize,
    buckets: Vec<Vec<usize>>,
}

impl Grid {
    fn new(pts: &[Cx<f64>], cell: f64) -> Grid {
        let n = (2.0 / cell).ceil() as usize + 1;
        let mut buckets = vec![Vec::new(); n * n];
        let mut g = Grid { cell, n, buckets: Vec::new() };
        for (i, p) in pts.iter().enumerate() {
            let (a, b) = g.cell_of(p.re, p.im);
            buckets[b * n + a].push(i);
        }
        g.buckets = buckets;
        g
    }

    fn cell_of(&self, x: f64, y: f64) -> (usize, usize) {
        let q = |v: f64| (((v + 1.0) / self.cell).floor().max(0.0) as usize).min(self.n - 1);
        (q(x), q(y))
    }

    fn disk(&self, c: &Cx<f64>, r: f64, out: &mut Vec<usize>) {
        out.clear();
        let (a0, b0) = self.cell_of(c.re - r, c.im - r);
        let (a1, b1) = self.cell_of(c.re + r, c.im + r);
        for b in b0..=b1 {
            for a in a0..=a1 {
                out.extend_from_slice(&self.buckets[b * self.n + a]);
            }
        }
    }
}

/// Euclidean center and radius of the hyperbolic disk of radius `rho` about `a`.
fn hyperbolic_disk(a: &Cx<f64>, rho: f64) -> (Cx<f64>, f64) {
    let t = (rho / 2.0).tanh();
    let s2 = a.norm2();
    let d = 1.0 - s2 * t * t;
    (a.scale(&((1.0 - t * t) / d)), t * (1.0 - s2) / d)
}

/// The elements `a∘b` for `a, b ∈ N`, without repeats.
pub fn double_ring(grp: &Group) -> Vec<ElemId> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for a in grp.neighbors() {
        for b in grp.neighbors() {
            let c = grp.compose(a, b);
            if seen.insert(c) {
                out.push(c);
            }
        }
    }
    out
}

pub fn brute_delaunay(g: u32, pts: &[ExactPoint]) -> Result<OracleResult> {
    brute_delaunay_with(g, pts, OracleOptions::default())
}

/// Faces of the Delaunay triangulation of the lifted set, by empty-circle tests.
pub fn brute_delaunay_with(g: u32, pts: &[ExactPoint], opts: OracleOptions) -> Result<OracleResult> {
    if pts.len() > opts.max_points {
        return Err(Error::TooLarge(pts.len(), opts.max_points));
    }
    let dom = Domain::get(g);
    let grp = dom.group.clone();
    let bits = opts.bits.unwrap_or(dom.cap());
    let reach = kernel::hyp_distance(&Cx::zero(), &dom.vertices[0]) + 2.0 * dom.systole;
    let mut lifted: Vec<(usize, Lifted)> = Vec::new();
    for e in double_ring(&grp) {
        for (i, p) in pts.iter().enumerate() {
            let l = Lifted::new(&grp, p.clone(), e);
            if kernel::hyp_distance(&Cx::zero(), &l.approx()) <= reach {
                lifted.push((i, l));
            }
        }
    }
    let approx: Vec<Cx<f64>> = lifted.iter().map(|(_, l)| l.approx()).collect();
    let grid = Grid::new(&approx, 0.05);
    let mut out = OracleResult::default();
    let mut buf = Vec::new();
    let mut near = Vec::new();
    for (pi, p) in pts.iter().enumerate() {
        let pc = Lifted::new(&grp, p.clone(), ElemId::IDENTITY);
        let pz = pc.approx();
        let mut rho = dom.systole / 2.0;
        loop {
            if rho > 4.0 * dom.systole {
                return Err(Error::Invariant("oracle neighborhood did not close".into()));
            }
            let (c, r) = hyperbolic_disk(&pz, rho);
            grid.disk(&c, r + 1e-9, &mut buf);
            let nb: Vec<usize> = buf
                .iter()
                .copied()
                .filter(|&j| !(lifted[j].0 == pi && lifted[j].1.elem.is_identity()))
                .filter(|&j| approx[j].dist(&c) <= r + 1e-9)
                .collect();
            let mut found: Vec<([usize; 2], bool, f64)> = Vec::new();
            for &q in &nb {
                for &s in &nb {
                    if q == s {
                        continue;
                    }
                    let (lq, ls) = (&lifted[q].1, &lifted[s].1);
                    if sign(&OrientExpr(&pc, lq, ls), bits) != Sign::Positive {
                        continue;
                    }
                    let Some((cc, cr)) = kernel::euclid_circumcircle(&pz, &approx[q], &approx[s]) else {
                        continue;
                    };
                    if cc.abs() + cr >= 1.0 {
                        continue;
                    }
                    grid.disk(&cc, cr + 1e-7, &mut near);
                    let mut empty = true;
                    let mut degenerate = false;
                    for &k in &near {
                        if k == q || k == s || (lifted[k].0 == pi && lifted[k].1.elem.is_identity()) {
                            continue;
                        }
                        if approx[k].dist(&cc) > cr + 1e-7 {
                            continue;
                        }
                        match sign(&InCircleExpr(&pc, lq, ls, &lifted[k].1), bits) {
                            Sign::Positive => {
                                empty = false;
                                break;
                            }
                            Sign::Zero => degenerate = true,
                            Sign::Negative => {}
                        }
                    }
                    if empty {
                        let d = kernel::circumdiameter(&pz, &approx[q], &approx[s]);
                        found.push(([q, s], degenerate, d));
                    }
                }
            }
            let angle: f64 = found
                .iter()
                .map(|(t, _, _)| {
                    let (u, v) = (approx[t[0]].clone() - pz.clone(), approx[t[1]].clone() - pz.clone());
                    u.cross(&v).atan2(u.dot(&v))
                })
                .sum();
            let widest = found.iter().map(|x| x.2).fold(0.0, f64::max);
            if angle < TAU - 1e-6 || widest > rho {
                rho *= 1.5;
                continue;
            }
            for ([q, s], deg, d) in found {
                let v = [pi, lifted[q].0, lifted[s].0];
                let t = [ElemId::IDENTITY, lifted[q].1.elem, lifted[s].1.elem];
                let f = canonical_face(&grp, v, t);
                out.faces.insert(f);
                if deg {
                    out.degenerate.insert(f);
                }
                out.max_diameter = out.max_diameter.max(d);
            }
            break;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct Comparison {
    pub missing: Vec<CanonFace>,
    pub extra: Vec<CanonFace>,
}

impl Comparison {
    pub fn equal(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    /// Equal up to the choice of diagonal in cocircular quadrilaterals.
    pub fn equal_up_to_degenerate(&self, oracle: &OracleResult) -> bool {
        self.extra.is_empty() && self.missing.iter().all(|f| oracle.degenerate.contains(f))
    }
}

/// Set difference between a triangulation's faces and the oracle's.
pub fn compare(tri: &Triangulation, oracle: &OracleResult) -> Result<Comparison> {
    let faces = tri.canonical_faces();
    let n = tri.stats().vertices;
    if oracle.faces.iter().any(|f| f.v.iter().any(|&i| i >= n)) {
        return Err(Error::VertexSetMismatch);
    }
    Ok(compare_sets(&faces, &oracle.faces))
}

pub fn compare_sets(ours: &BTreeSet<CanonFace>, theirs: &BTreeSet<CanonFace>) -> Comparison {
    Comparison {
        missing: theirs.difference(ours).copied().collect(),
        extra: ours.difference(theirs).copied().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dummy::bolza_table_dummy;

    #[test]
    fn table_faces() {
        let r = brute_delaunay(2, &bolza_table_dummy().exact_points()).unwrap();
        assert_eq!(r.faces.len(), 32);
        assert!(r.degenerate.is_empty());
        let tri = Triangulation::init(2, &bolza_table_dummy()).unwrap();
        assert!(compare(&tri, &r).unwrap().equal());
    }
}
