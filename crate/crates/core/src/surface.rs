//! The regular 4g-gon, the half-open original domain, canonical points and
//! closed-form helpers (systole, bounds, separation lengths).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rug::Rational;

use crate::arith::{self, BigInterval, F64Interval, Mode, Real, Sign, SignExpr};
use crate::group::{ElemId, Group};
use crate::kernel::{hyp_distance, Cx, PointSource};
use crate::{Error, Result};

/// Named points whose coordinates are algebraic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Special {
    Origin,
    Vertex(u32),
    Midpoint(u32),
}

struct Lazy {
    f: Box<dyn Fn(u32) -> Cx<BigInterval> + Send + Sync>,
    cache: Mutex<HashMap<u32, Cx<BigInterval>>>,
}

impl Lazy {
    fn eval(&self, prec: u32) -> Cx<BigInterval> {
        if let Some(z) = self.cache.lock().unwrap().get(&prec) {
            return z.clone();
        }
        let z = (self.f)(prec);
        self.cache.lock().unwrap().insert(prec, z.clone());
        z
    }
}

#[derive(Clone)]
enum Coords {
    Rational(Arc<(Rational, Rational)>),
    Lazy(Arc<Lazy>),
}

/// A disk point with exact rational coordinates or an evaluator to any precision.
#[derive(Clone)]
pub struct ExactPoint {
    coords: Coords,
    approx: Cx<f64>,
    fi: Cx<F64Interval>,
    special: Option<(u32, Special)>,
}

impl fmt::Debug for ExactPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (&self.coords, self.special) {
            (_, Some((_, s))) => write!(f, "{:?}", s),
            (Coords::Rational(q), _) => write!(f, "({}, {})", q.0, q.1),
            (Coords::Lazy(_), _) => write!(f, "~({:.17}, {:.17})", self.approx.re, self.approx.im),
        }
    }
}

impl ExactPoint {
    pub fn rational(x: Rational, y: Rational) -> Self {
        let approx = Cx::new(x.to_f64(), y.to_f64());
        let fi = Cx::new(F64Interval::from_rational(&x, 53), F64Interval::from_rational(&y, 53));
        ExactPoint {
            coords: Coords::Rational(Arc::new((x, y))),
            approx,
            fi,
            special: None,
        }
    }

    /// The exact value of a pair of doubles.
    pub fn from_f64(x: f64, y: f64) -> Self {
        let q = |v: f64| Rational::from_f64(v).expect("finite coordinate");
        ExactPoint::rational(q(x), q(y))
    }

    pub fn lazy(f: impl Fn(u32) -> Cx<BigInterval> + Send + Sync + 'static) -> Self {
        let z = f(arith::FIRST_BIG_BITS);
        let fi = Cx::new(F64Interval::from_big(&z.re), F64Interval::from_big(&z.im));
        let approx = z.to_f64();
        ExactPoint {
            coords: Coords::Lazy(Arc::new(Lazy {
                f: Box::new(f),
                cache: Mutex::new(HashMap::new()),
            })),
            approx,
            fi,
            special: None,
        }
    }

    pub fn special(g: u32, s: Special) -> Self {
        if s == Special::Origin {
            let mut p = ExactPoint::rational(Rational::new(), Rational::new());
            p.special = Some((g, s));
            return p;
        }
        let mut p = ExactPoint::lazy(move |prec| special_coords::<BigInterval>(g, s, prec + 16));
        p.special = Some((g, s));
        p
    }

    pub fn origin() -> Self {
        ExactPoint::rational(Rational::new(), Rational::new())
    }

    pub fn approx(&self) -> Cx<f64> {
        self.approx.clone()
    }

    pub fn as_rational(&self) -> Option<&(Rational, Rational)> {
        match &self.coords {
            Coords::Rational(q) => Some(q),
            Coords::Lazy(_) => None,
        }
    }

    pub fn special_tag(&self) -> Option<Special> {
        if let Some((_, s)) = self.special {
            return Some(s);
        }
        match &self.coords {
            Coords::Rational(q) if q.0.cmp0().is_eq() && q.1.cmp0().is_eq() => Some(Special::Origin),
            _ => None,
        }
    }

    pub fn is_origin(&self) -> bool {
        self.special_tag() == Some(Special::Origin)
    }

    /// Image under `e`; exact when `e` is the identity.
    pub fn transformed(&self, grp: &Arc<Group>, e: ElemId) -> ExactPoint {
        if e.is_identity() {
            return self.clone();
        }
        let base = self.clone();
        let gg = grp.clone();
        let fi = grp.matrix::<F64Interval>(e, 53).apply(&self.fi);
        let mut p = ExactPoint::lazy(move |prec| {
            let z: Cx<BigInterval> = base.at(prec);
            gg.matrix_big(e, prec).apply(&z)
        });
        if fi.re.width() < p.fi.re.width() && fi.im.width() < p.fi.im.width() {
            p.fi = fi;
        }
        p
    }

    /// Rounds to dyadic rationals with `bits` significant bits.
    pub fn rounded(&self, bits: u32) -> ExactPoint {
        match &self.coords {
            Coords::Rational(_) => self.clone(),
            Coords::Lazy(l) => {
                let z = l.eval(bits + 64);
                ExactPoint::rational(z.re.mid_rational(bits), z.im.mid_rational(bits))
            }
        }
    }

    /// Exact coordinate comparison; ambiguity at `cap` bits counts as equal.
    pub fn same(&self, o: &ExactPoint, cap: u32) -> bool {
        if let (Some(a), Some(b)) = (self.special, o.special) {
            if a == b {
                return true;
            }
        }
        if self.approx.dist(&o.approx) > 1e-9 {
            return false;
        }
        if let (Coords::Rational(a), Coords::Rational(b)) = (&self.coords, &o.coords) {
            return a.0 == b.0 && a.1 == b.1;
        }
        struct D<'a>(&'a ExactPoint, &'a ExactPoint, bool);
        impl SignExpr for D<'_> {
            fn eval<T: Real>(&self, prec: u32) -> T {
                let a: Cx<T> = self.0.at(prec);
                let b: Cx<T> = self.1.at(prec);
                if self.2 {
                    a.re - b.re
                } else {
                    a.im - b.im
                }
            }
        }
        let zx = Mode::Tolerant { cap }.sign(&D(self, o, true)).unwrap_or(Sign::Zero);
        let zy = Mode::Tolerant { cap }.sign(&D(self, o, false)).unwrap_or(Sign::Zero);
        zx == Sign::Zero && zy == Sign::Zero
    }
}

impl PointSource for ExactPoint {
    fn at<T: Real>(&self, prec: u32) -> Cx<T> {
        if let Some(z) = arith::cast_ref::<Cx<f64>, Cx<T>>(&self.approx) {
            return z.clone();
        }
        if let Some(z) = arith::cast_ref::<Cx<F64Interval>, Cx<T>>(&self.fi) {
            return z.clone();
        }
        match &self.coords {
            Coords::Rational(q) => Cx::new(T::from_rational(&q.0, prec), T::from_rational(&q.1, prec)),
            Coords::Lazy(l) => {
                let z = l.eval(prec);
                Cx::new(T::from_big(&z.re), T::from_big(&z.im))
            }
        }
    }
}

/// A canonical point placed in the plane by a group element.
#[derive(Clone)]
pub struct Lifted {
    pub point: ExactPoint,
    pub elem: ElemId,
    grp: Arc<Group>,
    approx: Cx<f64>,
    fi: Cx<F64Interval>,
}

impl fmt::Debug for Lifted {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}@{}", self.point, self.elem.0)
    }
}

impl Lifted {
    pub fn new(grp: &Arc<Group>, point: ExactPoint, elem: ElemId) -> Self {
        let (approx, fi) = if elem.is_identity() {
            (point.approx.clone(), point.fi.clone())
        } else {
            let el = grp.element(elem);
            (el.m64.apply(&point.approx), el.mfi.apply(&point.fi))
        };
        Lifted {
            point,
            elem,
            grp: grp.clone(),
            approx,
            fi,
        }
    }

    pub fn approx(&self) -> Cx<f64> {
        self.approx.clone()
    }
}

impl PointSource for Lifted {
    fn at<T: Real>(&self, prec: u32) -> Cx<T> {
        if let Some(z) = arith::cast_ref::<Cx<f64>, Cx<T>>(&self.approx) {
            return z.clone();
        }
        if let Some(z) = arith::cast_ref::<Cx<F64Interval>, Cx<T>>(&self.fi) {
            return z.clone();
        }
        if self.elem.is_identity() {
            return self.point.at(prec);
        }
        let m = self.grp.matrix::<T>(self.elem, prec);
        m.apply(&self.point.at(prec))
    }
}

/// Per-genus constants at the requested precision.
pub struct Consts<T> {
    pub pi: T,
    /// `cot(π/4g)`
    pub c: T,
    /// Euclidean radius of the vertices.
    pub rv: T,
    /// Euclidean radius of the side midpoints.
    pub rm: T,
    /// Distance from `O` to the side circle centers.
    pub rho: T,
}

pub fn consts<T: Real>(g: u32, prec: u32) -> Consts<T> {
    let pi = T::pi(prec);
    let q = pi.clone() / T::from_i64(4 * g as i64, prec);
    let c = q.cos() / q.sin();
    let one = T::one();
    let c2 = c.square();
    let rv = ((c2.clone() - one.clone()) / (c2.clone() + one.clone())).sqrt();
    let rm = ((c.clone() - one.clone()) / (c.clone() + one.clone())).sqrt();
    let rho = c.clone() / (c2 - one).sqrt();
    Consts { pi, c, rv, rm, rho }
}

fn angle<T: Real>(pi: &T, num: i64, den: i64, prec: u32) -> T {
    pi.clone() * T::from_i64(num, prec) / T::from_i64(den, prec)
}

pub fn special_coords<T: Real>(g: u32, s: Special, prec: u32) -> Cx<T> {
    let k = consts::<T>(g, prec);
    match s {
        Special::Origin => Cx::new(T::zero(), T::zero()),
        Special::Vertex(j) => {
            let th = angle(&k.pi, 2 * j as i64 - 1, 4 * g as i64, prec);
            Cx::cis(&th).scale(&k.rv)
        }
        Special::Midpoint(j) => {
            let th = angle(&k.pi, j as i64, 2 * g as i64, prec);
            Cx::cis(&th).scale(&k.rm)
        }
    }
}

/// `|p|² + 1 − 2ρ(x cos θ_k + y sin θ_k)`; positive on the polygon side of side `k`.
pub fn side_value<T: Real>(g: u32, k: u32, p: &Cx<T>, prec: u32) -> T {
    let c = consts::<T>(g, prec);
    let th = angle(&c.pi, k as i64, 2 * g as i64, prec);
    let two = T::from_f64(2.0, prec);
    p.norm2() + T::one() - two * c.rho * (p.re.clone() * th.cos() + p.im.clone() * th.sin())
}

struct SideExpr<'a, P> {
    g: u32,
    k: u32,
    p: &'a P,
}

impl<P: PointSource> SignExpr for SideExpr<'_, P> {
    fn eval<T: Real>(&self, prec: u32) -> T {
        side_value(self.g, self.k, &self.p.at(prec), prec)
    }
}

/// Point `p` seen through `m`, evaluated on demand.
struct Mapped<'a> {
    grp: &'a Group,
    e: ElemId,
    p: &'a ExactPoint,
}

impl PointSource for Mapped<'_> {
    fn at<T: Real>(&self, prec: u32) -> Cx<T> {
        if self.e.is_identity() {
            return self.p.at(prec);
        }
        let m = self.grp.matrix::<T>(self.e, prec);
        m.apply(&self.p.at(prec))
    }
}

/// The fundamental polygon of genus `g` with cached constants.
pub struct Domain {
    pub g: u32,
    pub group: Arc<Group>,
    pub c: f64,
    pub vertices: Vec<Cx<f64>>,
    pub midpoints: Vec<Cx<f64>>,
    pub side_centers: Vec<Cx<f64>>,
    pub side_radius: f64,
    pub systole: f64,
    half_sys_big: Mutex<HashMap<u32, BigInterval>>,
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Domain(g={})", self.g)
    }
}

impl Domain {
    pub fn get(g: u32) -> Arc<Domain> {
        static R: OnceLock<Mutex<HashMap<u32, Arc<Domain>>>> = OnceLock::new();
        let r = R.get_or_init(|| Mutex::new(HashMap::new()));
        let mut r = r.lock().unwrap();
        r.entry(g).or_insert_with(|| Arc::new(Domain::build(g))).clone()
    }

    fn build(g: u32) -> Domain {
        let group = Group::get(g);
        let k = consts::<f64>(g, 53);
        let n = 4 * g;
        let vertices = (0..n).map(|j| special_coords::<f64>(g, Special::Vertex(j), 53)).collect();
        let midpoints = (0..n).map(|j| special_coords::<f64>(g, Special::Midpoint(j), 53)).collect();
        let side_centers = (0..n)
            .map(|j| {
                let th = std::f64::consts::PI * j as f64 / (2 * g) as f64;
                Cx::new(k.rho * th.cos(), k.rho * th.sin())
            })
            .collect();
        Domain {
            g,
            group,
            c: k.c,
            vertices,
            midpoints,
            side_centers,
            side_radius: (k.rho * k.rho - 1.0).sqrt(),
            systole: systole(g),
            half_sys_big: Mutex::new(HashMap::new()),
        }
    }

    pub fn n_sides(&self) -> u32 {
        4 * self.g
    }

    pub fn cap(&self) -> u32 {
        arith::precision_cap(self.g)
    }

    /// `½ς` enclosed at `prec` bits.
    pub fn half_systole_big(&self, prec: u32) -> BigInterval {
        let mut m = self.half_sys_big.lock().unwrap();
        m.entry(prec).or_insert_with(|| half_systole_t::<BigInterval>(self.g, prec)).clone()
    }

    pub fn side_f64(&self, k: u32, p: &Cx<f64>) -> f64 {
        let c = &self.side_centers[k as usize];
        (p.clone() - c.clone()).norm2() - self.side_radius * self.side_radius
    }

    fn side_sign(&self, k: u32, p: &impl PointSource) -> Sign {
        Mode::Tolerant { cap: self.cap() }
            .sign(&SideExpr { g: self.g, k, p })
            .unwrap_or(Sign::Zero)
    }

    /// Membership in the half-open original domain.
    pub fn contains_original(&self, p: &ExactPoint) -> bool {
        if let Some((g, s)) = p.special {
            if g == self.g {
                return match s {
                    Special::Origin => true,
                    Special::Vertex(k) => k == 0,
                    Special::Midpoint(k) => k >= 2 * self.g,
                };
            }
        }
        self.classify(p).is_some_and(|z| self.owned(&z))
    }

    /// `None` when outside the closed polygon, else the sides the point lies on.
    fn classify(&self, p: &impl PointSource) -> Option<Vec<u32>> {
        let approx: Cx<f64> = p.at(53);
        let mut zeros = Vec::new();
        for k in 0..self.n_sides() {
            let v = self.side_f64(k, &approx);
            if v < -1e-6 {
                return None;
            }
            if v > 1e-6 {
                continue;
            }
            match self.side_sign(k, p) {
                Sign::Negative => return None,
                Sign::Zero => zeros.push(k),
                Sign::Positive => {}
            }
        }
        Some(zeros)
    }

    fn owned(&self, zeros: &[u32]) -> bool {
        let n = self.n_sides();
        match zeros {
            [] => true,
            [k] => *k >= 2 * self.g,
            [a, b] => *a == 0 && *b == n - 1,
            _ => false,
        }
    }

    /// Canonical representative `q` and `w` with `w(q) = p`.
    pub fn canonicalize(&self, p: &ExactPoint) -> Result<(SurfacePoint, ElemId)> {
        let grp = &self.group;
        if let Some((g, s)) = p.special {
            if g == self.g {
                match s {
                    Special::Origin => return Ok((self.surface(p.clone()), ElemId::IDENTITY)),
                    Special::Vertex(0) => return Ok((self.surface(p.clone()), ElemId::IDENTITY)),
                    Special::Vertex(k) => {
                        let v0 = &self.vertices[0];
                        let vk = &self.vertices[k as usize];
                        for e in grp.neighbors() {
                            if grp.m64(e).apply(v0).dist(vk) < 1e-9 {
                                let q = ExactPoint::special(self.g, Special::Vertex(0));
                                return Ok((self.surface(q), e));
                            }
                        }
                        return Err(Error::Invariant("vertex orbit not found in N".into()));
                    }
                    Special::Midpoint(k) if k < 2 * self.g => {
                        let q = ExactPoint::special(self.g, Special::Midpoint(k + 2 * self.g));
                        return Ok((self.surface(q), grp.intern(&[k as u8])));
                    }
                    Special::Midpoint(_) => return Ok((self.surface(p.clone()), ElemId::IDENTITY)),
                }
            }
        }
        let limit = 10 * grp.n_len();
        let mut w = ElemId::IDENTITY;
        for _ in 0..limit {
            let winv = grp.inverse(w);
            let cur = Mapped { grp, e: winv, p };
            let approx: Cx<f64> = cur.at(53);
            let mut worst: Option<(f64, u32)> = None;
            for k in 0..self.n_sides() {
                let v = self.side_f64(k, &approx);
                if v < 0.0 && worst.is_none_or(|(b, _)| v < b) {
                    worst = Some((v, k));
                }
            }
            let step = match worst {
                Some((v, k)) if v < -1e-6 => Some(k),
                _ => match self.classify(&cur) {
                    None => {
                        let mut best: Option<(f64, u32)> = None;
                        for k in 0..self.n_sides() {
                            let v = self.side_f64(k, &approx);
                            if self.side_sign(k, &cur) == Sign::Negative && best.is_none_or(|(b, _)| v < b) {
                                best = Some((v, k));
                            }
                        }
                        best.map(|(_, k)| k)
                    }
                    Some(z) if self.owned(&z) => {
                        let q = if z.len() == 2 {
                            ExactPoint::special(self.g, Special::Vertex(0))
                        } else {
                            p.transformed(grp, winv)
                        };
                        return Ok((self.surface(q), w));
                    }
                    Some(z) if z.len() == 1 => Some(z[0]),
                    Some(z) if z.len() == 2 => {
                        let n = self.n_sides();
                        let j = if z[0] == 0 && z[1] == n - 1 { 0 } else { z[1] };
                        let (vq, e) = self.canonicalize(&ExactPoint::special(self.g, Special::Vertex(j)))?;
                        return Ok((vq, grp.compose(w, e)));
                    }
                    Some(_) => return Err(Error::Invariant("point on three sides".into())),
                },
            };
            let Some(k) = step else {
                return Err(Error::Invariant("canonicalization found no violated side".into()));
            };
            w = grp.compose(w, grp.intern(&[k as u8]));
        }
        Err(Error::Invariant("canonicalization step cap exceeded".into()))
    }

    fn surface(&self, point: ExactPoint) -> SurfacePoint {
        SurfacePoint { genus: self.g, point }
    }

    /// `O`, `v_0` and `m_{2g}..m_{4g−1}`.
    pub fn weierstrass_points(&self) -> Vec<SurfacePoint> {
        let g = self.g;
        let mut out = vec![
            self.surface(ExactPoint::special(g, Special::Origin)),
            self.surface(ExactPoint::special(g, Special::Vertex(0))),
        ];
        for k in 2 * g..4 * g {
            out.push(self.surface(ExactPoint::special(g, Special::Midpoint(k))));
        }
        out
    }

    /// Surface distance between canonical points, `min_{w∈N} d(p, w q)`.
    pub fn surface_distance(&self, p: &Cx<f64>, q: &Cx<f64>) -> f64 {
        self.group
            .neighbors()
            .map(|e| hyp_distance(p, &self.group.m64(e).apply(q)))
            .fold(f64::INFINITY, f64::min)
    }

    /// The two geodesic segments `[m_{2g}, m_{2g+1}]` and `[m_0, m_1]`.
    pub fn systolic_segments(&self) -> [(Cx<f64>, Cx<f64>); 2] {
        let g = 2 * self.g as usize;
        [
            (self.midpoints[g].clone(), self.midpoints[g + 1].clone()),
            (self.midpoints[0].clone(), self.midpoints[1].clone()),
        ]
    }
}

/// A point of the surface, stored by its canonical representative.
#[derive(Clone, Debug)]
pub struct SurfacePoint {
    pub genus: u32,
    pub point: ExactPoint,
}

impl SurfacePoint {
    pub fn new(g: u32, p: ExactPoint) -> Result<(SurfacePoint, ElemId)> {
        Domain::get(g).canonicalize(&p)
    }

    pub fn approx(&self) -> Cx<f64> {
        self.point.approx()
    }
}

pub fn half_systole_t<T: Real>(g: u32, prec: u32) -> T {
    let pi = T::pi(prec + 16);
    let x = (pi / T::from_i64(2 * g as i64, prec)).cos();
    (T::one() + x.clone() + x).acosh()
}

/// `ς_g = 2 acosh(1 + 2 cos(π/2g))`.
pub fn systole(g: u32) -> f64 {
    2.0 * (1.0 + 2.0 * (std::f64::consts::PI / (2 * g) as f64).cos()).acosh()
}

/// `2 acosh(cot(π/4g)·sin(kπ/4g))`.
pub fn min_separation_length(g: u32, k: u32) -> f64 {
    let q = std::f64::consts::PI / (4 * g) as f64;
    2.0 * ((1.0 / q.tan()) * (k as f64 * q).sin()).acosh()
}

/// `π − 6 arccot(√3 cosh R)`.
pub fn triangle_area_bound(r: f64) -> f64 {
    std::f64::consts::PI - 6.0 * (1.0 / (3f64.sqrt() * r.cosh())).atan()
}

/// Lower and upper bounds on the size of a valid dummy set.
pub fn dummy_count_bounds(g: u32) -> (f64, f64) {
    let s = systole(g);
    let gm = 2.0 * (g as f64 - 1.0);
    let upper = gm / ((s / 8.0).cosh() - 1.0);
    let lower = (std::f64::consts::PI / triangle_area_bound(s / 4.0) - 1.0) * gm;
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn systole_values() {
        assert!(((systole(2) / 2.0).cosh() - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((systole(3) - 2.0 * (1.0 + 3f64.sqrt()).acosh()).abs() < 1e-12);
        assert!((systole(1_000_000) - 2.0 * 3f64.acosh()).abs() < 1e-6);
    }

    #[test]
    fn domain_distances() {
        let d = Domain::get(2);
        let o = Cx::new(0.0, 0.0);
        assert!((hyp_distance(&o, &d.vertices[0]) - 2.448452447678076).abs() < 1e-12);
        assert!((hyp_distance(&o, &d.midpoints[0]) - systole(2) / 2.0).abs() < 1e-12);
        assert!(d.midpoints[0].im.abs() < 1e-15 && d.midpoints[0].re > 0.0);
        for k in 0..8 {
            let v = &d.vertices[k];
            assert!(d.side_f64(k as u32, v).abs() < 1e-12);
            let km1 = (k + 7) % 8;
            assert!(d.side_f64(km1 as u32, v).abs() < 1e-12);
            assert!(d.side_f64(k as u32, &d.midpoints[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn ownership() {
        let d = Domain::get(2);
        assert!(d.contains_original(&ExactPoint::origin()));
        assert!(d.contains_original(&ExactPoint::special(2, Special::Vertex(0))));
        assert!(!d.contains_original(&ExactPoint::special(2, Special::Vertex(1))));
        assert!(!d.contains_original(&ExactPoint::special(2, Special::Midpoint(0))));
        assert!(d.contains_original(&ExactPoint::special(2, Special::Midpoint(4))));
        let untagged = ExactPoint::lazy(|p| special_coords::<BigInterval>(2, Special::Midpoint(5), p + 16));
        assert!(d.contains_original(&untagged));
        let untagged = ExactPoint::lazy(|p| special_coords::<BigInterval>(2, Special::Midpoint(1), p + 16));
        assert!(!d.contains_original(&untagged));
    }

    #[test]
    fn canonicalize_image_of_origin() {
        let d = Domain::get(2);
        let grp = &d.group;
        let f0 = grp.intern(&[0]);
        let p = ExactPoint::origin().transformed(grp, f0);
        let (q, w) = d.canonicalize(&p).unwrap();
        assert!(q.approx().norm2() < 1e-24);
        assert_eq!(w, f0);
        let (q, w) = d.canonicalize(&ExactPoint::special(2, Special::Vertex(1))).unwrap();
        assert_eq!(q.point.special_tag(), Some(Special::Vertex(0)));
        assert!(grp.m64(w).apply(&d.vertices[0]).dist(&d.vertices[1]) < 1e-12);
    }

    #[test]
    fn bounds() {
        let (lo, hi) = dummy_count_bounds(2);
        assert!((27.05..=27.07).contains(&hi));
        assert!((7.7..7.76).contains(&lo));
        let (lo, _) = dummy_count_bounds(1_000_000);
        assert!((5.698..=5.700).contains(&(lo / 999_999.0)));
        assert!(triangle_area_bound(0.0).abs() < 1e-15);
        assert!((triangle_area_bound(1.0) - 0.993418432870995).abs() < 1e-12);
    }

    #[test]
    fn separation_lengths() {
        assert!((min_separation_length(2, 4) - systole(2)).abs() < 1e-12);
        assert!((min_separation_length(2, 2) - 2.2568).abs() < 1e-4);
    }
}
