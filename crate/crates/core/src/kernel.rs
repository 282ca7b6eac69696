//! Poincaré disk primitives: complex numbers, Möbius maps, distances,
//! circles, geodesics and the two Euclidean predicates.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::arith::{Mode, PrecisionExhausted, Real, Ring, Sign, SignExpr};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T> Cx<T> {
    pub fn new(re: T, im: T) -> Self {
        Cx { re, im }
    }
}

impl<T: Ring> Cx<T> {
    pub fn zero() -> Self {
        Cx::new(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Cx::new(T::one(), T::zero())
    }

    pub fn conj(&self) -> Self {
        Cx::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm2(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn scale(&self, k: &T) -> Self {
        Cx::new(self.re.clone() * k.clone(), self.im.clone() * k.clone())
    }

    /// Real part of `self * conj(o)`, the Euclidean dot product.
    pub fn dot(&self, o: &Self) -> T {
        self.re.clone() * o.re.clone() + self.im.clone() * o.im.clone()
    }

    /// Imaginary part of `conj(self) * o`, the Euclidean cross product.
    pub fn cross(&self, o: &Self) -> T {
        self.re.clone() * o.im.clone() - self.im.clone() * o.re.clone()
    }
}

impl<T: Real> Cx<T> {
    pub fn from_f64(re: f64, im: f64, prec: u32) -> Self {
        Cx::new(T::from_f64(re, prec), T::from_f64(im, prec))
    }

    pub fn cis(theta: &T) -> Self {
        Cx::new(theta.cos(), theta.sin())
    }

    pub fn abs(&self) -> T {
        self.norm2().sqrt()
    }

    pub fn inv(&self) -> Self {
        let n = self.norm2();
        Cx::new(self.re.clone() / n.clone(), -self.im.clone() / n)
    }

    pub fn div(&self, o: &Self) -> Self {
        let n = o.norm2();
        let num = self.clone() * o.conj();
        Cx::new(num.re / n.clone(), num.im / n)
    }

    pub fn mid(&self) -> (f64, f64) {
        (self.re.mid(), self.im.mid())
    }

    pub fn to_f64(&self) -> Cx<f64> {
        Cx::new(self.re.mid(), self.im.mid())
    }
}

impl<T: Ring> Add for Cx<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}

impl<T: Ring> Sub for Cx<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}

impl<T: Ring> Mul for Cx<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let re = self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone();
        let im = self.re * o.im + self.im * o.re;
        Cx::new(re, im)
    }
}

impl<T: Ring> Neg for Cx<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Cx::new(-self.re, -self.im)
    }
}

impl Cx<f64> {
    pub fn dist(&self, o: &Self) -> f64 {
        (self.re - o.re).hypot(self.im - o.im)
    }

    pub fn arg(&self) -> f64 {
        self.im.atan2(self.re)
    }
}

/// Orientation-preserving disk isometry `z ↦ (a z + b) / (b̄ z + ā)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Moebius<T> {
    pub a: Cx<T>,
    pub b: Cx<T>,
}

impl<T: Real> Moebius<T> {
    pub fn new(a: Cx<T>, b: Cx<T>) -> Self {
        Moebius { a, b }
    }

    pub fn identity() -> Self {
        Moebius::new(Cx::one(), Cx::zero())
    }

    /// Rotation about the origin by `theta`.
    pub fn rotation(theta: &T) -> Self {
        let half = theta.clone() / T::from_f64(2.0, theta.precision());
        Moebius::new(Cx::cis(&half), Cx::zero())
    }

    pub fn apply(&self, z: &Cx<T>) -> Cx<T> {
        let num = self.a.clone() * z.clone() + self.b.clone();
        let den = self.b.conj() * z.clone() + self.a.conj();
        num.div(&den)
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        let a = self.a.clone() * o.a.clone() + self.b.clone() * o.b.conj();
        let b = self.a.clone() * o.b.clone() + self.b.clone() * o.a.conj();
        Moebius::new(a, b)
    }

    pub fn inverse(&self) -> Self {
        Moebius::new(self.a.conj(), -self.b.clone())
    }

    /// The representative with `Re a ≥ 0` when that sign is decided.
    pub fn normalized(self) -> Self {
        if self.a.re.sign() == Some(Sign::Negative) {
            Moebius::new(-self.a, -self.b)
        } else {
            self
        }
    }

    pub fn det(&self) -> T {
        self.a.norm2() - self.b.norm2()
    }

    pub fn trace(&self) -> T {
        self.a.re.clone() + self.a.re.clone()
    }

    /// `tr² > 4`, or `None` when undecided at this precision.
    pub fn is_hyperbolic(&self) -> Option<bool> {
        let t = self.trace();
        let four = T::from_f64(4.0, t.precision());
        (t.square() - four).sign().map(|s| s == Sign::Positive)
    }

    pub fn translation_length(&self) -> Result<T, Error> {
        match self.is_hyperbolic() {
            Some(true) => {
                let x = self.a.re.abs().acosh();
                Ok(x.clone() + x)
            }
            _ => Err(Error::NotHyperbolic),
        }
    }

    pub fn to_f64(&self) -> Moebius<f64> {
        Moebius::new(self.a.to_f64(), self.b.to_f64())
    }

    /// Largest entrywise deviation from `±identity`, as a double.
    pub fn identity_error(&self) -> f64 {
        let m = self.clone().normalized();
        let s = if m.a.re.mid() < 0.0 { -1.0 } else { 1.0 };
        let d = [m.a.re.mid() - s, m.a.im.mid(), m.b.re.mid(), m.b.im.mid()];
        let w = [&m.a.re, &m.a.im, &m.b.re, &m.b.im]
            .iter()
            .map(|x| width_of(*x))
            .fold(0.0f64, f64::max);
        d.iter().map(|x| x.abs()).fold(0.0f64, f64::max) + w
    }
}

fn width_of<T: Real>(x: &T) -> f64 {
    let z = x.clone() - x.clone();
    let h = z.abs().mid();
    if h.is_nan() {
        f64::INFINITY
    } else {
        2.0 * h
    }
}

/// Hyperbolic distance, `2 atanh(|p − q| / |1 − p̄ q|)`.
pub fn hyp_distance<T: Real>(p: &Cx<T>, q: &Cx<T>) -> T {
    let num = (p.clone() - q.clone()).abs();
    let den = (Cx::one() - p.conj() * q.clone()).abs();
    let t = (num / den).atanh();
    t.clone() + t
}

/// `cosh` of the hyperbolic distance, `1 + 2|p − q|² / ((1 − |p|²)(1 − |q|²))`.
pub fn cosh_distance<T: Real>(p: &Cx<T>, q: &Cx<T>) -> T {
    let d2 = (p.clone() - q.clone()).norm2();
    let den = (T::one() - p.norm2()) * (T::one() - q.norm2());
    let two = T::one() + T::one();
    T::one() + two * d2 / den
}

fn to_origin<T: Real>(p: &Cx<T>, z: &Cx<T>) -> Cx<T> {
    (z.clone() - p.clone()).div(&(Cx::one() - p.conj() * z.clone()))
}

fn from_origin<T: Real>(p: &Cx<T>, w: &Cx<T>) -> Cx<T> {
    (w.clone() + p.clone()).div(&(Cx::one() + p.conj() * w.clone()))
}

pub fn geodesic_midpoint<T: Real>(p: &Cx<T>, q: &Cx<T>) -> Cx<T> {
    let q1 = to_origin(p, q);
    let k = T::one() + (T::one() - q1.norm2()).sqrt();
    let m = Cx::new(q1.re.clone() / k.clone(), q1.im.clone() / k);
    from_origin(p, &m)
}

/// The point at hyperbolic distance `t` from `p` towards `q`.
pub fn point_along<T: Real>(p: &Cx<T>, q: &Cx<T>, t: &T) -> Cx<T> {
    let q1 = to_origin(p, q);
    let r = q1.abs();
    let half = t.clone() / T::from_f64(2.0, t.precision());
    let k = half.tanh() / r;
    from_origin(p, &q1.scale(&k))
}

/// Center of the circle through `p` and `q` orthogonal to the unit circle.
/// `None` when `O`, `p`, `q` are collinear at this precision.
pub fn orthogonal_center<T: Real>(p: &Cx<T>, q: &Cx<T>) -> Option<Cx<T>> {
    let det = p.cross(q);
    if det.sign().is_none_or(|s| s == Sign::Zero) {
        return None;
    }
    let two = T::from_f64(2.0, det.precision());
    let bp = (p.norm2() + T::one()) / two.clone();
    let bq = (q.norm2() + T::one()) / two;
    let x = (bp.clone() * q.im.clone() - bq.clone() * p.im.clone()) / det.clone();
    let y = (p.re.clone() * bq - q.re.clone() * bp) / det;
    Some(Cx::new(x, y))
}

/// Reflection across the geodesic through `p` and `q`.
pub fn reflect_geodesic<T: Real>(p: &Cx<T>, q: &Cx<T>, z: &Cx<T>) -> Cx<T> {
    match orthogonal_center(p, q) {
        Some(c) => {
            let r2 = c.norm2() - T::one();
            let w = (z.clone() - c.clone()).conj().inv().scale(&r2);
            c + w
        }
        None => {
            let d = if p.norm2().sign() == Some(Sign::Positive) { p.clone() } else { q.clone() };
            let u = d.clone() * d.clone();
            let n = d.norm2();
            let k = Cx::new(u.re / n.clone(), u.im / n);
            k * z.conj()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GeodesicArc {
    Segment { p: Cx<f64>, q: Cx<f64> },
    Arc { center: Cx<f64>, radius: f64, p: Cx<f64>, q: Cx<f64> },
}

pub fn geodesic_arc(p: &Cx<f64>, q: &Cx<f64>) -> Result<GeodesicArc, Error> {
    if p == q {
        return Err(Error::DegenerateEqualPoints);
    }
    let det = p.cross(q);
    let scale = (p.norm2() * q.norm2()).sqrt().max(1e-300);
    if det.abs() <= 1e-14 * scale || det == 0.0 {
        return Ok(GeodesicArc::Segment { p: p.clone(), q: q.clone() });
    }
    let c = orthogonal_center(p, q).ok_or(Error::DegenerateEqualPoints)?;
    let radius = (c.norm2() - 1.0).sqrt();
    Ok(GeodesicArc::Arc {
        center: c,
        radius,
        p: p.clone(),
        q: q.clone(),
    })
}

/// Euclidean and hyperbolic data of a circumcircle.
#[derive(Clone, Debug)]
pub struct Circum<T> {
    pub center: Cx<T>,
    pub radius: T,
    pub hyp_center: Cx<T>,
    pub hyp_radius: T,
}

impl<T: Real> Circum<T> {
    pub fn diameter(&self) -> T {
        self.hyp_radius.clone() + self.hyp_radius.clone()
    }
}

/// Euclidean circumcenter and radius; `None` when collinear at this precision.
pub fn euclid_circumcircle<T: Real>(p: &Cx<T>, q: &Cx<T>, r: &Cx<T>) -> Option<(Cx<T>, T)> {
    let b = q.clone() - p.clone();
    let c = r.clone() - p.clone();
    let d = b.cross(&c);
    if d.sign().is_none_or(|s| s == Sign::Zero) {
        return None;
    }
    let d2 = d.clone() + d;
    let bb = b.norm2();
    let cc = c.norm2();
    let ux = (c.im.clone() * bb.clone() - b.im.clone() * cc.clone()) / d2.clone();
    let uy = (b.re.clone() * cc - c.re.clone() * bb) / d2;
    let off = Cx::new(ux, uy);
    let radius = off.abs();
    Some((p.clone() + off, radius))
}

pub fn circumcircle<T: Real>(p: &Cx<T>, q: &Cx<T>, r: &Cx<T>) -> Result<Circum<T>, Error> {
    let (u, rad) = euclid_circumcircle(p, q, r).ok_or(Error::Collinear)?;
    let s = u.abs();
    if (s.clone() + rad.clone()).lt(&T::one()) != Some(true) {
        return Err(Error::NotInsideDisk);
    }
    let t1 = (s.clone() - rad.clone()).atanh();
    let t2 = (s.clone() + rad.clone()).atanh();
    let hyp_radius = t2.clone() - t1.clone();
    let hyp_center = if s.sign() == Some(Sign::Positive) {
        let two = T::from_f64(2.0, s.precision());
        let k = ((t1 + t2) / two).tanh() / s;
        u.scale(&k)
    } else {
        Cx::zero()
    };
    Ok(Circum {
        center: u,
        radius: rad,
        hyp_center,
        hyp_radius,
    })
}

/// Hyperbolic circumdiameter `2(atanh(s + r) − atanh(s − r))` for a triangle.
pub fn circumdiameter<T: Real>(p: &Cx<T>, q: &Cx<T>, r: &Cx<T>) -> T {
    match euclid_circumcircle(p, q, r) {
        Some((u, rad)) => {
            let s = u.abs();
            let t1 = (s.clone() - rad.clone()).atanh();
            let t2 = (s + rad).atanh();
            let d = t2 - t1;
            d.clone() + d
        }
        None => T::from_f64(f64::INFINITY, 53),
    }
}

pub fn orient_det<T: Ring>(p: &Cx<T>, q: &Cx<T>, r: &Cx<T>) -> T {
    let b = q.clone() - p.clone();
    let c = r.clone() - p.clone();
    b.cross(&c)
}

pub fn incircle_det<T: Ring>(p: &Cx<T>, q: &Cx<T>, r: &Cx<T>, s: &Cx<T>) -> T {
    let a = p.clone() - s.clone();
    let b = q.clone() - s.clone();
    let c = r.clone() - s.clone();
    let (na, nb, nc) = (a.norm2(), b.norm2(), c.norm2());
    na * b.cross(&c) - nb * a.cross(&c) + nc * a.cross(&b)
}

/// Anything that can produce its coordinates at a requested precision.
pub trait PointSource: Sync {
    fn at<T: Real>(&self, prec: u32) -> Cx<T>;
}

impl PointSource for Cx<f64> {
    fn at<T: Real>(&self, prec: u32) -> Cx<T> {
        Cx::new(T::from_f64(self.re, prec), T::from_f64(self.im, prec))
    }
}

impl<P: PointSource> PointSource for &P {
    fn at<T: Real>(&self, prec: u32) -> Cx<T> {
        (*self).at(prec)
    }
}

pub struct OrientExpr<'a, P>(pub &'a P, pub &'a P, pub &'a P);

impl<P: PointSource> SignExpr for OrientExpr<'_, P> {
    fn eval<T: Real>(&self, prec: u32) -> T {
        orient_det(&self.0.at(prec), &self.1.at(prec), &self.2.at(prec))
    }
}

pub struct InCircleExpr<'a, P>(pub &'a P, pub &'a P, pub &'a P, pub &'a P);

impl<P: PointSource> SignExpr for InCircleExpr<'_, P> {
    fn eval<T: Real>(&self, prec: u32) -> T {
        incircle_det(&self.0.at(prec), &self.1.at(prec), &self.2.at(prec), &self.3.at(prec))
    }
}

pub fn orientation<P: PointSource>(p: &P, q: &P, r: &P, mode: Mode) -> Result<Sign, PrecisionExhausted> {
    mode.sign(&OrientExpr(p, q, r))
}

/// `+1` when `s` is strictly inside the circle through the counterclockwise `p, q, r`.
pub fn incircle<P: PointSource>(p: &P, q: &P, r: &P, s: &P, mode: Mode) -> Result<Sign, Error> {
    if orientation(p, q, r, mode)? != Sign::Positive {
        return Err(Error::NotCounterClockwise);
    }
    Ok(mode.sign(&InCircleExpr(p, q, r, s))?)
}

/// Sign of `bound − circumdiameter(p, q, r)`; positive means admissible.
pub struct DiameterBelow<'a, P> {
    pub pts: [&'a P; 3],
    pub bound: &'a (dyn Fn(u32) -> crate::arith::BigInterval + Sync),
    pub bound_f64: f64,
}

impl<P: PointSource> SignExpr for DiameterBelow<'_, P> {
    fn eval<T: Real>(&self, prec: u32) -> T {
        let p: Cx<T> = self.pts[0].at(prec);
        let q: Cx<T> = self.pts[1].at(prec);
        let r: Cx<T> = self.pts[2].at(prec);
        let d = circumdiameter(&p, &q, &r);
        let b = if crate::arith::cast_ref::<T, f64>(&d).is_some() {
            T::from_f64(self.bound_f64, 53)
        } else {
            T::from_big(&(self.bound)(prec.max(64)))
        };
        b - d
    }
}

impl<T: Real> Zero for Cx<T> {
    fn zero() -> Self {
        Cx::new(T::zero(), T::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: Real> One for Cx<T> {
    fn one() -> Self {
        Cx::new(T::one(), T::zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{BigInterval, F64Interval};

    fn c(x: f64, y: f64) -> Cx<f64> {
        Cx::new(x, y)
    }

    #[test]
    fn predicates_small_cases() {
        let m = Mode::Certified { cap: 1024 };
        assert_eq!(orientation(&c(0., 0.), &c(0.5, 0.), &c(0., 0.5), m).unwrap(), Sign::Positive);
        assert_eq!(orientation(&c(0., 0.), &c(0.5, 0.), &c(0.9, 0.), m).unwrap(), Sign::Zero);
        assert_eq!(orientation(&c(0., 0.), &c(0., 0.5), &c(0.5, 0.), m).unwrap(), Sign::Negative);
        let (p, q, r) = (c(0.5, 0.), c(0., 0.5), c(-0.5, 0.));
        assert_eq!(incircle(&p, &q, &r, &c(0., -0.5), m).unwrap(), Sign::Zero);
        assert_eq!(incircle(&p, &q, &r, &c(0., 0.), m).unwrap(), Sign::Positive);
        assert_eq!(incircle(&p, &q, &r, &c(0., -0.9), m).unwrap(), Sign::Negative);
        assert!(matches!(incircle(&q, &p, &r, &c(0., 0.), m), Err(Error::NotCounterClockwise)));
    }

    #[test]
    fn centered_circumcircle() {
        let cc = circumcircle(&c(0.3, 0.), &c(-0.3, 0.), &c(0., 0.3)).unwrap();
        assert!(cc.center.re.abs() < 1e-15 && cc.center.im.abs() < 1e-15);
        assert!((cc.radius - 0.3).abs() < 1e-15);
        let want = (1.0f64 + 2.0 * 0.09 / 0.91).acosh();
        assert!((cc.hyp_radius - want).abs() < 1e-12);
        assert!((want - 0.6190).abs() < 1e-4);
    }

    #[test]
    fn circumcircle_equidistant() {
        let (p, q, r) = (c(0.1, 0.2), c(0.3, -0.2), c(-0.2, 0.3));
        let cc = circumcircle(&p, &q, &r).unwrap();
        for z in [&p, &q, &r] {
            assert!((hyp_distance(&cc.hyp_center, z) - cc.hyp_radius).abs() < 1e-10);
        }
        assert!(matches!(circumcircle(&c(0., 0.), &c(0.1, 0.), &c(0.2, 0.)), Err(Error::Collinear)));
        assert!(matches!(
            circumcircle(&c(0.9, 0.), &c(0.95, 0.1), &c(0.95, -0.1)),
            Err(Error::NotInsideDisk)
        ));
    }

    #[test]
    fn moebius_basics() {
        let f = Moebius::new(c(2.0f64.sqrt(), 0.0), c(0.6, 0.8));
        let z = c(0.3, -0.2);
        assert_eq!(Moebius::<f64>::identity().apply(&z), z);
        let back = f.inverse().apply(&f.apply(&z));
        assert!(back.dist(&z) < 1e-14);
        let g = Moebius::new(c(1.2, 0.3), c(0.5, -0.4));
        let g = {
            let d = g.det().sqrt();
            Moebius::new(Cx::new(g.a.re / d, g.a.im / d), Cx::new(g.b.re / d, g.b.im / d))
        };
        let lhs = f.compose(&g).apply(&z);
        let rhs = f.apply(&g.apply(&z));
        assert!(lhs.dist(&rhs) < 1e-14);
        let p = c(0.1, 0.7);
        let d0 = hyp_distance(&z, &p);
        let d1 = hyp_distance(&f.apply(&z), &f.apply(&p));
        assert!((d0 - d1).abs() < 1e-12);
        assert!(f.is_hyperbolic() == Some(true) || f.is_hyperbolic() == Some(false));
        let rot = Moebius::<f64>::rotation(&(std::f64::consts::PI / 4.0));
        assert_eq!(rot.is_hyperbolic(), Some(false));
        assert!(matches!(rot.translation_length(), Err(Error::NotHyperbolic)));
        assert_eq!(Moebius::<f64>::identity().is_hyperbolic(), Some(false));
    }

    #[test]
    fn distance_forms_agree() {
        let (p, q) = (c(0.2, -0.5), c(-0.6, 0.1));
        assert!((hyp_distance(&p, &q).cosh() - cosh_distance(&p, &q)).abs() < 1e-12);
        assert_eq!(hyp_distance(&p, &p), 0.0);
    }

    #[test]
    fn midpoint_and_along() {
        let (p, q) = (c(0.2, -0.5), c(-0.6, 0.1));
        let m = geodesic_midpoint(&p, &q);
        let d = hyp_distance(&p, &q);
        assert!((hyp_distance(&p, &m) - d / 2.0).abs() < 1e-12);
        assert!((hyp_distance(&q, &m) - d / 2.0).abs() < 1e-12);
        let a = point_along(&p, &q, &(d / 3.0));
        assert!((hyp_distance(&p, &a) - d / 3.0).abs() < 1e-12);
        assert!((hyp_distance(&a, &q) - 2.0 * d / 3.0).abs() < 1e-12);
    }

    #[test]
    fn reflection_is_isometric_involution() {
        let (p, q) = (c(0.3, 0.1), c(-0.2, 0.5));
        let z = c(0.05, -0.4);
        let w = reflect_geodesic(&p, &q, &z);
        let back = reflect_geodesic(&p, &q, &w);
        assert!(back.dist(&z) < 1e-13);
        assert!((hyp_distance(&p, &z) - hyp_distance(&p, &w)).abs() < 1e-12);
        assert!(reflect_geodesic(&p, &q, &p).dist(&p) < 1e-13);
        let r = reflect_geodesic(&c(0.5, 0.5), &c(-0.2, -0.2), &c(0.3, 0.0));
        assert!(r.dist(&c(0.0, 0.3)) < 1e-15);
    }

    #[test]
    fn arcs() {
        assert!(matches!(geodesic_arc(&c(0.5, 0.), &c(-0.2, 0.)).unwrap(), GeodesicArc::Segment { .. }));
        match geodesic_arc(&c(0.5, 0.), &c(0., 0.5)).unwrap() {
            GeodesicArc::Arc { center, radius, .. } => {
                assert!((center.norm2() - radius * radius - 1.0).abs() < 1e-12)
            }
            _ => panic!(),
        }
        assert!(matches!(geodesic_arc(&c(0.5, 0.), &c(0.5, 0.)), Err(Error::DegenerateEqualPoints)));
    }

    #[test]
    fn interval_types_enclose_f64() {
        let (p, q, r, s) = (c(0.1, 0.2), c(0.5, -0.3), c(-0.4, 0.6), c(0.0, 0.01));
        let f: f64 = InCircleExpr(&p, &q, &r, &s).eval(53);
        let fi: F64Interval = InCircleExpr(&p, &q, &r, &s).eval(53);
        let bi: BigInterval = InCircleExpr(&p, &q, &r, &s).eval(200);
        assert!(fi.lo() <= f && f <= fi.hi());
        assert!((bi.mid() - f).abs() < 1e-15);
    }
}
