//! Euclidean Bowyer–Watson triangulation of points in the plane.
//!
//! Conflicts are strict (`incircle > 0`) so cocircular inputs still yield a
//! triangulation; which diagonal is chosen then depends on insertion order.

use std::collections::HashMap;

use crate::arith::{Mode, Real, Sign};
use crate::kernel::{Cx, InCircleExpr, OrientExpr, PointSource};
use crate::surface::{ExactPoint, Lifted};
use crate::Result;

/// A point with a cheap double approximation.
pub trait Site: PointSource {
    fn approx(&self) -> Cx<f64>;
}

impl Site for Cx<f64> {
    fn approx(&self) -> Cx<f64> {
        self.clone()
    }
}

impl Site for ExactPoint {
    fn approx(&self) -> Cx<f64> {
        ExactPoint::approx(self)
    }
}

impl Site for Lifted {
    fn approx(&self) -> Cx<f64> {
        Lifted::approx(self)
    }
}

enum V<'a, S> {
    Real(&'a S),
    Super(Cx<f64>),
}

impl<S: Site> PointSource for V<'_, S> {
    fn at<T: Real>(&self, prec: u32) -> Cx<T> {
        match self {
            V::Real(s) => s.at(prec),
            V::Super(z) => z.at(prec),
        }
    }
}

impl<S: Site> V<'_, S> {
    fn approx(&self) -> Cx<f64> {
        match self {
            V::Real(s) => s.approx(),
            V::Super(z) => z.clone(),
        }
    }
}

const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct Tri {
    v: [u32; 3],
    n: [u32; 3],
    dead: bool,
}

fn hilbert(x: u32, y: u32, order: u32) -> u64 {
    let (mut x, mut y) = (x as u64, y as u64);
    let mut d = 0u64;
    let mut s = 1u64 << (order - 1);
    while s > 0 {
        let rx = ((x & s) > 0) as u64;
        let ry = ((y & s) > 0) as u64;
        d += s * s * ((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = s.wrapping_mul(2).wrapping_sub(1).wrapping_sub(x) & (2 * s - 1);
                y = s.wrapping_mul(2).wrapping_sub(1).wrapping_sub(y) & (2 * s - 1);
            }
            std::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

/// Indices of `pts` sorted along a Hilbert curve over `[-1, 1]²`.
pub fn spatial_order(pts: &[Cx<f64>]) -> Vec<usize> {
    let q = |v: f64| (((v.clamp(-1.0, 1.0) + 1.0) * 0.5) * 65535.0) as u32;
    let mut idx: Vec<(u64, usize)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| (hilbert(q(p.re), q(p.im), 16), i))
        .collect();
    idx.sort_unstable();
    idx.into_iter().map(|(_, i)| i).collect()
}

struct Builder<'a, S> {
    verts: Vec<V<'a, S>>,
    tris: Vec<Tri>,
    free: Vec<u32>,
    mode: Mode,
    last: u32,
}

impl<'a, S: Site> Builder<'a, S> {
    fn orient(&self, a: u32, b: u32, c: u32) -> Result<Sign> {
        let (pa, pb, pc) = (&self.verts[a as usize], &self.verts[b as usize], &self.verts[c as usize]);
        Ok(self.mode.sign(&OrientExpr(pa, pb, pc))?)
    }

    fn incircle(&self, t: u32, p: u32) -> Result<Sign> {
        let v = self.tris[t as usize].v;
        let q = |i: u32| &self.verts[i as usize];
        Ok(self.mode.sign(&InCircleExpr(q(v[0]), q(v[1]), q(v[2]), q(p)))?)
    }

    fn alloc(&mut self, t: Tri) -> u32 {
        if let Some(i) = self.free.pop() {
            self.tris[i as usize] = t;
            i
        } else {
            self.tris.push(t);
            (self.tris.len() - 1) as u32
        }
    }

    fn locate(&self, p: u32) -> Result<u32> {
        let mut t = self.last;
        let mut prev = NONE;
        let limit = 4 * self.tris.len() + 16;
        for _ in 0..limit {
            let tri = &self.tris[t as usize];
            let mut moved = false;
            for e in 0..3 {
                let nb = tri.n[e];
                if nb == NONE || nb == prev {
                    continue;
                }
                let (a, b) = (tri.v[(e + 1) % 3], tri.v[(e + 2) % 3]);
                if self.orient(a, b, p)? == Sign::Negative {
                    prev = t;
                    t = nb;
                    moved = true;
                    break;
                }
            }
            if !moved {
                let tri = &self.tris[t as usize];
                let mut inside = true;
                for e in 0..3 {
                    let (a, b) = (tri.v[(e + 1) % 3], tri.v[(e + 2) % 3]);
                    if self.orient(a, b, p)? == Sign::Negative {
                        inside = false;
                    }
                }
                if inside {
                    return Ok(t);
                }
                prev = NONE;
                let tri = &self.tris[t as usize];
                for e in 0..3 {
                    let (a, b) = (tri.v[(e + 1) % 3], tri.v[(e + 2) % 3]);
                    if tri.n[e] != NONE && self.orient(a, b, p)? == Sign::Negative {
                        t = tri.n[e];
                        break;
                    }
                }
            }
        }
        // Fall back to a scan.
        for (i, tri) in self.tris.iter().enumerate() {
            if tri.dead {
                continue;
            }
            let mut inside = true;
            for e in 0..3 {
                let (a, b) = (tri.v[(e + 1) % 3], tri.v[(e + 2) % 3]);
                if self.orient(a, b, p)? == Sign::Negative {
                    inside = false;
                    break;
                }
            }
            if inside {
                return Ok(i as u32);
            }
        }
        Err(crate::Error::WalkStuck)
    }

    fn insert(&mut self, p: u32) -> Result<bool> {
        let t0 = self.locate(p)?;
        let pz = self.verts[p as usize].approx();
        for &v in &self.tris[t0 as usize].v {
            if self.verts[v as usize].approx().dist(&pz) == 0.0 {
                return Ok(false);
            }
        }
        let mut cavity = vec![t0];
        let mut mark: HashMap<u32, bool> = HashMap::new();
        mark.insert(t0, true);
        let mut i = 0;
        while i < cavity.len() {
            let t = cavity[i];
            i += 1;
            for e in 0..3 {
                let nb = self.tris[t as usize].n[e];
                if nb == NONE || mark.contains_key(&nb) {
                    continue;
                }
                let hit = self.incircle(nb, p)? == Sign::Positive;
                mark.insert(nb, hit);
                if hit {
                    cavity.push(nb);
                }
            }
        }
        let mut boundary = Vec::new();
        for &t in &cavity {
            let tri = self.tris[t as usize].clone();
            for e in 0..3 {
                let nb = tri.n[e];
                if nb != NONE && mark.get(&nb) == Some(&true) {
                    continue;
                }
                boundary.push((tri.v[(e + 1) % 3], tri.v[(e + 2) % 3], nb, t));
            }
        }
        for &t in &cavity {
            self.tris[t as usize].dead = true;
        }
        let mut start: HashMap<u32, u32> = HashMap::new();
        let mut made = Vec::with_capacity(boundary.len());
        for &(a, b, outer, old) in &boundary {
            let nt = self.alloc(Tri {
                v: [p, a, b],
                n: [outer, NONE, NONE],
                dead: false,
            });
            if outer != NONE {
                let o = &mut self.tris[outer as usize];
                for s in 0..3 {
                    if o.n[s] == old {
                        o.n[s] = nt;
                    }
                }
            }
            start.insert(a, nt);
            made.push((nt, a, b));
        }
        for &(nt, a, b) in &made {
            let next = start[&b];
            self.tris[nt as usize].n[1] = next;
            self.tris[next as usize].n[2] = nt;
            let _ = a;
        }
        self.free.extend(cavity);
        self.last = made[0].0;
        Ok(true)
    }
}

/// Delaunay triangles of `pts` as counterclockwise index triples.
pub fn triangulate<S: Site>(pts: &[S], mode: Mode) -> Result<Vec<[usize; 3]>> {
    let n = pts.len();
    let mut verts: Vec<V<'_, S>> = pts.iter().map(V::Real).collect();
    verts.push(V::Super(Cx::new(-20.0, -20.0)));
    verts.push(V::Super(Cx::new(20.0, -20.0)));
    verts.push(V::Super(Cx::new(0.0, 20.0)));
    let s = n as u32;
    let mut b = Builder {
        verts,
        tris: vec![Tri {
            v: [s, s + 1, s + 2],
            n: [NONE; 3],
            dead: false,
        }],
        free: Vec::new(),
        mode,
        last: 0,
    };
    let approx: Vec<Cx<f64>> = pts.iter().map(|p| p.approx()).collect();
    for i in spatial_order(&approx) {
        b.insert(i as u32)?;
    }
    Ok(b
        .tris
        .iter()
        .filter(|t| !t.dead && t.v.iter().all(|&v| v < s))
        .map(|t| [t.v[0] as usize, t.v[1] as usize, t.v[2] as usize])
        .collect())
}
