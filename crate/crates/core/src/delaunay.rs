//! Delaunay triangulation of a point set on the surface.
//!
//! Each face stores its three vertices, its three neighbors (`n[i]` opposite
//! `v[i]`) and the translations `t[i]` placing each vertex's canonical point
//! at the corresponding corner of the face's canonical representative.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{self, Mode, Sign};
use crate::group::{ElemId, Group};
use crate::kernel::{self, Cx, DiameterBelow, InCircleExpr, OrientExpr};
use crate::planar;
use crate::surface::{Domain, ExactPoint, Lifted, SurfacePoint};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FaceId(pub u32);

const NO_FACE: FaceId = FaceId(u32::MAX);

static CANON_TIES: AtomicU64 = AtomicU64::new(0);

/// Number of canonical-face selections decided by the vertex-index tie-break.
pub fn canonical_ties() -> u64 {
    CANON_TIES.load(Ordering::Relaxed)
}

/// A canonical face: vertex labels and translations, rotated to a fixed start.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonFace {
    pub v: [usize; 3],
    pub t: [ElemId; 3],
}

impl CanonFace {
    fn normalized(v: [usize; 3], t: [ElemId; 3]) -> CanonFace {
        let rot = |r: usize| CanonFace {
            v: [v[r], v[(r + 1) % 3], v[(r + 2) % 3]],
            t: [t[r], t[(r + 1) % 3], t[(r + 2) % 3]],
        };
        (0..3).map(rot).min().unwrap()
    }
}

/// Index of the first corner outside the original domain that follows a corner inside it.
fn first_out(t: &[ElemId; 3]) -> Option<usize> {
    (0..3).find(|&i| !t[i].is_identity() && t[(i + 2) % 3].is_identity())
}

/// The left factor `X` making `(X t_0, X t_1, X t_2)` the canonical representative.
pub fn canonical_shift(grp: &Group, v: &[usize; 3], t: &[ElemId; 3]) -> ElemId {
    let mut best: Option<((u32, u32, usize, usize, usize), ElemId)> = None;
    let mut tie = false;
    let mut seen: Vec<ElemId> = Vec::new();
    for j in 0..3 {
        let x = grp.inverse(t[j]);
        if seen.contains(&x) {
            continue;
        }
        seen.push(x);
        let c = [grp.compose(x, t[0]), grp.compose(x, t[1]), grp.compose(x, t[2])];
        let Some(f) = first_out(&c) else {
            return x;
        };
        let key = (c[f].0, c[(f + 1) % 3].0, v[f], v[(f + 1) % 3], v[(f + 2) % 3]);
        match &best {
            Some((k, _)) if key > *k => {}
            Some((k, _)) if key == *k => tie = true,
            Some((k, _)) if (key.0, key.1) == (k.0, k.1) => {
                tie = true;
                best = Some((key, x));
            }
            _ => {
                if let Some((k, _)) = &best {
                    tie = (key.0, key.1) == (k.0, k.1);
                }
                best = Some((key, x));
            }
        }
    }
    if tie {
        CANON_TIES.fetch_add(1, Ordering::Relaxed);
    }
    best.map(|(_, x)| x).unwrap_or(ElemId::IDENTITY)
}

/// Canonical representative of the lifted triangle with corners `t_i(v_i)`.
pub fn canonical_face(grp: &Group, v: [usize; 3], t: [ElemId; 3]) -> CanonFace {
    let x = canonical_shift(grp, &v, &t);
    let c = [grp.compose(x, t[0]), grp.compose(x, t[1]), grp.compose(x, t[2])];
    CanonFace::normalized(v, c)
}

#[derive(Clone, Debug)]
pub struct Vertex {
    pub point: ExactPoint,
    pub face: FaceId,
    pub dummy: bool,
    alive: bool,
}

#[derive(Clone, Debug)]
pub struct Face {
    pub v: [VertexId; 3],
    pub n: [FaceId; 3],
    pub t: [ElemId; 3],
    alive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stats {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub euler: i64,
    pub max_circumdiameter: f64,
    pub dummy_remaining: usize,
}

/// A triangulation of a finite point set on the genus-`g` surface.
#[derive(Clone)]
pub struct Triangulation {
    pub genus: u32,
    dom: Arc<Domain>,
    grp: Arc<Group>,
    verts: Vec<Vertex>,
    faces: Vec<Face>,
    free_faces: Vec<u32>,
    mode: Mode,
    hint: FaceId,
}

impl std::fmt::Debug for Triangulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Triangulation(g={}, {:?})", self.genus, self.stats_counts())
    }
}

struct Conflict {
    faces: Vec<(FaceId, ElemId)>,
    boundary: Vec<(VertexId, VertexId, FaceId, FaceId)>,
    temp: HashMap<VertexId, ElemId>,
}

impl Triangulation {
    /// Builds the triangulation of a valid dummy set with certified predicates.
    pub fn init(g: u32, dummy: &crate::dummy::DummySet) -> Result<Triangulation> {
        Self::init_with_mode(g, dummy, Mode::certified(g))
    }

    pub fn init_with_mode(g: u32, dummy: &crate::dummy::DummySet, mode: Mode) -> Result<Triangulation> {
        let pts: Vec<ExactPoint> = dummy.points.iter().map(|p| p.point.clone()).collect();
        let mut tri = Self::from_points(g, &pts, mode)?;
        for v in &mut tri.verts {
            v.dummy = true;
        }
        Ok(tri)
    }

    /// Triangulation of canonical points whose lifted Delaunay triangles are all admissible.
    pub fn from_points(g: u32, pts: &[ExactPoint], mode: Mode) -> Result<Triangulation> {
        let dom = Domain::get(g);
        let grp = dom.group.clone();
        let lifted = crate::dummy::lift(&grp, pts);
        let sites: Vec<Lifted> = lifted.iter().map(|(_, l)| l.clone()).collect();
        let build_mode = match mode {
            Mode::Fast => Mode::Fast,
            _ => Mode::Tolerant { cap: crate::arith::precision_cap(g) },
        };
        let planar = planar::triangulate(&sites, build_mode)?;
        let mut canon: BTreeSet<CanonFace> = BTreeSet::new();
        for t in &planar {
            let e = [lifted[t[0]].1.elem, lifted[t[1]].1.elem, lifted[t[2]].1.elem];
            if !e.iter().any(|x| x.is_identity()) {
                continue;
            }
            let v = [lifted[t[0]].0, lifted[t[1]].0, lifted[t[2]].0];
            canon.insert(canonical_face(&grp, v, e));
        }
        let mut tri = Triangulation {
            genus: g,
            dom: dom.clone(),
            grp: grp.clone(),
            verts: pts
                .iter()
                .map(|p| Vertex {
                    point: p.clone(),
                    face: NO_FACE,
                    dummy: false,
                    alive: true,
                })
                .collect(),
            faces: Vec::new(),
            free_faces: Vec::new(),
            mode,
            hint: FaceId(0),
        };
        for cf in &canon {
            let id = FaceId(tri.faces.len() as u32);
            tri.faces.push(Face {
                v: cf.v.map(|i| VertexId(i as u32)),
                n: [NO_FACE; 3],
                t: cf.t,
                alive: true,
            });
            for i in 0..3 {
                tri.verts[cf.v[i]].face = id;
            }
        }
        let mut edges: HashMap<(VertexId, VertexId, ElemId), (FaceId, usize)> = HashMap::new();
        for (fi, f) in tri.faces.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = ((i + 1) % 3, (i + 2) % 3);
                let d = grp.compose(grp.inverse(f.t[a]), f.t[b]);
                edges.insert((f.v[a], f.v[b], d), (FaceId(fi as u32), i));
            }
        }
        for fi in 0..tri.faces.len() {
            for i in 0..3 {
                let f = &tri.faces[fi];
                let (a, b) = ((i + 1) % 3, (i + 2) % 3);
                let d = grp.compose(grp.inverse(f.t[b]), f.t[a]);
                let key = (f.v[b], f.v[a], d);
                match edges.get(&key) {
                    Some(&(o, _)) => tri.faces[fi].n[i] = o,
                    None => return Err(Error::InvalidDummySet),
                }
            }
        }
        if tri.verts.iter().any(|v| v.face == NO_FACE) {
            return Err(Error::InvalidDummySet);
        }
        let st = tri.stats_counts();
        if st.3 != 2 - 2 * g as i64 {
            return Err(Error::InvalidDummySet);
        }
        Ok(tri)
    }

    pub fn group(&self) -> &Arc<Group> {
        &self.grp
    }

    pub fn domain(&self) -> &Arc<Domain> {
        &self.dom
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn set_mode(&mut self, mode: Mode) {
        self.mode = mode;
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.verts[v.0 as usize]
    }

    pub fn face(&self, f: FaceId) -> &Face {
        &self.faces[f.0 as usize]
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.verts
            .iter()
            .enumerate()
            .filter(|(_, v)| v.alive)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn face_ids(&self) -> impl Iterator<Item = FaceId> + '_ {
        self.faces
            .iter()
            .enumerate()
            .filter(|(_, f)| f.alive)
            .map(|(i, _)| FaceId(i as u32))
    }

    fn lifted(&self, v: VertexId, e: ElemId) -> Lifted {
        Lifted::new(&self.grp, self.verts[v.0 as usize].point.clone(), e)
    }

    fn corners(&self, f: FaceId, l: ElemId) -> [Lifted; 3] {
        let fc = &self.faces[f.0 as usize];
        [0, 1, 2].map(|i| self.lifted(fc.v[i], self.grp.compose(l, fc.t[i])))
    }

    /// `nbt(t′, t)`: the translation moving the canonical `t′` next to the canonical `t`.
    pub fn neighbor_translation(&self, tp: FaceId, t: FaceId) -> Result<ElemId> {
        let (a, b) = (&self.faces[tp.0 as usize], &self.faces[t.0 as usize]);
        let slot = (0..3).find(|&i| b.n[i] == tp).ok_or(Error::NotAdjacent)?;
        if !a.n.contains(&t) {
            return Err(Error::NotAdjacent);
        }
        let u = b.v[(slot + 1) % 3];
        let j = (0..3).find(|&i| a.v[i] == u).ok_or(Error::NotAdjacent)?;
        let k = (slot + 1) % 3;
        Ok(self.grp.compose(b.t[k], self.grp.inverse(a.t[j])))
    }

    /// `nbt` across edge `i` of `f`, for the neighbor stored there.
    fn nbt_across(&self, f: FaceId, i: usize) -> ElemId {
        let b = &self.faces[f.0 as usize];
        let n = b.n[i];
        let a = &self.faces[n.0 as usize];
        let k = (i + 1) % 3;
        let u = b.v[k];
        let ua = b.v[(i + 2) % 3];
        // The neighbor holds the edge reversed; pick the matching slot so
        // repeated vertices still resolve.
        let slot = (0..3)
            .find(|&s| a.n[s] == f && a.v[(s + 2) % 3] == u && a.v[(s + 1) % 3] == ua)
            .or_else(|| (0..3).find(|&s| a.n[s] == f))
            .unwrap();
        let j = (slot + 2) % 3;
        self.grp.compose(b.t[k], self.grp.inverse(a.t[j]))
    }

    fn orient(&self, p: &Lifted, q: &Lifted, r: &Lifted) -> Result<Sign> {
        Ok(self.mode.sign(&OrientExpr(p, q, r))?)
    }

    fn incircle(&self, c: &[Lifted; 3], s: &Lifted) -> Result<Sign> {
        Ok(self.mode.sign(&InCircleExpr(&c[0], &c[1], &c[2], s))?)
    }

    fn weak(&self) -> Mode {
        match self.mode {
            Mode::Fast => Mode::Fast,
            Mode::Certified { cap } | Mode::Tolerant { cap } => Mode::Tolerant { cap },
        }
    }

    fn orient_weak(&self, p: &Lifted, q: &Lifted, r: &Lifted) -> Result<Sign> {
        Ok(self.weak().sign(&OrientExpr(p, q, r))?)
    }

    fn incircle_weak(&self, c: &[Lifted; 3], s: &Lifted) -> Result<Sign> {
        Ok(self.weak().sign(&InCircleExpr(&c[0], &c[1], &c[2], s))?)
    }

    fn start_face(&self) -> FaceId {
        if self.faces.get(self.hint.0 as usize).is_some_and(|f| f.alive) {
            return self.hint;
        }
        self.face_ids().next().expect("nonempty triangulation")
    }

    /// Visibility walk; returns the face and location translation whose lift contains `p`.
    pub fn locate(&self, p: &SurfacePoint) -> Result<(FaceId, ElemId)> {
        let pl = Lifted::new(&self.grp, p.point.clone(), ElemId::IDENTITY);
        self.locate_lifted(&pl, self.start_face())
    }

    fn locate_lifted(&self, p: &Lifted, start: FaceId) -> Result<(FaceId, ElemId)> {
        let mut f = start;
        let mut l = ElemId::IDENTITY;
        let mut prev = NO_FACE;
        let cap = 4 * self.faces.len() + 16;
        'walk: for _ in 0..cap {
            let c = self.corners(f, l);
            for i in 0..3 {
                let n = self.faces[f.0 as usize].n[i];
                if n == prev {
                    continue;
                }
                if self.orient(&c[(i + 1) % 3], &c[(i + 2) % 3], p)? == Sign::Negative {
                    let nb = self.nbt_across(f, i);
                    l = self.grp.compose(l, nb);
                    prev = f;
                    f = n;
                    continue 'walk;
                }
            }
            if prev != NO_FACE {
                let back = (0..3).find(|&i| self.faces[f.0 as usize].n[i] == prev).unwrap();
                if self.orient(&c[(back + 1) % 3], &c[(back + 2) % 3], p)? == Sign::Negative {
                    let nb = self.nbt_across(f, back);
                    l = self.grp.compose(l, nb);
                    prev = f;
                    f = self.faces[f.0 as usize].n[back];
                    continue 'walk;
                }
            }
            return Ok((f, l));
        }
        Err(Error::WalkStuck)
    }

    fn conflict_region(&self, p: &Lifted, f0: FaceId, l0: ElemId) -> Result<Conflict> {
        let mut visited: HashMap<FaceId, Option<ElemId>> = HashMap::new();
        let mut faces = vec![(f0, l0)];
        visited.insert(f0, Some(l0));
        let c0 = self.corners(f0, l0);
        match self.incircle(&c0, p)? {
            Sign::Positive => {}
            Sign::Zero => return Err(Error::Cocircular),
            Sign::Negative => return Err(Error::Invariant("located face not in conflict".into())),
        }
        let mut i = 0;
        while i < faces.len() {
            let (f, l) = faces[i];
            i += 1;
            for e in 0..3 {
                let n = self.faces[f.0 as usize].n[e];
                if visited.contains_key(&n) {
                    continue;
                }
                let ln = self.grp.compose(l, self.nbt_across(f, e));
                let c = self.corners(n, ln);
                match self.incircle(&c, p)? {
                    Sign::Positive => {
                        visited.insert(n, Some(ln));
                        faces.push((n, ln));
                    }
                    Sign::Zero => return Err(Error::Cocircular),
                    Sign::Negative => {
                        visited.insert(n, None);
                    }
                }
            }
        }
        let mut boundary = Vec::new();
        let mut temp: HashMap<VertexId, ElemId> = HashMap::new();
        for &(f, l) in &faces {
            let fc = &self.faces[f.0 as usize];
            for i in 0..3 {
                let tv = self.grp.compose(l, fc.t[i]);
                if let Some(&old) = temp.get(&fc.v[i]) {
                    if old != tv {
                        return Err(Error::Invariant("conflict region is not a disk".into()));
                    }
                }
                temp.insert(fc.v[i], tv);
            }
            for e in 0..3 {
                let n = fc.n[e];
                if matches!(visited.get(&n), Some(Some(_))) {
                    continue;
                }
                boundary.push((fc.v[(e + 1) % 3], fc.v[(e + 2) % 3], n, f));
            }
        }
        Ok(Conflict { faces, boundary, temp })
    }

    fn alloc_face(&mut self, f: Face) -> FaceId {
        if let Some(i) = self.free_faces.pop() {
            self.faces[i as usize] = f;
            FaceId(i)
        } else {
            self.faces.push(f);
            FaceId(self.faces.len() as u32 - 1)
        }
    }

    fn canonicalize_face(&self, v: [VertexId; 3], t: [ElemId; 3]) -> [ElemId; 3] {
        let vi = v.map(|x| x.0 as usize);
        let x = canonical_shift(&self.grp, &vi, &t);
        t.map(|e| self.grp.compose(x, e))
    }

    /// Inserts a canonical point.
    pub fn insert(&mut self, p: &SurfacePoint) -> Result<VertexId> {
        self.insert_as(p, false)
    }

    /// Canonicalizes an arbitrary disk point and inserts it.
    pub fn insert_point(&mut self, p: &ExactPoint) -> Result<VertexId> {
        let (sp, _) = self.dom.canonicalize(p)?;
        self.insert(&sp)
    }

    /// Inserts points in Hilbert order; ids are returned in input order.
    pub fn insert_many(&mut self, pts: &[SurfacePoint]) -> Result<Vec<VertexId>> {
        let approx: Vec<Cx<f64>> = pts.iter().map(|p| p.approx()).collect();
        let mut ids = vec![VertexId(0); pts.len()];
        for i in planar::spatial_order(&approx) {
            ids[i] = self.insert(&pts[i])?;
        }
        Ok(ids)
    }

    pub fn insert_as(&mut self, p: &SurfacePoint, dummy: bool) -> Result<VertexId> {
        let pl = Lifted::new(&self.grp, p.point.clone(), ElemId::IDENTITY);
        let (f0, l0) = self.locate_lifted(&pl, self.start_face())?;
        let cap = self.dom.cap();
        let fc = self.faces[f0.0 as usize].clone();
        for i in 0..3 {
            if self.grp.compose(l0, fc.t[i]).is_identity() && self.verts[fc.v[i].0 as usize].point.same(&p.point, cap) {
                return Err(Error::DuplicatePoint);
            }
        }
        let conflict = self.conflict_region(&pl, f0, l0)?;
        let pid = VertexId(self.verts.len() as u32);
        self.verts.push(Vertex {
            point: p.point.clone(),
            face: NO_FACE,
            dummy,
            alive: true,
        });
        for &(f, _) in &conflict.faces {
            self.faces[f.0 as usize].alive = false;
        }
        let mut start_at: HashMap<VertexId, FaceId> = HashMap::new();
        let mut made = Vec::with_capacity(conflict.boundary.len());
        for &(a, b, outer, old) in &conflict.boundary {
            let t = [ElemId::IDENTITY, conflict.temp[&a], conflict.temp[&b]];
            let v = [pid, a, b];
            let t = self.canonicalize_face(v, t);
            let nf = self.alloc_face(Face {
                v,
                n: [outer, NO_FACE, NO_FACE],
                t,
                alive: true,
            });
            let o = &mut self.faces[outer.0 as usize];
            if let Some(s) = (0..3).find(|&s| o.n[s] == old) {
                o.n[s] = nf;
            }
            start_at.insert(a, nf);
            made.push((nf, a, b));
        }
        for &(nf, a, b) in &made {
            let next = *start_at.get(&b).ok_or_else(|| Error::Invariant("open boundary cycle".into()))?;
            self.faces[nf.0 as usize].n[1] = next;
            self.faces[next.0 as usize].n[2] = nf;
            self.verts[a.0 as usize].face = nf;
        }
        self.free_faces.extend(conflict.faces.iter().map(|(f, _)| f.0));
        self.verts[pid.0 as usize].face = made[0].0;
        self.hint = made[0].0;
        Ok(pid)
    }

    /// Faces around `v` in counterclockwise order, with the translation placing each so that `v` sits at its canonical point.
    fn star(&self, v: VertexId) -> Result<Vec<(FaceId, ElemId, usize)>> {
        let f0 = self.verts[v.0 as usize].face;
        let i0 = (0..3)
            .find(|&i| self.faces[f0.0 as usize].v[i] == v)
            .ok_or_else(|| Error::Invariant("vertex face pointer".into()))?;
        let l0 = self.grp.inverse(self.faces[f0.0 as usize].t[i0]);
        let mut out = vec![(f0, l0, i0)];
        let (mut f, mut l, mut i) = (f0, l0, i0);
        for _ in 0..self.faces.len() {
            let e = (i + 1) % 3;
            let n = self.faces[f.0 as usize].n[e];
            let ln = self.grp.compose(l, self.nbt_across(f, e));
            let fc = &self.faces[n.0 as usize];
            let j = (0..3)
                .find(|&j| fc.v[j] == v && self.grp.compose(ln, fc.t[j]).is_identity())
                .ok_or_else(|| Error::Invariant("star walk lost the vertex".into()))?;
            if n == f0 && j == i0 {
                return Ok(out);
            }
            out.push((n, ln, j));
            f = n;
            l = ln;
            i = j;
        }
        Err(Error::Invariant("star did not close".into()))
    }

    fn admissible(&self, c: &[Lifted; 3]) -> Result<bool> {
        let dom = self.dom.clone();
        let bound = move |prec: u32| dom.half_systole_big(prec);
        let e = DiameterBelow {
            pts: [&c[0], &c[1], &c[2]],
            bound: &bound,
            bound_f64: self.dom.systole / 2.0,
        };
        let m = match self.mode {
            Mode::Fast => Mode::Fast,
            _ => Mode::Certified { cap: self.dom.cap() },
        };
        Ok(matches!(m.sign(&e), Ok(Sign::Positive)))
    }

    /// Removes `v` when the retriangulated hole stays admissible.
    pub fn remove(&mut self, v: VertexId) -> Result<bool> {
        if !self.verts.get(v.0 as usize).is_some_and(|x| x.alive) {
            return Ok(false);
        }
        let star = self.star(v)?;
        let k = star.len();
        // Link polygon in counterclockwise order; entry s is the far edge of star face s.
        let mut poly: Vec<(VertexId, ElemId)> = Vec::with_capacity(k);
        let mut outer: Vec<(FaceId, FaceId)> = Vec::with_capacity(k);
        for &(f, l, i) in &star {
            let fc = &self.faces[f.0 as usize];
            let a = (i + 1) % 3;
            poly.push((fc.v[a], self.grp.compose(l, fc.t[a])));
            outer.push((fc.n[i], f));
        }
        let lifted: Vec<Lifted> = poly.iter().map(|&(u, e)| self.lifted(u, e)).collect();
        let tris = self.fill_polygon(&lifted)?;
        for t in &tris {
            let c = [lifted[t[0]].clone(), lifted[t[1]].clone(), lifted[t[2]].clone()];
            if !self.admissible(&c)? {
                return Ok(false);
            }
            let ids: HashSet<VertexId> = t.iter().map(|&x| poly[x].0).collect();
            if ids.len() < 3 {
                return Ok(false);
            }
        }
        // Commit.
        for &(f, _, _) in &star {
            self.faces[f.0 as usize].alive = false;
        }
        let mut new_ids = Vec::with_capacity(tris.len());
        for t in &tris {
            let vv = [poly[t[0]].0, poly[t[1]].0, poly[t[2]].0];
            let tt = self.canonicalize_face(vv, [poly[t[0]].1, poly[t[1]].1, poly[t[2]].1]);
            let id = self.alloc_face(Face {
                v: vv,
                n: [NO_FACE; 3],
                t: tt,
                alive: true,
            });
            new_ids.push(id);
        }
        // Polygon edge s goes from poly[s] to poly[s+1].
        let mut edge_owner: HashMap<(usize, usize), (FaceId, usize)> = HashMap::new();
        for (ti, t) in tris.iter().enumerate() {
            for i in 0..3 {
                edge_owner.insert((t[(i + 1) % 3], t[(i + 2) % 3]), (new_ids[ti], i));
            }
        }
        for (ti, t) in tris.iter().enumerate() {
            for i in 0..3 {
                let (a, b) = (t[(i + 1) % 3], t[(i + 2) % 3]);
                let nf = new_ids[ti];
                if let Some(&(o, _)) = edge_owner.get(&(b, a)) {
                    self.faces[nf.0 as usize].n[i] = o;
                } else if (a + 1) % k == b {
                    let (out, old) = outer[a];
                    self.faces[nf.0 as usize].n[i] = out;
                    let o = &mut self.faces[out.0 as usize];
                    if let Some(s) = (0..3).find(|&s| o.n[s] == old) {
                        o.n[s] = nf;
                    }
                } else {
                    return Err(Error::Invariant("hole triangulation misses an edge".into()));
                }
            }
            for i in 0..3 {
                self.verts[poly[t[i]].0 .0 as usize].face = new_ids[ti];
            }
        }
        for &(f, _, _) in &star {
            self.free_faces.push(f.0);
        }
        self.verts[v.0 as usize].alive = false;
        self.hint = new_ids[0];
        Ok(true)
    }

    /// Delaunay triangulation of a star-shaped polygon given counterclockwise.
    fn fill_polygon(&self, pts: &[Lifted]) -> Result<Vec<[usize; 3]>> {
        let k = pts.len();
        let mut idx: Vec<usize> = (0..k).collect();
        let mut tris: Vec<[usize; 3]> = Vec::new();
        let mut guard = 0;
        while idx.len() > 3 {
            guard += 1;
            if guard > 4 * k * k {
                return Err(Error::Invariant("ear clipping failed".into()));
            }
            let m = idx.len();
            let mut clipped = false;
            for s in 0..m {
                let (a, b, c) = (idx[(s + m - 1) % m], idx[s], idx[(s + 1) % m]);
                if self.orient_weak(&pts[a], &pts[b], &pts[c])? != Sign::Positive {
                    continue;
                }
                let mut empty = true;
                for &q in &idx {
                    if q == a || q == b || q == c {
                        continue;
                    }
                    let s1 = self.orient_weak(&pts[a], &pts[b], &pts[q])?;
                    let s2 = self.orient_weak(&pts[b], &pts[c], &pts[q])?;
                    let s3 = self.orient_weak(&pts[c], &pts[a], &pts[q])?;
                    if s1 != Sign::Negative && s2 != Sign::Negative && s3 != Sign::Negative {
                        empty = false;
                        break;
                    }
                }
                if empty {
                    tris.push([a, b, c]);
                    idx.remove(s);
                    clipped = true;
                    break;
                }
            }
            if !clipped {
                return Err(Error::Invariant("no ear in link polygon".into()));
            }
        }
        tris.push([idx[0], idx[1], idx[2]]);
        self.lawson(pts, &mut tris)?;
        Ok(tris)
    }

    fn lawson(&self, pts: &[Lifted], tris: &mut [[usize; 3]]) -> Result<()> {
        let k = pts.len();
        let boundary = |a: usize, b: usize| (a + 1) % k == b || (b + 1) % k == a;
        let mut changed = true;
        let mut rounds = 0;
        while changed {
            changed = false;
            rounds += 1;
            if rounds > 10 * k * k + 10 {
                return Err(Error::Invariant("flip loop".into()));
            }
            'outer: for x in 0..tris.len() {
                for i in 0..3 {
                    let (a, b) = (tris[x][(i + 1) % 3], tris[x][(i + 2) % 3]);
                    if boundary(a, b) {
                        continue;
                    }
                    let Some(y) = (0..tris.len()).find(|&y| {
                        y != x && (0..3).any(|j| tris[y][(j + 1) % 3] == b && tris[y][(j + 2) % 3] == a)
                    }) else {
                        continue;
                    };
                    let j = (0..3).find(|&j| tris[y][(j + 1) % 3] == b && tris[y][(j + 2) % 3] == a).unwrap();
                    let c = tris[x][i];
                    let d = tris[y][j];
                    let cc = [pts[c].clone(), pts[a].clone(), pts[b].clone()];
                    if self.incircle_weak(&cc, &pts[d])? != Sign::Positive {
                        continue;
                    }
                    if self.orient_weak(&pts[c], &pts[a], &pts[d])? != Sign::Positive
                        || self.orient_weak(&pts[d], &pts[b], &pts[c])? != Sign::Positive
                    {
                        continue;
                    }
                    tris[x] = [c, a, d];
                    tris[y] = [d, b, c];
                    changed = true;
                    break 'outer;
                }
            }
        }
        Ok(())
    }

    /// Attempts to remove every dummy vertex, repeating until nothing changes.
    pub fn remove_dummies(&mut self) -> Result<usize> {
        let mut count = 0;
        loop {
            let dummies: Vec<VertexId> = self
                .vertex_ids()
                .filter(|&v| self.verts[v.0 as usize].dummy)
                .collect();
            let mut pass = 0;
            for v in dummies {
                if self.remove(v)? {
                    pass += 1;
                }
            }
            count += pass;
            if pass == 0 {
                return Ok(count);
            }
        }
    }

    fn stats_counts(&self) -> (usize, usize, usize, i64) {
        let v = self.verts.iter().filter(|x| x.alive).count();
        let f = self.faces.iter().filter(|x| x.alive).count();
        let e = 3 * f / 2;
        (v, e, f, v as i64 - e as i64 + f as i64)
    }

    pub fn stats(&self) -> Stats {
        let (v, e, f, euler) = self.stats_counts();
        let mut maxd: f64 = 0.0;
        for fid in self.face_ids() {
            let c = self.corners(fid, ElemId::IDENTITY);
            let d = kernel::circumdiameter(&c[0].approx(), &c[1].approx(), &c[2].approx());
            maxd = maxd.max(d);
        }
        Stats {
            vertices: v,
            edges: e,
            faces: f,
            euler,
            max_circumdiameter: maxd,
            dummy_remaining: self.verts.iter().filter(|x| x.alive && x.dummy).count(),
        }
    }

    /// Canonical faces labelled by position in `vertex_ids()` order.
    pub fn canonical_faces(&self) -> BTreeSet<CanonFace> {
        let index: HashMap<VertexId, usize> = self.vertex_ids().enumerate().map(|(i, v)| (v, i)).collect();
        self.face_ids()
            .map(|f| {
                let fc = &self.faces[f.0 as usize];
                CanonFace::normalized(fc.v.map(|x| index[&x]), fc.t)
            })
            .collect()
    }

    pub fn points(&self) -> Vec<ExactPoint> {
        self.vertex_ids().map(|v| self.verts[v.0 as usize].point.clone()).collect()
    }

    /// Checks every structural invariant; the first failure is reported.
    pub fn check_invariants(&self) -> Result<()> {
        let g = self.genus;
        let (_, e, f, euler) = self.stats_counts();
        if euler != 2 - 2 * g as i64 || 3 * f != 2 * e {
            return Err(Error::Invariant(format!("euler {euler}, F={f}, E={e}")));
        }
        for fid in self.face_ids() {
            let fc = &self.faces[fid.0 as usize];
            if !fc.t.iter().any(|t| t.is_identity()) {
                return Err(Error::Invariant(format!("face {} has no canonical corner", fid.0)));
            }
            if fc.t.iter().any(|&t| !self.grp.in_n(t)) {
                return Err(Error::Invariant(format!("face {} translation outside N", fid.0)));
            }
            let x = self.canonicalize_face(fc.v, fc.t);
            if x != fc.t {
                return Err(Error::Invariant(format!("face {} is not canonical", fid.0)));
            }
            for i in 0..3 {
                let n = fc.n[i];
                let nf = self.faces.get(n.0 as usize).ok_or_else(|| Error::Invariant("dangling neighbor".into()))?;
                if !nf.alive || !nf.n.contains(&fid) {
                    return Err(Error::Invariant(format!("neighbor reciprocity at face {}", fid.0)));
                }
                let nb = self.nbt_across(fid, i);
                if !self.grp.in_n(nb) {
                    return Err(Error::Invariant(format!("neighbor translation outside N at face {}", fid.0)));
                }
                let c = self.corners(fid, ElemId::IDENTITY);
                let cn = self.corners(n, nb);
                let (a, b) = (&c[(i + 1) % 3], &c[(i + 2) % 3]);
                let shared = cn.iter().filter(|q| q.approx().dist(&a.approx()) < 1e-9 || q.approx().dist(&b.approx()) < 1e-9).count();
                if shared != 2 {
                    return Err(Error::Invariant(format!("neighbor does not share the edge at face {}", fid.0)));
                }
            }
            let c = self.corners(fid, ElemId::IDENTITY);
            if self.orient(&c[0], &c[1], &c[2])? != Sign::Positive {
                return Err(Error::Invariant(format!("face {} is not counterclockwise", fid.0)));
            }
            if !self.admissible(&c)? {
                return Err(Error::Invariant(format!("face {} is not admissible", fid.0)));
            }
        }
        for v in self.vertex_ids() {
            let fp = self.verts[v.0 as usize].face;
            if !self.faces[fp.0 as usize].alive || !self.faces[fp.0 as usize].v.contains(&v) {
                return Err(Error::Invariant(format!("vertex {} face pointer", v.0)));
            }
        }
        Ok(())
    }

    /// Serializable dump with decimal coordinates.
    pub fn to_json(&self, digits: usize) -> serde_json::Value {
        let index: HashMap<VertexId, usize> = self.vertex_ids().enumerate().map(|(i, v)| (v, i)).collect();
        let fidx: HashMap<FaceId, usize> = self.face_ids().enumerate().map(|(i, f)| (f, i)).collect();
        let vertices: Vec<serde_json::Value> = self
            .vertex_ids()
            .map(|v| {
                let vx = &self.verts[v.0 as usize];
                let (x, y) = crate::io::decimal_pair(&vx.point, digits);
                serde_json::json!({"x": x, "y": y, "dummy": vx.dummy})
            })
            .collect();
        let faces: Vec<serde_json::Value> = self
            .face_ids()
            .map(|f| {
                let fc = &self.faces[f.0 as usize];
                let t: Vec<Vec<u8>> = fc.t.iter().map(|&e| self.grp.word(e).to_vec()).collect();
                serde_json::json!({
                    "v": fc.v.map(|x| index[&x]),
                    "n": fc.n.map(|x| fidx[&x]),
                    "T": t,
                })
            })
            .collect();
        serde_json::json!({"genus": self.genus, "vertices": vertices, "faces": faces})
    }

    /// Deterministic fast-path sign statistics are global; this resets nothing.
    pub fn filter_stats(&self) -> arith::FilterStats {
        arith::filter_stats()
    }

    pub fn vertex_position(&self, v: VertexId) -> Cx<f64> {
        self.verts[v.0 as usize].point.approx()
    }

    /// The three corners of the canonical representative, as doubles.
    pub fn face_corners(&self, f: FaceId) -> [Cx<f64>; 3] {
        self.corners(f, ElemId::IDENTITY).map(|c| c.approx())
    }
}
