//! The group of the generalized Bolza surface: generators, relators,
//! Dehn reduction and an interning registry of elements.
//!
//! Elements are interned per genus. Id 0 is the identity and ids
//! `1..|N|` enumerate the neighbor translations in counterclockwise order,
//! so an element's rank in `N` is its id.

use std::any::Any;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use smallvec::SmallVec;

use crate::arith::{BigInterval, F64Interval, Real, Sign};
use crate::kernel::{Cx, Moebius};

/// Letters over `0..4g`; letter `k` is `f_k` and `k + 2g` is its inverse.
pub type Word = SmallVec<[u8; 16]>;

pub fn inverse_letter(g: u32, k: u8) -> u8 {
    ((k as u32 + 2 * g) % (4 * g)) as u8
}

pub fn inverse_word(g: u32, w: &[u8]) -> Word {
    w.iter().rev().map(|&k| inverse_letter(g, k)).collect()
}

/// `f_k f_{k+1}^{-1} f_{k+2} f_{k+3}^{-1} ⋯`, of length `4g`.
pub fn relator(g: u32, k: u32) -> Word {
    let n = 4 * g;
    (0..n)
        .map(|j| {
            let l = if j % 2 == 0 { k + j } else { k + j + 2 * g };
            (l % n) as u8
        })
        .collect()
}

pub fn free_reduce(g: u32, w: &[u8]) -> Word {
    let mut out = Word::new();
    for &k in w {
        if out.last().is_some_and(|&l| l == inverse_letter(g, k)) {
            out.pop();
        } else {
            out.push(k);
        }
    }
    out
}

/// Dehn's algorithm over all rotations of all relators and their inverses.
#[derive(Clone, Debug)]
pub struct Dehn {
    g: u32,
    patterns: Vec<Word>,
}

impl Dehn {
    pub fn new(g: u32) -> Self {
        let n = 4 * g as usize;
        let mut patterns: Vec<Word> = Vec::new();
        for k in 0..4 * g {
            let r = relator(g, k);
            for base in [r.clone(), inverse_word(g, &r)] {
                for s in 0..n {
                    let rot: Word = (0..n).map(|j| base[(s + j) % n]).collect();
                    if !patterns.contains(&rot) {
                        patterns.push(rot);
                    }
                }
            }
        }
        Dehn { g, patterns }
    }

    pub fn reduce(&self, w: &[u8]) -> Word {
        let g = self.g;
        let half = 2 * g as usize;
        let mut w = free_reduce(g, w);
        loop {
            let mut best: Option<(usize, usize, usize)> = None;
            for i in 0..w.len() {
                if w.len() - i <= half {
                    break;
                }
                for (pi, p) in self.patterns.iter().enumerate() {
                    let l = w[i..].iter().zip(p.iter()).take_while(|(a, b)| a == b).count();
                    if l > half && best.is_none_or(|(_, bl, _)| l > bl) {
                        best = Some((i, l, pi));
                    }
                }
            }
            let Some((i, l, pi)) = best else { break };
            let rest = inverse_word(g, &self.patterns[pi][l..]);
            let mut next = Word::new();
            next.extend_from_slice(&w[..i]);
            next.extend_from_slice(&rest);
            next.extend_from_slice(&w[i + l..]);
            w = free_reduce(g, &next);
        }
        w
    }
}

/// `A_j`: `a = cot(π/4g)`, `b = √(a² − 1)·e^{ijπ/2g}`.
pub fn generator_matrix<T: Real>(g: u32, j: u32, prec: u32) -> Moebius<T> {
    let pi = T::pi(prec);
    let q = pi.clone() / T::from_i64(4 * g as i64, prec);
    let a = q.cos() / q.sin();
    let s = (a.square() - T::one()).sqrt();
    let theta = pi * T::from_i64(j as i64, prec) / T::from_i64(2 * g as i64, prec);
    let b = Cx::cis(&theta).scale(&s);
    Moebius::new(Cx::new(a, T::zero()), b)
}

pub fn word_to_moebius<T: Real>(g: u32, w: &[u8], prec: u32) -> Moebius<T> {
    let mut m = Moebius::identity();
    for &k in w {
        m = m.compose(&generator_matrix(g, k as u32, prec));
    }
    m
}

/// The `4g` prefixes `h_1..h_{4g}` of relator `k`, Dehn-reduced; `h_{4g} = ε`.
pub fn vertex_neighbors(g: u32, k: u32) -> Vec<Word> {
    let d = Dehn::new(g);
    let r = relator(g, k);
    (1..=4 * g as usize).map(|j| d.reduce(&r[..j])).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemId(pub u32);

impl ElemId {
    pub const IDENTITY: ElemId = ElemId(0);

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

pub struct Element {
    pub word: Word,
    pub m64: Moebius<f64>,
    pub mfi: Moebius<F64Interval>,
    big: Mutex<HashMap<u32, Moebius<BigInterval>>>,
}

type Key = [i64; 4];

const KEY_STEP: f64 = 1e-6;

fn key_of(m: &Moebius<f64>) -> Key {
    [m.a.re, m.a.im, m.b.re, m.b.im].map(|x| (x / KEY_STEP).round() as i64)
}

fn close(a: &Moebius<f64>, b: &Moebius<f64>) -> bool {
    let scale = 1.0 + a.a.re.abs().max(b.a.re.abs());
    let d = [a.a.re - b.a.re, a.a.im - b.a.im, a.b.re - b.b.re, a.b.im - b.b.im];
    d.iter().all(|x| x.abs() < 1e-5 * scale)
}

fn cast<A: Clone + 'static, B: Clone + 'static>(a: &A) -> Option<B> {
    (a as &dyn Any).downcast_ref::<B>().cloned()
}

/// Interned elements of the group of genus `g`.
pub struct Group {
    g: u32,
    dehn: Dehn,
    elems: RwLock<Vec<Arc<Element>>>,
    index: RwLock<HashMap<Key, Vec<u32>>>,
    compose_memo: RwLock<HashMap<(u32, u32), u32>>,
    inverse_memo: RwLock<HashMap<u32, u32>>,
    gens_big: Mutex<HashMap<u32, Arc<Vec<Moebius<BigInterval>>>>>,
    n_len: usize,
}

impl std::fmt::Debug for Group {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Group(g={}, |N|={})", self.g, self.n_len)
    }
}

fn registry() -> &'static Mutex<HashMap<u32, Arc<Group>>> {
    static R: OnceLock<Mutex<HashMap<u32, Arc<Group>>>> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

impl Group {
    /// The shared instance for genus `g`.
    pub fn get(g: u32) -> Arc<Group> {
        assert!((2..=64).contains(&g), "genus out of range");
        let mut r = registry().lock().unwrap();
        r.entry(g).or_insert_with(|| Arc::new(Group::build(g))).clone()
    }

    fn build(g: u32) -> Group {
        let dehn = Dehn::new(g);
        let mut found: Vec<(Word, Moebius<f64>)> = Vec::new();
        for k in 0..4 * g {
            let r = relator(g, k);
            for j in 1..=4 * g as usize {
                let w = dehn.reduce(&r[..j]);
                if w.is_empty() {
                    continue;
                }
                let m = word_to_moebius::<f64>(g, &w, 53).normalized();
                if !found.iter().any(|(_, f)| close(f, &m)) {
                    found.push((w, m));
                }
            }
        }
        let first: Word = (0..2 * g).map(|j| ((j * (2 * g + 1)) % (4 * g)) as u8).collect();
        let first = dehn.reduce(&first);
        let fm = word_to_moebius::<f64>(g, &first, 53).normalized();
        let img = |m: &Moebius<f64>| m.b.div(&m.a.conj());
        let start = img(&fm).arg();
        let tau = std::f64::consts::TAU;
        let mut keyed: Vec<(f64, f64, Word, Moebius<f64>)> = found
            .into_iter()
            .map(|(w, m)| {
                let z = img(&m);
                let mut ang = (z.arg() - start).rem_euclid(tau);
                if ang > tau - 1e-9 {
                    ang = 0.0;
                }
                (ang, z.norm2(), w, m)
            })
            .collect();
        keyed.sort_by(|a, b| {
            let (ka, kb) = ((a.0 * 1e8).round() as i64, (b.0 * 1e8).round() as i64);
            ka.cmp(&kb).then(a.1.total_cmp(&b.1))
        });
        let grp = Group {
            g,
            dehn,
            elems: RwLock::new(Vec::new()),
            index: RwLock::new(HashMap::new()),
            compose_memo: RwLock::new(HashMap::new()),
            inverse_memo: RwLock::new(HashMap::new()),
            gens_big: Mutex::new(HashMap::new()),
            n_len: keyed.len() + 1,
        };
        grp.push(Word::new());
        for (_, _, w, _) in keyed {
            grp.push(w);
        }
        grp
    }

    fn push(&self, w: Word) -> ElemId {
        let m64 = word_to_moebius::<f64>(self.g, &w, 53).normalized();
        let mfi = word_to_moebius::<F64Interval>(self.g, &w, 53);
        let el = Arc::new(Element {
            word: w,
            m64: m64.clone(),
            mfi,
            big: Mutex::new(HashMap::new()),
        });
        let mut elems = self.elems.write().unwrap();
        let id = elems.len() as u32;
        elems.push(el);
        self.index.write().unwrap().entry(key_of(&m64)).or_default().push(id);
        ElemId(id)
    }

    pub fn genus(&self) -> u32 {
        self.g
    }

    pub fn dehn(&self) -> &Dehn {
        &self.dehn
    }

    /// `|N|` including the identity.
    pub fn n_len(&self) -> usize {
        self.n_len
    }

    pub fn in_n(&self, e: ElemId) -> bool {
        (e.0 as usize) < self.n_len
    }

    /// The neighbor translations, identity first.
    pub fn neighbors(&self) -> impl Iterator<Item = ElemId> {
        (0..self.n_len as u32).map(ElemId)
    }

    pub fn element(&self, e: ElemId) -> Arc<Element> {
        self.elems.read().unwrap()[e.0 as usize].clone()
    }

    pub fn word(&self, e: ElemId) -> Word {
        self.element(e).word.clone()
    }

    pub fn m64(&self, e: ElemId) -> Moebius<f64> {
        self.element(e).m64.clone()
    }

    fn lookup(&self, m: &Moebius<f64>) -> Option<ElemId> {
        let k = key_of(m);
        let index = self.index.read().unwrap();
        let elems = self.elems.read().unwrap();
        if let Some(ids) = index.get(&k) {
            for &id in ids {
                if close(&elems[id as usize].m64, m) {
                    return Some(ElemId(id));
                }
            }
        }
        for d0 in -1..=1 {
            for d1 in -1..=1 {
                for d2 in -1..=1 {
                    for d3 in -1..=1 {
                        let kk = [k[0] + d0, k[1] + d1, k[2] + d2, k[3] + d3];
                        if let Some(ids) = index.get(&kk) {
                            for &id in ids {
                                if close(&elems[id as usize].m64, m) {
                                    return Some(ElemId(id));
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Interns the element named by `w`.
    pub fn intern(&self, w: &[u8]) -> ElemId {
        let w = self.dehn.reduce(w);
        let m = word_to_moebius::<f64>(self.g, &w, 53).normalized();
        if let Some(id) = self.lookup(&m) {
            return id;
        }
        let _guard = self.gens_big.lock().unwrap();
        if let Some(id) = self.lookup(&m) {
            return id;
        }
        self.push(w)
    }

    /// `a ∘ b`.
    pub fn compose(&self, a: ElemId, b: ElemId) -> ElemId {
        if a.is_identity() {
            return b;
        }
        if b.is_identity() {
            return a;
        }
        if let Some(&c) = self.compose_memo.read().unwrap().get(&(a.0, b.0)) {
            return ElemId(c);
        }
        let mut w = self.element(a).word.clone();
        w.extend_from_slice(&self.element(b).word);
        let c = self.intern(&w);
        self.compose_memo.write().unwrap().insert((a.0, b.0), c.0);
        c
    }

    pub fn inverse(&self, a: ElemId) -> ElemId {
        if a.is_identity() {
            return a;
        }
        if let Some(&c) = self.inverse_memo.read().unwrap().get(&a.0) {
            return ElemId(c);
        }
        let w = inverse_word(self.g, &self.element(a).word);
        let c = self.intern(&w);
        let mut memo = self.inverse_memo.write().unwrap();
        memo.insert(a.0, c.0);
        memo.insert(c.0, a.0);
        c
    }

    fn generators_big(&self, prec: u32) -> Arc<Vec<Moebius<BigInterval>>> {
        let mut gb = self.gens_big.lock().unwrap();
        gb.entry(prec)
            .or_insert_with(|| {
                let p = prec + 32;
                Arc::new(
                    (0..4 * self.g)
                        .map(|j| {
                            let m = generator_matrix::<BigInterval>(self.g, j, p);
                            Moebius::new(
                                Cx::new(m.a.re.with_prec(prec), m.a.im.with_prec(prec)),
                                Cx::new(m.b.re.with_prec(prec), m.b.im.with_prec(prec)),
                            )
                        })
                        .collect(),
                )
            })
            .clone()
    }

    pub fn matrix_big(&self, e: ElemId, prec: u32) -> Moebius<BigInterval> {
        let el = self.element(e);
        if let Some(m) = el.big.lock().unwrap().get(&prec) {
            return m.clone();
        }
        let gens = self.generators_big(prec);
        let mut m = Moebius::new(
            Cx::new(BigInterval::from_f64(1.0, prec), BigInterval::from_f64(0.0, prec)),
            Cx::new(BigInterval::from_f64(0.0, prec), BigInterval::from_f64(0.0, prec)),
        );
        for &k in &el.word {
            m = m.compose(&gens[k as usize]);
        }
        el.big.lock().unwrap().insert(prec, m.clone());
        m
    }

    /// The matrix of `e` in the scalar type `T`.
    pub fn matrix<T: Real>(&self, e: ElemId, prec: u32) -> Moebius<T> {
        let el = self.element(e);
        if let Some(m) = cast::<Moebius<f64>, Moebius<T>>(&el.m64) {
            return m;
        }
        if let Some(m) = cast::<Moebius<F64Interval>, Moebius<T>>(&el.mfi) {
            return m;
        }
        let mb = self.matrix_big(e, prec);
        if let Some(m) = cast::<Moebius<BigInterval>, Moebius<T>>(&mb) {
            return m;
        }
        word_to_moebius(self.g, &el.word, prec)
    }

    /// Certified `tr² > 4` via the precision ladder.
    pub fn is_hyperbolic(&self, e: ElemId, cap: u32) -> Option<bool> {
        if let Some(h) = self.element(e).mfi.is_hyperbolic() {
            return Some(h);
        }
        for p in crate::arith::rungs(cap) {
            if let Some(h) = self.matrix_big(e, p).is_hyperbolic() {
                return Some(h);
            }
        }
        None
    }

    /// Image of the origin under `e`, as doubles.
    pub fn image_of_origin(&self, e: ElemId) -> Cx<f64> {
        let m = &self.element(e).m64;
        m.b.div(&m.a.conj())
    }

    pub fn len(&self) -> usize {
        self.elems.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Sign helper used by tests: `Re a` of the f64 matrix.
    pub fn trace_sign(&self, e: ElemId) -> Sign {
        Sign::of_f64(self.element(e).m64.a.re)
    }
}
