#![allow(dead_code)]

use std::collections::HashMap;

use hypdt::group::generator_matrix;
use hypdt::kernel::{hyp_distance, Cx, Moebius};
use hypdt::Domain;

fn key(z: &Cx<f64>) -> (i64, i64) {
    ((z.re * 1e8).round() as i64, (z.im * 1e8).round() as i64)
}

/// Translations whose image of the polygon touches it, found by a breadth-first
/// search over generator products and matched on vertex positions.
pub fn touching_translations(g: u32) -> Vec<Moebius<f64>> {
    let dom = Domain::get(g);
    let gens: Vec<Moebius<f64>> = (0..4 * g).map(|j| generator_matrix(g, j, 53)).collect();
    let o = Cx::new(0.0, 0.0);
    let reach = 2.0 * hyp_distance(&o, &dom.vertices[0]) + 1e-6;
    let mut seen: HashMap<(i64, i64), Moebius<f64>> = HashMap::new();
    let id = Moebius::identity();
    seen.insert(key(&o), id.clone());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for m in &frontier {
            for a in &gens {
                let c = m.compose(a);
                let z = c.apply(&o);
                if hyp_distance(&o, &z) > reach || seen.contains_key(&key(&z)) {
                    continue;
                }
                seen.insert(key(&z), c.clone());
                next.push(c);
            }
        }
        frontier = next;
    }
    seen.into_values()
        .filter(|m| {
            dom.vertices
                .iter()
                .any(|v| dom.vertices.iter().any(|w| m.apply(v).dist(w) < 1e-9))
        })
        .collect()
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    use rand::SeedableRng;
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}
