//! Seeded random points in the original domain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::surface::{Domain, ExactPoint, SurfacePoint};

/// `n` points, uniform for the Euclidean measure on the polygon.
///
/// Candidates are drawn uniformly from the disk through the polygon's vertices
/// and kept when they lie in the half-open domain. Coordinates are doubles,
/// stored exactly.
pub fn random_points(g: u32, n: usize, seed: u64) -> Vec<SurfacePoint> {
    let dom = Domain::get(g);
    let r = dom.vertices[0].abs();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x: f64 = rng.gen_range(-r..r);
        let y: f64 = rng.gen_range(-r..r);
        if x * x + y * y >= r * r {
            continue;
        }
        let p = ExactPoint::from_f64(x, y);
        if dom.contains_original(&p) {
            out.push(SurfacePoint { genus: g, point: p });
        }
    }
    out
}
