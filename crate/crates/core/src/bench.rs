//! Timing harness comparing the planar baseline with the surface paths.

use std::fmt;
use std::time::Instant;

use crate::arith::Mode;
use crate::delaunay::Triangulation;
use crate::dummy::bolza_table_dummy;
use crate::gen::random_points;
use crate::kernel::Cx;
use crate::{planar, Result};

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub genus: u32,
    pub count: usize,
    pub seed: u64,
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            genus: 2,
            count: 1000,
            seed: 1,
            repeats: 10,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Row {
    pub name: &'static str,
    pub samples: Vec<f64>,
}

impl Row {
    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len().max(1) as f64
    }

    /// Sample variance; zero for fewer than two runs.
    pub fn variance(&self) -> f64 {
        let n = self.samples.len();
        if n < 2 {
            return 0.0;
        }
        let m = self.mean();
        self.samples.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1) as f64
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub count: usize,
    pub rows: Vec<Row>,
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<20} {:>10} {:>12} {:>12} {:>5}", "path", "points", "mean_s", "stddev_s", "runs")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<20} {:>10} {:>12.6} {:>12.6} {:>5}",
                r.name,
                self.count,
                r.mean(),
                r.variance().sqrt(),
                r.samples.len()
            )?;
        }
        Ok(())
    }
}

fn surface(cfg: &BenchConfig, pts: &[crate::SurfacePoint], mode: Mode) -> Result<f64> {
    let t = Instant::now();
    let mut tri = Triangulation::init_with_mode(cfg.genus, &default_dummy(cfg.genus)?, mode)?;
    tri.insert_many(pts)?;
    Ok(t.elapsed().as_secs_f64())
}

fn default_dummy(g: u32) -> Result<crate::DummySet> {
    if g == 2 {
        Ok(bolza_table_dummy())
    } else {
        crate::dummy::symmetric_dummy(g)
    }
}

/// Runs the three paths `cfg.repeats` times each on the same points.
pub fn run(cfg: &BenchConfig) -> Result<Table> {
    let pts = random_points(cfg.genus, cfg.count, cfg.seed);
    let approx: Vec<Cx<f64>> = pts.iter().map(|p| p.approx()).collect();
    let mut rows = vec![
        Row { name: "planar_fast", samples: Vec::new() },
        Row { name: "surface_fast", samples: Vec::new() },
        Row { name: "surface_filtered", samples: Vec::new() },
    ];
    for _ in 0..cfg.repeats.max(1) {
        let t = Instant::now();
        planar::triangulate(&approx, Mode::Fast)?;
        rows[0].samples.push(t.elapsed().as_secs_f64());
        rows[1].samples.push(surface(cfg, &pts, Mode::Fast)?);
        rows[2].samples.push(surface(cfg, &pts, Mode::certified(cfg.genus))?);
    }
    Ok(Table { count: cfg.count, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_positive_rows() {
        let t = run(&BenchConfig { count: 200, repeats: 2, ..Default::default() }).unwrap();
        assert_eq!(t.rows.len(), 3);
        assert!(t.rows.iter().all(|r| r.samples.len() == 2 && r.mean() > 0.0));
        assert_eq!(t.to_string().lines().count(), 4);
    }
}
