use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hypdt::arith::Mode;
use hypdt::delaunay::canonical_face;
use hypdt::dummy::{self, bolza_table_dummy, DummySet};
use hypdt::oracle::{self, OracleOptions};
use hypdt::svg::Svg;
use hypdt::{io, planar, Error, ExactPoint, Result, SurfacePoint, Triangulation};

#[derive(Parser)]
#[command(name = "hypdt", version, about = "Delaunay triangulations of generalized Bolza surfaces")]
struct Cli {
    /// Overrides the precision cap in bits (same as HYPDT_PRECISION_BITS).
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Table,
    Refinement,
    Symmetric,
    Structured,
}

#[derive(Subcommand)]
enum Cmd {
    /// Random points in the original domain.
    Gen {
        #[arg(long, default_value_t = 2, value_parser = genus)]
        genus: u32,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 30, value_parser = digits)]
        digits: usize,
        /// Write exact p/q values instead of decimals.
        #[arg(long)]
        exact: bool,
    },
    /// A dummy point set.
    Dummy {
        #[arg(long, default_value_t = 2, value_parser = genus)]
        genus: u32,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, default_value_t = 30, value_parser = digits)]
        digits: usize,
    },
    /// Builds a triangulation and writes it out.
    Triangulate {
        #[arg(long, default_value_t = 2, value_parser = genus)]
        genus: u32,
        /// `table` or a CSV file with header x,y.
        #[arg(long)]
        points: Option<String>,
        /// Generate this many random points when --points is absent.
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum)]
        dummy: Option<Algorithm>,
        #[arg(long)]
        remove_dummies: bool,
        /// Compare with the brute-force oracle (at most 100 vertices).
        #[arg(long)]
        verify: bool,
        /// Unfiltered double predicates.
        #[arg(long)]
        fast: bool,
        #[arg(long, default_value = "tri.json")]
        out: PathBuf,
        #[arg(long, default_value = "stats.txt")]
        stats: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also write every vertex as CSV, in the order used by the JSON.
        #[arg(long)]
        vertices_out: Option<PathBuf>,
        #[arg(long, default_value_t = 30, value_parser = digits)]
        digits: usize,
    },
    /// Checks a triangulation against the brute-force oracle.
    Verify {
        #[arg(long, default_value_t = 2, value_parser = genus)]
        genus: u32,
        #[arg(long)]
        points: PathBuf,
        /// Triangulation JSON whose vertices are the rows of --points.
        #[arg(long)]
        against: Option<PathBuf>,
    },
    /// Draws the domain, points and triangulation as SVG.
    Render {
        #[arg(long, default_value_t = 2, value_parser = genus)]
        genus: u32,
        /// `table` or a CSV file.
        #[arg(long)]
        points: Option<String>,
        #[arg(long, value_enum)]
        dummy: Option<Algorithm>,
        #[arg(long)]
        triangulation: bool,
        #[arg(long)]
        neighbors: bool,
        #[arg(long)]
        systole: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Timing table for the planar baseline and both surface paths.
    Bench {
        #[arg(long, default_value_t = 2, value_parser = genus)]
        genus: u32,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        repeats: usize,
    },
}

fn genus(s: &str) -> std::result::Result<u32, String> {
    match s.parse::<u32>() {
        Ok(g) if g >= 2 => Ok(g),
        _ => Err("genus must be an integer ≥ 2".into()),
    }
}

fn digits(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d) if d >= 6 => Ok(d),
        _ => Err("digits must be an integer ≥ 6".into()),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PrecisionExhausted { .. } => 3,
        Error::Io(_) | Error::Parse(_) => 4,
        Error::Invariant(_) | Error::InvalidDummySet | Error::VertexSetMismatch => 2,
        _ => 1,
    }
}

fn build_dummy(g: u32, alg: Algorithm) -> Result<DummySet> {
    match alg {
        Algorithm::Table if g == 2 => Ok(bolza_table_dummy()),
        Algorithm::Table => Err(Error::Parse("the table set exists for genus 2 only".into())),
        Algorithm::Refinement => dummy::refinement_dummy(g),
        Algorithm::Symmetric => dummy::symmetric_dummy(g),
        Algorithm::Structured => Ok(dummy::structured_dummy(g)?.set),
    }
}

fn default_algorithm(g: u32) -> Algorithm {
    if g == 2 {
        Algorithm::Table
    } else {
        Algorithm::Symmetric
    }
}

/// Reads `table` or a CSV into canonical points.
fn load_points(g: u32, source: &str) -> Result<Vec<SurfacePoint>> {
    if source == "table" {
        return Ok(build_dummy(g, Algorithm::Table)?.points);
    }
    io::read_points_file(Path::new(source))?
        .into_iter()
        .map(|p| SurfacePoint::new(g, p).map(|(s, _)| s))
        .collect()
}

/// Inserts in spatial order; exact duplicates of existing vertices are skipped.
fn insert_all(tri: &mut Triangulation, pts: &[SurfacePoint]) -> Result<usize> {
    let approx: Vec<_> = pts.iter().map(|p| p.approx()).collect();
    let mut skipped = 0;
    for i in planar::spatial_order(&approx) {
        match tri.insert(&pts[i]) {
            Ok(_) => {}
            Err(Error::DuplicatePoint) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(skipped)
}

fn verify_tri(tri: &Triangulation) -> Result<()> {
    let r = oracle::brute_delaunay(tri.genus, &tri.points())?;
    let c = oracle::compare(tri, &r)?;
    report_comparison(&c, &r)
}

fn report_comparison(c: &oracle::Comparison, r: &oracle::OracleResult) -> Result<()> {
    println!(
        "oracle faces {}, missing {}, extra {}, degenerate {}",
        r.faces.len(),
        c.missing.len(),
        c.extra.len(),
        r.degenerate.len()
    );
    if c.equal_up_to_degenerate(r) {
        Ok(())
    } else {
        Err(Error::Invariant("triangulation differs from the oracle".into()))
    }
}

fn write_svg(g: u32, pts: &[SurfacePoint], tri: Option<&Triangulation>, neighbors: bool, systole: bool, path: &Path) -> Result<()> {
    let dom = hypdt::Domain::get(g);
    let mut s = Svg::new();
    if neighbors {
        s.neighbor_regions(&dom);
    }
    s.domain(&dom);
    if systole {
        s.systolic_segments(&dom);
    }
    match tri {
        Some(t) => s.triangulation(t),
        None => s.points(pts, "black"),
    }
    s.write(path)
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Gen { genus, count, seed, out, digits, exact } => {
            let pts: Vec<ExactPoint> = hypdt::gen::random_points(genus, count, seed).into_iter().map(|p| p.point).collect();
            io::write_points_file(&out, &pts, digits, exact)
        }
        Cmd::Dummy { genus, algorithm, out, svg, digits } => {
            let set = build_dummy(genus, algorithm)?;
            let (ok, diam) = dummy::validity_check(genus, &set.points)?;
            println!("points {}, valid {ok}, max circumdiameter {diam:.6}", set.len());
            io::write_points_file(&out, &set.exact_points(), digits, false)?;
            if let Some(p) = svg {
                write_svg(genus, &set.points, None, false, false, &p)?;
            }
            if !ok {
                return Err(Error::InvalidDummySet);
            }
            Ok(())
        }
        Cmd::Triangulate {
            genus,
            points,
            count,
            seed,
            dummy,
            remove_dummies,
            verify,
            fast,
            out,
            stats,
            svg,
            vertices_out,
            digits,
        } => {
            let mode = if fast { Mode::Fast } else { Mode::certified(genus) };
            let set = build_dummy(genus, dummy.unwrap_or(default_algorithm(genus)))?;
            let mut tri = Triangulation::init_with_mode(genus, &set, mode)?;
            let pts = match (points.as_deref(), count) {
                (Some("table"), _) => Vec::new(),
                (Some(f), _) => load_points(genus, f)?,
                (None, Some(n)) => hypdt::gen::random_points(genus, n, seed),
                (None, None) => Vec::new(),
            };
            let skipped = insert_all(&mut tri, &pts)?;
            let removed = if remove_dummies { tri.remove_dummies()? } else { 0 };
            tri.check_invariants()?;
            let st = tri.stats();
            let text = format!(
                "vertices {}\nedges {}\nfaces {}\neuler {}\nmax_circumdiameter {:.12}\ndummy_remaining {}\ndummy_removed {removed}\nduplicates_skipped {skipped}\n",
                st.vertices, st.edges, st.faces, st.euler, st.max_circumdiameter, st.dummy_remaining
            );
            print!("{text}");
            std::fs::write(&stats, text)?;
            let mut json = serde_json::to_string_pretty(&tri.to_json(digits)).map_err(|e| Error::Parse(e.to_string()))?;
            json.push('\n');
            std::fs::write(&out, json)?;
            if let Some(p) = vertices_out {
                io::write_points_file(&p, &tri.points(), digits, true)?;
            }
            if let Some(p) = svg {
                write_svg(genus, &[], Some(&tri), false, false, &p)?;
            }
            if verify {
                verify_tri(&tri)?;
            }
            Ok(())
        }
        Cmd::Verify { genus, points, against } => {
            let pts = io::read_points_file(&points)?;
            match against {
                None => {
                    let sp: Vec<SurfacePoint> = pts
                        .into_iter()
                        .map(|p| SurfacePoint::new(genus, p).map(|(s, _)| s))
                        .collect::<Result<_>>()?;
                    let mut tri = Triangulation::init(genus, &build_dummy(genus, default_algorithm(genus))?)?;
                    insert_all(&mut tri, &sp)?;
                    tri.check_invariants()?;
                    verify_tri(&tri)
                }
                Some(j) => {
                    let text = std::fs::read_to_string(&j)?;
                    let v: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
                    let faces = parse_faces(genus, &v)?;
                    let nv = v["vertices"].as_array().map_or(0, |a| a.len());
                    if nv != pts.len() {
                        return Err(Error::VertexSetMismatch);
                    }
                    let r = oracle::brute_delaunay_with(genus, &pts, OracleOptions::default())?;
                    report_comparison(&oracle::compare_sets(&faces, &r.faces), &r)
                }
            }
        }
        Cmd::Render { genus, points, dummy, triangulation, neighbors, systole, out } => {
            let pts = match points.as_deref() {
                Some(f) => load_points(genus, f)?,
                None => Vec::new(),
            };
            let tri = if triangulation {
                let set = build_dummy(genus, dummy.unwrap_or(default_algorithm(genus)))?;
                let mut t = Triangulation::init(genus, &set)?;
                insert_all(&mut t, &pts)?;
                Some(t)
            } else {
                None
            };
            write_svg(genus, &pts, tri.as_ref(), neighbors, systole, &out)
        }
        Cmd::Bench { genus, count, seed, repeats } => {
            let t = hypdt::bench::run(&hypdt::bench::BenchConfig { genus, count, seed, repeats })?;
            print!("{t}");
            Ok(())
        }
    }
}

fn parse_faces(g: u32, v: &serde_json::Value) -> Result<std::collections::BTreeSet<hypdt::delaunay::CanonFace>> {
    let grp = hypdt::Group::get(g);
    let bad = || Error::Parse("malformed triangulation JSON".into());
    let mut out = std::collections::BTreeSet::new();
    for f in v["faces"].as_array().ok_or_else(bad)? {
        let idx: Vec<usize> = serde_json::from_value(f["v"].clone()).map_err(|_| bad())?;
        let words: Vec<Vec<u8>> = serde_json::from_value(f["T"].clone()).map_err(|_| bad())?;
        if idx.len() != 3 || words.len() != 3 {
            return Err(bad());
        }
        let t = [grp.intern(&words[0]), grp.intern(&words[1]), grp.intern(&words[2])];
        out.insert(canonical_face(&grp, [idx[0], idx[1], idx[2]], t));
    }
    Ok(out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(b) = cli.precision_bits {
        std::env::set_var("HYPDT_PRECISION_BITS", b.to_string());
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
