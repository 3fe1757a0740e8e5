//! Command-line front end: JSON pipelines around closure, subdivision,
//! homology, and the invariance checks, plus a seeded random generator
//! and a growth profile. Every command reads stdin or `--input`, writes
//! stdout or `--output`, and is byte-reproducible for a fixed seed.

use std::collections::BTreeSet;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use thiserror::Error;

use crate::chains::{embedded_homology, CoefficientRing, HomologyGroup};
use crate::hypergraph::{simplicial_closure, Hypergraph};
use crate::invariance::verify_invariance;
use crate::subdivision::{iterate_subdivision, subdivide};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad input or arguments; exits with code 2.
    #[error("{0}")]
    Usage(String),
    /// A computation refused to finish, such as a tripped edge cap;
    /// exits with code 1.
    #[error("{0}")]
    Runtime(String),
}

#[derive(Parser)]
#[command(
    name = "hypersd",
    version,
    about = "Hypergraph subdivision and embedded homology"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct IoArgs {
    /// Input file; stdin when absent
    #[arg(long)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Close a hypergraph under taking subsets
    Closure {
        #[command(flatten)]
        io: IoArgs,
    },
    /// Subdivide a hypergraph, optionally several rounds
    Subdivide {
        #[command(flatten)]
        io: IoArgs,
        /// Rounds of subdivision
        #[arg(long, default_value_t = 1)]
        iterations: usize,
        /// Abort when a round produces more edges than this
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
    },
    /// Embedded homology of a hypergraph
    Homology {
        #[command(flatten)]
        io: IoArgs,
        /// Coefficients: z, q, or gf<p>
        #[arg(long, default_value = "z")]
        ring: String,
    },
    /// Check that subdivision preserves embedded homology
    Verify {
        #[command(flatten)]
        io: IoArgs,
        /// Coefficients: z, q, or gf<p>
        #[arg(long, default_value = "z")]
        ring: String,
        /// Verify this many seeded random instances instead of reading input
        #[arg(long, conflicts_with = "input")]
        random: Option<usize>,
        /// Vertex count for random instances
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        /// Edge count for random instances
        #[arg(long, default_value_t = 8)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sample a random hypergraph
    Random {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 5)]
        vertices: usize,
        #[arg(long, default_value_t = 8)]
        edges: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pick an edge size uniformly before picking its vertices
        #[arg(long)]
        dim_weighted: bool,
        /// Keep samples that leave some vertices unused
        #[arg(long)]
        allow_isolated: bool,
    },
    /// Growth profile of iterated subdivision as CSV
    Stats {
        #[command(flatten)]
        io: IoArgs,
        #[arg(long, default_value_t = 3)]
        iterations: usize,
        #[arg(long, default_value_t = 1_000_000)]
        cap: usize,
        /// Record wall time per round; off by default so runs are
        /// byte-identical
        #[arg(long)]
        timing: bool,
    },
}

/// Parses arguments from the process environment and runs one command,
/// returning the exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => 2,
                CliError::Runtime(_) => 1,
            }
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Closure { io } => cmd_closure(&io),
        Command::Subdivide { io, iterations, cap } => cmd_subdivide(&io, iterations, cap),
        Command::Homology { io, ring } => cmd_homology(&io, &ring),
        Command::Verify { io, ring, random, vertices, edges, seed } => {
            cmd_verify(&io, &ring, random, vertices, edges, seed)
        }
        Command::Random { io, vertices, edges, seed, dim_weighted, allow_isolated } => {
            cmd_random(&io, vertices, edges, seed, dim_weighted, allow_isolated)
        }
        Command::Stats { io, iterations, cap, timing } => cmd_stats(&io, iterations, cap, timing),
    }
}

fn read_input(io: &IoArgs) -> Result<String, CliError> {
    match &io.input {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display()))),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn write_output(io: &IoArgs, text: &str) -> Result<(), CliError> {
    let terminated = format!("{text}\n");
    match &io.output {
        Some(path) => fs::write(path, terminated)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{terminated}");
            Ok(())
        }
    }
}

fn parse_hypergraph(text: &str) -> Result<Hypergraph, CliError> {
    Hypergraph::from_json(text).map_err(|e| CliError::Usage(e.to_string()))
}

/// Accepts z, q, or gf<p> in any letter case.
pub fn parse_ring(spec: &str) -> Result<CoefficientRing, CliError> {
    let lower = spec.to_ascii_lowercase();
    match lower.as_str() {
        "z" => Ok(CoefficientRing::Integers),
        "q" => Ok(CoefficientRing::Rationals),
        _ => {
            let p = lower
                .strip_prefix("gf")
                .and_then(|digits| digits.parse::<u64>().ok())
                .ok_or_else(|| {
                    CliError::Usage(format!("unrecognized ring {spec:?}; use z, q, or gf<p>"))
                })?;
            CoefficientRing::prime_field(p).map_err(|e| CliError::Usage(e.to_string()))
        }
    }
}

fn cmd_closure(io: &IoArgs) -> Result<i32, CliError> {
    let h = parse_hypergraph(&read_input(io)?)?;
    let closure = simplicial_closure(&h);
    write_output(io, &closure.as_hypergraph().to_json())?;
    Ok(0)
}

fn cmd_subdivide(io: &IoArgs, iterations: usize, cap: usize) -> Result<i32, CliError> {
    if cap == 0 {
        return Err(CliError::Usage("the edge cap must be positive".into()));
    }
    let h = parse_hypergraph(&read_input(io)?)?;
    let result = iterate_subdivision(&h, iterations, cap)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    write_output(io, &result.to_json())?;
    Ok(0)
}

/// Homology report rendering shared with the C interface.
pub fn homology_json(ring: CoefficientRing, groups: &[HomologyGroup]) -> String {
    json!({
        "groups": groups.iter().map(HomologyGroup::to_json_value).collect::<Vec<_>>(),
        "ring": ring.to_string(),
    })
    .to_string()
}

fn cmd_homology(io: &IoArgs, ring: &str) -> Result<i32, CliError> {
    let ring = parse_ring(ring)?;
    let h = parse_hypergraph(&read_input(io)?)?;
    let groups = embedded_homology(&h, ring);
    write_output(io, &homology_json(ring, &groups))?;
    Ok(0)
}

fn cmd_verify(
    io: &IoArgs,
    ring: &str,
    random: Option<usize>,
    vertices: usize,
    edges: usize,
    seed: u64,
) -> Result<i32, CliError> {
    let ring = parse_ring(ring)?;
    match random {
        None => {
            let h = parse_hypergraph(&read_input(io)?)?;
            let report = verify_invariance(&h, ring);
            write_output(io, &report.to_json())?;
            Ok(if report.all_pass() { 0 } else { 1 })
        }
        Some(count) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut lines = Vec::with_capacity(count + 1);
            let mut failures = 0usize;
            for index in 0..count {
                let h = random_hypergraph(vertices, edges, false, false, &mut rng)?;
                let report = verify_invariance(&h, ring);
                if report.all_pass() {
                    lines.push(format!("instance {index}: pass"));
                } else {
                    failures += 1;
                    let names: Vec<&str> = report
                        .checks
                        .iter()
                        .filter(|c| !c.pass)
                        .map(|c| c.name)
                        .collect();
                    lines.push(format!("instance {index}: FAIL ({})", names.join(", ")));
                }
            }
            lines.push(format!("passed {} of {count}", count - failures));
            write_output(io, &lines.join("\n"))?;
            Ok(if failures == 0 { 0 } else { 1 })
        }
    }
}

/// Draws `edges` distinct nonempty subsets of `0..vertices`, uniformly
/// over subsets, or uniformly over sizes first with `dim_weighted`.
/// Unless `allow_isolated` is set the sample is redrawn until every
/// vertex appears in some edge.
pub fn random_hypergraph(
    vertices: usize,
    edges: usize,
    dim_weighted: bool,
    allow_isolated: bool,
    rng: &mut impl Rng,
) -> Result<Hypergraph, CliError> {
    if vertices == 0 || vertices > 63 {
        return Err(CliError::Usage(format!(
            "vertex count must be between 1 and 63, got {vertices}"
        )));
    }
    let limit = (1u64 << vertices) - 1;
    if edges == 0 || edges as u64 > limit {
        return Err(CliError::Usage(format!(
            "edge count must be between 1 and {limit} for {vertices} vertices, got {edges}"
        )));
    }
    for _attempt in 0..1000 {
        let mut masks: BTreeSet<u64> = BTreeSet::new();
        while masks.len() < edges {
            masks.insert(draw_mask(vertices, dim_weighted, rng));
        }
        let covered = masks.iter().fold(0u64, |acc, m| acc | m);
        if allow_isolated || covered == limit {
            let lists: Vec<Vec<usize>> = masks
                .iter()
                .map(|&m| (0..vertices).filter(|i| m & (1 << i) != 0).collect())
                .collect();
            let h = Hypergraph::from_edge_lists(vertices, &lists)
                .expect("masks are distinct nonempty subsets");
            return Ok(h);
        }
    }
    Err(CliError::Runtime(format!(
        "no sample of {edges} edges covered all {vertices} vertices; \
         pass --allow-isolated or raise the edge count"
    )))
}

fn draw_mask(vertices: usize, dim_weighted: bool, rng: &mut impl Rng) -> u64 {
    if !dim_weighted {
        let limit = (1u64 << vertices) - 1;
        return rng.gen_range(1..=limit);
    }
    let size = rng.gen_range(1..=vertices);
    let mut picked = BTreeSet::new();
    while picked.len() < size {
        picked.insert(rng.gen_range(0..vertices));
    }
    picked.iter().fold(0u64, |acc, v| acc | (1u64 << v))
}

fn cmd_random(
    io: &IoArgs,
    vertices: usize,
    edges: usize,
    seed: u64,
    dim_weighted: bool,
    allow_isolated: bool,
) -> Result<i32, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = random_hypergraph(vertices, edges, dim_weighted, allow_isolated, &mut rng)?;
    write_output(io, &h.to_json())?;
    Ok(0)
}

fn cmd_stats(io: &IoArgs, iterations: usize, cap: usize, timing: bool) -> Result<i32, CliError> {
    if cap == 0 {
        return Err(CliError::Usage("the edge cap must be positive".into()));
    }
    let h = parse_hypergraph(&read_input(io)?)?;
    let mut rows = vec!["iteration,dim,edge_count,wall_ms".to_string()];
    profile_rows(&mut rows, 0, &h, 0);
    let mut current = h;
    for round in 1..=iterations {
        let start = Instant::now();
        let sd = subdivide(&current);
        let wall_ms = if timing { start.elapsed().as_millis() } else { 0 };
        current = sd.into_hypergraph();
        if current.edge_count() > cap {
            write_output(io, &rows.join("\n"))?;
            return Err(CliError::Runtime(format!(
                "iteration {round} produced {} edges, over the cap {cap}",
                current.edge_count()
            )));
        }
        profile_rows(&mut rows, round, &current, wall_ms);
    }
    write_output(io, &rows.join("\n"))?;
    Ok(0)
}

fn profile_rows(rows: &mut Vec<String>, iteration: usize, h: &Hypergraph, wall_ms: u128) {
    for dim in 0..=h.max_dim() {
        let count = h.edges_of_dim(dim).count();
        if count > 0 {
            rows.push(format!("{iteration},{dim},{count},{wall_ms}"));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_specs_parse() {
        assert_eq!(parse_ring("z").unwrap(), CoefficientRing::Integers);
        assert_eq!(parse_ring("Q").unwrap(), CoefficientRing::Rationals);
        assert_eq!(
            parse_ring("gf7").unwrap(),
            CoefficientRing::prime_field(7).unwrap()
        );
        assert!(matches!(parse_ring("gf6"), Err(CliError::Usage(_))));
        assert!(matches!(parse_ring("f2"), Err(CliError::Usage(_))));
    }

    #[test]
    fn random_hypergraphs_are_seeded_and_cover_vertices() {
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        let first = random_hypergraph(5, 8, false, false, &mut a).unwrap();
        let second = random_hypergraph(5, 8, false, false, &mut b).unwrap();
        assert_eq!(first.to_json(), second.to_json());

        let mut used = [false; 5];
        for edge in first.edges() {
            for &v in edge.vertices() {
                used[v] = true;
            }
        }
        assert!(used.iter().all(|&u| u));
    }

    #[test]
    fn full_power_set_is_forced() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let h = random_hypergraph(3, 7, false, false, &mut rng).unwrap();
        assert_eq!(h.edge_count(), 7);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            random_hypergraph(3, 8, false, false, &mut rng),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn dim_weighted_draws_stay_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..100 {
            let mask = draw_mask(6, true, &mut rng);
            assert!(mask > 0 && mask < (1 << 6));
        }
    }
}
