//! Contextuality of every hexagon copy and its complement, by orbit.

use std::path::{Path, PathBuf};

use anyhow::Context;
use polarctx_core::context;
use polarctx_core::hexagon::{self, Embedding, HexagonCopy, OrbitDatabase};
use polarctx_core::PolarSpace;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::Failure;

pub const CACHE_ENV: &str = "POLARCTX_CACHE_DIR";
const DEFAULT_CACHE_DIR: &str = ".polarctx-cache";

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV).map(PathBuf::from).unwrap_or_else(|| DEFAULT_CACHE_DIR.into())
}

fn expected_size(embedding: Embedding) -> usize {
    match embedding {
        Embedding::Skew => hexagon::SKEW_ORBIT_SIZE,
        _ => hexagon::CLASSICAL_ORBIT_SIZE,
    }
}

pub fn seed_copy(space: &PolarSpace, embedding: Embedding) -> Result<HexagonCopy, Failure> {
    match embedding {
        Embedding::Classical => hexagon::classical_hexagon(space),
        Embedding::Skew => hexagon::skew_hexagon(space),
        Embedding::Unknown => return Err(Failure::usage("embedding must be classical or skew")),
    }
    .map_err(Failure::from)
}

/// Loads the orbit of `embedding` from the cache, or computes and stores it.
///
/// A cached file that fails to decode, has the wrong size or lacks the seed is
/// ignored and rebuilt.
pub fn load_orbit(space: &PolarSpace, embedding: Embedding, rebuild: bool) -> Result<(OrbitDatabase, bool), Failure> {
    let seed = seed_copy(space, embedding)?;
    let path = cache_dir().join(format!("{embedding}.orbit"));
    if !rebuild {
        if let Ok(bytes) = std::fs::read(&path) {
            if let Ok(db) = hexagon::decode_orbit_database(space, &bytes) {
                if db.embedding == embedding && db.len() == expected_size(embedding) && db.contains(&seed.lines) {
                    return Ok((db, true));
                }
            }
        }
    }
    let db = hexagon::orbit_closure(space, &seed, hexagon::DEFAULT_ORBIT_LIMIT)?;
    if db.len() != expected_size(embedding) {
        return Err(Failure::mismatch(format!(
            "{embedding} orbit has {} copies, expected {}",
            db.len(),
            expected_size(embedding)
        )));
    }
    store(&path, &hexagon::encode_orbit_database(space, &db)).map_err(Failure::io)?;
    Ok((db, false))
}

fn store(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let tmp = path.with_extension("orbit.tmp");
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming into {}", path.display()))?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub configuration: String,
    /// "Yes", "No", or "Mixed" when the checked copies disagree.
    pub contextual: String,
    pub copies: usize,
    pub checked: usize,
    pub contextual_copies: usize,
    pub contexts: usize,
}

#[derive(Debug, Serialize)]
pub struct Table {
    pub sample: Option<usize>,
    pub seed: u64,
    pub rows: Vec<Row>,
}

pub const EXPECTED: [(&str, &str, usize); 4] = [
    ("H_C", "No", 120),
    ("H_S", "No", 7560),
    ("complement H_C", "No", 120),
    ("complement H_S", "Yes", 7560),
];

fn row(space: &PolarSpace, db: &OrbitDatabase, picks: &[usize], complement: bool) -> Result<Row, Failure> {
    let name = match (db.embedding, complement) {
        (Embedding::Classical, false) => "H_C",
        (Embedding::Classical, true) => "complement H_C",
        (_, false) => "H_S",
        (_, true) => "complement H_S",
    };
    let results: Vec<(bool, usize)> = picks
        .par_iter()
        .map(|&i| {
            let copy = db.copy(i);
            let lines = if complement {
                hexagon::complement(space, &copy)
            } else {
                copy.line_indices()
            };
            let config = context::lines_configuration(space, &lines)?;
            Ok((context::is_contextual(&config).contextual, lines.len()))
        })
        .collect::<Result<_, polarctx_core::Error>>()?;
    let yes = results.iter().filter(|r| r.0).count();
    let contextual = match yes {
        0 => "No",
        n if n == results.len() => "Yes",
        _ => "Mixed",
    };
    Ok(Row {
        configuration: name.into(),
        contextual: contextual.into(),
        copies: db.len(),
        checked: results.len(),
        contextual_copies: yes,
        contexts: results.first().map_or(0, |r| r.1),
    })
}

pub fn compute(space: &PolarSpace, orbits: [&OrbitDatabase; 2], sample_size: Option<usize>, seed: u64) -> Result<Table, Failure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = Vec::new();
    for db in orbits {
        let mut p: Vec<usize> = match sample_size {
            Some(k) => sample(&mut rng, db.len(), k.min(db.len())).into_vec(),
            None => (0..db.len()).collect(),
        };
        p.sort_unstable();
        picks.push(p);
    }
    let mut rows = Vec::new();
    for complement in [false, true] {
        for (db, p) in orbits.iter().zip(&picks) {
            rows.push(row(space, db, p, complement)?);
        }
    }
    Ok(Table {
        sample: sample_size,
        seed,
        rows,
    })
}

/// Rows that disagree with the expected verdicts and orbit sizes.
pub fn mismatches(table: &Table) -> Vec<String> {
    table
        .rows
        .iter()
        .zip(EXPECTED)
        .filter(|(r, (name, verdict, copies))| r.configuration != *name || r.contextual != *verdict || r.copies != *copies)
        .map(|(r, (name, verdict, copies))| {
            format!(
                "{}: {} over {} copies, expected {name}: {verdict} over {copies}",
                r.configuration, r.contextual, r.copies
            )
        })
        .collect()
}

pub fn to_csv(table: &Table) -> String {
    let mut out = String::from("configuration,contextual,copies,checked,contextual_copies,contexts\n");
    for r in &table.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.configuration, r.contextual, r.copies, r.checked, r.contextual_copies, r.contexts
        ));
    }
    out
}
