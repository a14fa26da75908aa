//! Timing the engines over seeded random corpora.
//!
//! Every cell of the grid gets its own generated text and pattern set. All
//! engines are first run once and must agree on the full report; only then
//! are the timed repetitions taken, in `all` mode, interleaving engines so
//! drift affects each of them alike.

use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::matcher::{count, CountReport, Engine, Mode};
use crate::trie::Pattern;

pub const CSV_HEADER: &str = "engine,n,q,plen_total,w,alphabet,seed,rep,c_all,time_ns";

/// How patterns relate to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Patterns start with distinct letters whenever the alphabet allows.
    Distinct,
    /// Patterns share one common prefix and differ afterwards.
    SharedPrefix,
}

impl FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "a" | "distinct" => Ok(Regime::Distinct),
            "b" | "shared" => Ok(Regime::SharedPrefix),
            _ => Err(format!("unknown regime `{s}` (expected a/distinct or b/shared)")),
        }
    }
}

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid grid: {0}")]
    Invalid(String),
    #[error("engines disagree on {cell}: {detail}")]
    Disagreement { cell: String, detail: String },
    #[error(transparent)]
    Core(#[from] crate::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    pub n: usize,
    pub q: usize,
    /// Length of every pattern.
    pub plen: usize,
    pub w: usize,
    pub alphabet: usize,
}

impl std::fmt::Display for Cell {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "n={} q={} plen={} w={} alphabet={}",
            self.n, self.q, self.plen, self.w, self.alphabet
        )
    }
}

#[derive(Debug, Clone)]
pub struct Grid {
    pub ns: Vec<usize>,
    pub qs: Vec<usize>,
    pub plens: Vec<usize>,
    pub windows: Vec<usize>,
    pub alphabets: Vec<usize>,
    pub regime: Regime,
    /// Prefix length shared in [`Regime::SharedPrefix`], capped at `plen - 1`.
    pub shared_prefix: usize,
    pub seed: u64,
    pub reps: usize,
    pub engines: Vec<Engine>,
    /// Run cells one after another instead of across worker threads.
    pub sequential: bool,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            ns: vec![1_000_000],
            qs: vec![4],
            plens: vec![3],
            windows: vec![10],
            alphabets: vec![4],
            regime: Regime::Distinct,
            shared_prefix: 2,
            seed: 1,
            reps: 5,
            engines: Engine::COMPARED.to_vec(),
            sequential: false,
        }
    }
}

impl Grid {
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &n in &self.ns {
            for &q in &self.qs {
                for &plen in &self.plens {
                    for &w in &self.windows {
                        for &alphabet in &self.alphabets {
                            out.push(Cell { n, q, plen, w, alphabet });
                        }
                    }
                }
            }
        }
        out
    }

    fn validate(&self) -> Result<(), BenchError> {
        let nonzero = |name: &str, v: &[usize]| {
            if v.is_empty() || v.contains(&0) {
                Err(BenchError::Invalid(format!("{name} needs positive values")))
            } else {
                Ok(())
            }
        };
        nonzero("n", &self.ns)?;
        nonzero("q", &self.qs)?;
        nonzero("plen", &self.plens)?;
        nonzero("window", &self.windows)?;
        nonzero("alphabet", &self.alphabets)?;
        if self.alphabets.iter().any(|&a| a > 256) {
            return Err(BenchError::Invalid("alphabet is at most 256 letters".into()));
        }
        if self.reps == 0 {
            return Err(BenchError::Invalid("reps must be positive".into()));
        }
        if self.engines.is_empty() {
            return Err(BenchError::Invalid("no engines selected".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BenchRow {
    pub engine: String,
    pub n: usize,
    pub q: usize,
    pub plen_total: usize,
    pub w: usize,
    pub alphabet: usize,
    pub seed: u64,
    pub rep: usize,
    pub c_all: u64,
    pub time_ns: u64,
}

/// Generated text and patterns for one cell.
#[derive(Debug, Clone)]
pub struct Corpus {
    pub text: Vec<u8>,
    pub patterns: Vec<Pattern>,
}

fn letters(alphabet: usize) -> Vec<u8> {
    if alphabet <= 26 {
        (b'a'..).take(alphabet).collect()
    } else {
        (0..alphabet).map(|i| i as u8).collect()
    }
}

fn cell_seed(seed: u64, cell: &Cell) -> u64 {
    [cell.n, cell.q, cell.plen, cell.w, cell.alphabet]
        .iter()
        .fold(seed, |h, &v| (h ^ v as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29))
}

/// Uniform i.i.d. text and patterns over the first `alphabet` letters.
/// In the distinct regime first letters repeat once `q` exceeds the alphabet.
pub fn generate(cell: &Cell, regime: Regime, shared_prefix: usize, seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(cell_seed(seed, cell));
    let sigma = letters(cell.alphabet);
    let text = (0..cell.n).map(|_| sigma[rng.gen_range(0..sigma.len())]).collect();

    let draw = |len: usize, rng: &mut ChaCha8Rng| -> Vec<u8> {
        (0..len).map(|_| sigma[rng.gen_range(0..sigma.len())]).collect()
    };
    let patterns = match regime {
        Regime::Distinct => {
            let mut starts = sigma.clone();
            starts.shuffle(&mut rng);
            (0..cell.q)
                .map(|i| {
                    let mut p = vec![starts[i % starts.len()]];
                    p.extend(draw(cell.plen - 1, &mut rng));
                    p
                })
                .collect::<Vec<_>>()
        }
        Regime::SharedPrefix => {
            let shared = shared_prefix.min(cell.plen - 1);
            let prefix = draw(shared, &mut rng);
            (0..cell.q)
                .map(|_| {
                    let mut p = prefix.clone();
                    p.extend(draw(cell.plen - shared, &mut rng));
                    p
                })
                .collect()
        }
    };
    Corpus {
        text,
        patterns: Pattern::parse_all(patterns).expect("generated patterns are non-empty"),
    }
}

/// One count and its wall time in nanoseconds.
pub fn time_engine(engine: Engine, corpus: &Corpus, w: usize, mode: Mode) -> crate::Result<(CountReport, u64)> {
    let start = Instant::now();
    let report = count(engine, &corpus.text, &corpus.patterns, w, mode)?;
    Ok((report, start.elapsed().as_nanos() as u64))
}

pub fn run_cell(cell: &Cell, grid: &Grid) -> Result<Vec<BenchRow>, BenchError> {
    let corpus = generate(cell, grid.regime, grid.shared_prefix, grid.seed);

    let reference = count(grid.engines[0], &corpus.text, &corpus.patterns, cell.w, Mode::Both)?;
    for &engine in &grid.engines[1..] {
        let got = count(engine, &corpus.text, &corpus.patterns, cell.w, Mode::Both)?;
        if got != reference {
            return Err(BenchError::Disagreement {
                cell: cell.to_string(),
                detail: format!("{} gave {:?}, {} gave {:?}", grid.engines[0], reference, engine, got),
            });
        }
    }
    let expected = reference.c_all.unwrap_or(0);

    let mut rows = Vec::with_capacity(grid.reps * grid.engines.len());
    for rep in 0..grid.reps {
        for &engine in &grid.engines {
            let (report, time_ns) = time_engine(engine, &corpus, cell.w, Mode::All)?;
            let c_all = report.c_all.unwrap_or(0);
            if c_all != expected {
                return Err(BenchError::Disagreement {
                    cell: cell.to_string(),
                    detail: format!("{engine} counted {c_all} on rep {rep}, expected {expected}"),
                });
            }
            rows.push(BenchRow {
                engine: engine.name().to_string(),
                n: cell.n,
                q: cell.q,
                plen_total: cell.q * cell.plen,
                w: cell.w,
                alphabet: cell.alphabet,
                seed: grid.seed,
                rep,
                c_all,
                time_ns,
            });
        }
    }
    Ok(rows)
}

pub fn run_grid(grid: &Grid) -> Result<Vec<BenchRow>, BenchError> {
    grid.validate()?;
    let cells = grid.cells();
    let per_cell: Vec<Vec<BenchRow>> = if grid.sequential {
        cells.iter().map(|c| run_cell(c, grid)).collect::<Result<_, _>>()?
    } else {
        cells.par_iter().map(|c| run_cell(c, grid)).collect::<Result<_, _>>()?
    };
    Ok(per_cell.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<(), csv::Error> {
    let mut wtr = csv::Writer::from_writer(out);
    if rows.is_empty() {
        wtr.write_record(CSV_HEADER.split(','))?;
    }
    for row in rows {
        wtr.serialize(row)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Median time of one engine over one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub engine: String,
    pub n: usize,
    pub q: usize,
    pub plen_total: usize,
    pub w: usize,
    pub alphabet: usize,
    pub c_all: u64,
    pub reps: usize,
    pub median_ns: u64,
}

pub fn median(values: &mut [u64]) -> u64 {
    values.sort_unstable();
    let n = values.len();
    if n == 0 {
        0
    } else if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2
    }
}

/// Medians per (cell, engine), in first-seen order.
pub fn summarize(rows: &[BenchRow]) -> Vec<Summary> {
    let mut keys: Vec<(String, usize, usize, usize, usize, usize)> = Vec::new();
    for r in rows {
        let key = (r.engine.clone(), r.n, r.q, r.plen_total, r.w, r.alphabet);
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    keys.into_iter()
        .map(|(engine, n, q, plen_total, w, alphabet)| {
            let group: Vec<&BenchRow> = rows
                .iter()
                .filter(|r| {
                    r.engine == engine && r.n == n && r.q == q && r.plen_total == plen_total && r.w == w && r.alphabet == alphabet
                })
                .collect();
            let mut times: Vec<u64> = group.iter().map(|r| r.time_ns).collect();
            Summary {
                engine,
                n,
                q,
                plen_total,
                w,
                alphabet,
                c_all: group[0].c_all,
                reps: group.len(),
                median_ns: median(&mut times),
            }
        })
        .collect()
}
