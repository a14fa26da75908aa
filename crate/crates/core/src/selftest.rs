//! Built-in checks: the `tu`/`tue`/`tutu` worked example, the
//! "dans ville il y a vie" counts, and a seeded random differential suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bitstate::{build_masks, compute_omega, decode, encode, render, step_traced, MaskSet};
use crate::matcher::{brute_count, count, scan_count_with, Backend, Engine, Mode};
use crate::trie::{build_tables, Layout, Pattern, TrieTables};

/// One randomly drawn counting problem.
#[derive(Debug, Clone)]
pub struct Instance {
    pub text: Vec<u8>,
    pub patterns: Vec<Pattern>,
    pub w: usize,
}

/// Alphabet 2..=8, text up to 300 letters, 1..=5 patterns of length 1..=6,
/// window 1..=30.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let alphabet = rng.gen_range(2..=8u8);
    let n = rng.gen_range(0..=300);
    let text = (0..n).map(|_| b'a' + rng.gen_range(0..alphabet)).collect();
    let q = rng.gen_range(1..=5);
    let patterns = (0..q)
        .map(|_| {
            let len = rng.gen_range(1..=6);
            Pattern::new((0..len).map(|_| b'a' + rng.gen_range(0..alphabet)).collect::<Vec<u8>>())
                .expect("non-empty")
        })
        .collect();
    let w = rng.gen_range(1..=30);
    Instance { text, patterns, w }
}

/// Compares every engine and a byte-limb backend against brute force, in all modes.
pub fn check_instance(inst: &Instance) -> Result<(), String> {
    for mode in [Mode::All, Mode::Each, Mode::Both] {
        let oracle = brute_count(&inst.text, &inst.patterns, inst.w, mode).map_err(|e| e.to_string())?;
        for engine in Engine::COMPARED {
            let got = count(engine, &inst.text, &inst.patterns, inst.w, mode).map_err(|e| e.to_string())?;
            if got != oracle {
                return Err(format!("{engine} {mode:?}: {got:?} != {oracle:?} on {inst:?}"));
            }
        }
        let tables = build_tables(&inst.patterns, Layout::Merged).map_err(|e| e.to_string())?;
        let got = scan_count_with(inst.text.iter().copied(), &tables, inst.w, mode, Backend::Limbs8)
            .map_err(|e| e.to_string())?;
        if got != oracle {
            return Err(format!("mp-trie/u8 {mode:?}: {got:?} != {oracle:?} on {inst:?}"));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct SelfTestReport {
    /// Human-readable log, one check per line.
    pub lines: Vec<String>,
    pub failures: Vec<String>,
    pub random_instances: usize,
}

impl SelfTestReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        let status = if ok { "PASS" } else { "FAIL" };
        self.lines.push(format!("[{status}] {name}: {detail}"));
        if !ok {
            self.failures.push(name.to_string());
        }
    }
}

fn worked_example(report: &mut SelfTestReport) {
    let tables = match TrieTables::from_bytes(&["tu", "tue", "tutu"], Layout::Merged) {
        Ok(t) => t,
        Err(e) => return report.check("tables", false, e.to_string()),
    };
    report.check(
        "tables",
        tables.tr() == b"tuetu" && tables.pr() == [0, 1, 2, 2, 4] && tables.f() == [2, 3, 5],
        format!("{tables:?}"),
    );
    report.check("omega(13)", compute_omega(13) == 4, format!("{}", compute_omega(13)));

    let masks: MaskSet = match build_masks(&tables, 13) {
        Ok(m) => m,
        Err(e) => return report.check("masks", false, e.to_string()),
    };
    let n_t = render(masks.second_type(b't'), &masks);
    report.check("N_t", n_t == "0:1111|0:0000|0:1111|0:1111|0:0000", n_t);

    let l = encode(&[2, 5, 15, 5, 15], &masks).expect("values fit");
    let tr = step_traced(&l, b't', &masks);
    report.lines.push(format!("        L     = {}", render(l.bits(), &masks)));
    report.lines.push(format!("        T     = {}", render(&tr.t, &masks)));
    report.lines.push(format!("        T&E2  = {}", render(&tr.overflow, &masks)));
    report.lines.push(format!("        L'    = {}", render(tr.next.bits(), &masks)));
    let next = decode(&tr.next, &masks).unwrap_or_default();
    report.check(
        "transition on t",
        next == [1, 6, 15, 6, 15] && render(&tr.overflow, &masks) == "1:0000|0:0000|1:0000|0:0000|0:0000",
        format!("<2,5,inf,5,inf> -> {next:?}"),
    );
}

fn advertisement(report: &mut SelfTestReport) {
    let text = b"dans ville il y a vie";
    for (pattern, w, expected) in [("vile", 5, 1), ("vie", 5, 2), ("vile", 4, 0)] {
        let p = Pattern::parse_all([pattern]).expect("non-empty");
        let counts: Vec<u64> = Engine::ALL
            .iter()
            .map(|&e| count(e, text, &p, w, Mode::All).ok().and_then(|r| r.c_all).unwrap_or(u64::MAX))
            .collect();
        report.check(
            &format!("{pattern:?} w={w}"),
            counts.iter().all(|&c| c == expected),
            format!("{counts:?}, expected {expected}"),
        );
    }
}

pub fn run(instances: usize, seed: u64) -> SelfTestReport {
    let mut report = SelfTestReport::default();
    worked_example(&mut report);
    advertisement(&mut report);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first_failure = None;
    for _ in 0..instances {
        let inst = random_instance(&mut rng);
        report.random_instances += 1;
        if let Err(e) = check_instance(&inst) {
            first_failure = Some(e);
            break;
        }
    }
    let ok = first_failure.is_none();
    let detail = first_failure.unwrap_or_else(|| format!("{} instances, seed {seed}", report.random_instances));
    report.check("random differential suite", ok, detail);
    report
}
