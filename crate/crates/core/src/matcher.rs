//! On-line window counting.
//!
//! A scan reads the text once, left to right. After the `m`-th letter with
//! `m >= w` the window `t_{m-w+1} … t_m` is complete and the counters for
//! that window are updated, so a text of length `n` yields `n - w + 1`
//! windows (none when `w > n`).
//!
//! Three engines produce identical counts:
//! * the packed automaton of [`crate::bitstate`] (single word or limb array),
//! * the classical latest-start baseline, `O(k)` per letter,
//! * a brute-force check of every window, used as the oracle.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use crate::bits::Limb;
use crate::bitstate::{build_masks, LetterClasses, MaskSet, StateVector, Stepper};
use crate::error::{Error, Result};
use crate::trie::{build_tables, Layout, Pattern, TrieTables};
use crate::word::WordAutomaton;

/// What a scan counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Windows containing every pattern.
    All,
    /// Windows containing each pattern, one counter per pattern.
    Each,
    Both,
}

impl Mode {
    pub fn counts_all(self) -> bool {
        matches!(self, Mode::All | Mode::Both)
    }

    pub fn counts_each(self) -> bool {
        matches!(self, Mode::Each | Mode::Both)
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "all" => Ok(Mode::All),
            "each" => Ok(Mode::Each),
            "both" => Ok(Mode::Both),
            _ => Err(format!("unknown mode `{s}` (expected all, each or both)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    MpTrie,
    MpConcat,
    StdTrie,
    StdConcat,
    Brute,
}

impl Engine {
    pub const ALL: [Engine; 5] = [
        Engine::MpTrie,
        Engine::MpConcat,
        Engine::StdTrie,
        Engine::StdConcat,
        Engine::Brute,
    ];

    /// The four table-driven variants.
    pub const COMPARED: [Engine; 4] = [
        Engine::MpTrie,
        Engine::MpConcat,
        Engine::StdTrie,
        Engine::StdConcat,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Engine::MpTrie => "mp-trie",
            Engine::MpConcat => "mp-concat",
            Engine::StdTrie => "std-trie",
            Engine::StdConcat => "std-concat",
            Engine::Brute => "brute",
        }
    }

    pub fn layout(self) -> Layout {
        match self {
            Engine::MpConcat | Engine::StdConcat => Layout::Concatenated,
            _ => Layout::Merged,
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Engine::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                format!("unknown engine `{s}` (expected mp-trie, mp-concat, std-trie, std-concat or brute)")
            })
    }
}

/// Storage used by the packed engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// One `u64` or `u128` word when the state fits, `u64` limbs otherwise.
    #[default]
    Auto,
    Limbs8,
    Limbs16,
    Limbs32,
    Limbs64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    /// Windows containing every pattern, when the mode asks for it.
    pub c_all: Option<u64>,
    /// Windows containing each input pattern, when the mode asks for it.
    pub c_each: Option<Vec<u64>>,
    pub windows_total: u64,
}

/// Per-letter engine state behind a scan.
trait Kernel {
    fn feed(&mut self, sigma: u8);
    fn all(&self) -> bool;
    fn contained(&self, pattern: usize) -> bool;

    /// Increments `counts[p]` for every contained pattern `p`.
    #[inline]
    fn tally(&self, counts: &mut [u64]) {
        for (p, c) in counts.iter_mut().enumerate() {
            *c += self.contained(p) as u64;
        }
    }
}

struct WordKernel<W: Limb> {
    auto: WordAutomaton<W>,
    state: W,
}

impl<W: Limb> WordKernel<W> {
    fn new(tables: &TrieTables, w: usize) -> Result<Self> {
        let auto = WordAutomaton::new(tables, w)?;
        let state = auto.initial();
        Ok(WordKernel { auto, state })
    }
}

impl<W: Limb> Kernel for WordKernel<W> {
    #[inline(always)]
    fn feed(&mut self, sigma: u8) {
        self.state = self.auto.step(self.state, sigma);
    }

    #[inline(always)]
    fn all(&self) -> bool {
        self.auto.all_contained(self.state)
    }

    #[inline(always)]
    fn contained(&self, pattern: usize) -> bool {
        self.auto.contained(self.state, pattern)
    }

    #[inline]
    fn tally(&self, counts: &mut [u64]) {
        let misses = self.auto.misses(self.state);
        for (c, &bit) in counts.iter_mut().zip(self.auto.final_bits()) {
            *c += ((misses >> bit) & W::ONE == W::ZERO) as u64;
        }
    }
}

struct LimbKernel<L: Limb> {
    masks: MaskSet<L>,
    stepper: Stepper<L>,
    state: StateVector<L>,
}

impl<L: Limb> LimbKernel<L> {
    fn new(tables: &TrieTables, w: usize) -> Result<Self> {
        let masks = build_masks(tables, w)?;
        let stepper = Stepper::new(&masks);
        let state = StateVector::initial(&masks);
        Ok(LimbKernel {
            masks,
            stepper,
            state,
        })
    }
}

impl<L: Limb> Kernel for LimbKernel<L> {
    #[inline]
    fn feed(&mut self, sigma: u8) {
        self.stepper.step(&mut self.state, sigma, &self.masks);
    }

    fn all(&self) -> bool {
        crate::bitstate::all_contained(&self.state, &self.masks)
    }

    fn contained(&self, pattern: usize) -> bool {
        crate::bitstate::contained(&self.state, pattern, &self.masks).unwrap_or(false)
    }
}

/// Latest-start baseline: `d[i]` is the largest `s` such that the word of
/// node `i` is a subsequence of `t_s … t_m`.
struct StdKernel {
    classes: LetterClasses,
    ranges: Vec<(u32, u32)>,
    /// `(node, parent)` pairs per class, nodes in decreasing order.
    updates: Vec<(u32, u32)>,
    d: Vec<i64>,
    ends: Vec<usize>,
    distinct_ends: Vec<usize>,
    m: i64,
    w: i64,
}

const NEVER: i64 = i64::MIN / 4;

impl StdKernel {
    fn new(tables: &TrieTables, w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::ZeroWindow);
        }
        let classes = LetterClasses::new(tables);
        let mut per_class: Vec<Vec<(u32, u32)>> = vec![Vec::new(); classes.len()];
        for i in (1..=tables.k()).rev() {
            per_class[classes.class(tables.letter(i))].push((i as u32, tables.parent(i) as u32));
        }
        let mut ranges = Vec::with_capacity(per_class.len());
        let mut updates = Vec::with_capacity(tables.k());
        for list in per_class {
            let start = updates.len() as u32;
            updates.extend(list);
            ranges.push((start, updates.len() as u32));
        }
        let ends = tables.f().to_vec();
        let mut distinct_ends = ends.clone();
        distinct_ends.sort_unstable();
        distinct_ends.dedup();
        Ok(StdKernel {
            classes,
            ranges,
            updates,
            d: vec![NEVER; tables.k() + 1],
            ends,
            distinct_ends,
            m: 0,
            w: w as i64,
        })
    }
}

impl Kernel for StdKernel {
    #[inline(always)]
    fn feed(&mut self, sigma: u8) {
        self.m += 1;
        self.d[0] = self.m;
        let (start, end) = self.ranges[self.classes.class(sigma)];
        for &(node, parent) in &self.updates[start as usize..end as usize] {
            self.d[node as usize] = self.d[parent as usize];
        }
    }

    #[inline(always)]
    fn all(&self) -> bool {
        let oldest = self.m - self.w;
        self.distinct_ends.iter().all(|&f| self.d[f] > oldest)
    }

    #[inline(always)]
    fn contained(&self, pattern: usize) -> bool {
        self.d[self.ends[pattern]] > self.m - self.w
    }
}

/// Keeps the last `w` letters and checks each pattern directly.
struct BruteKernel {
    patterns: Vec<Pattern>,
    window: VecDeque<u8>,
    w: usize,
    hits: Vec<bool>,
}

impl BruteKernel {
    fn new(patterns: &[Pattern], w: usize) -> Result<Self> {
        if w == 0 {
            return Err(Error::ZeroWindow);
        }
        if patterns.is_empty() {
            return Err(Error::EmptyPatternSet);
        }
        Ok(BruteKernel {
            patterns: patterns.to_vec(),
            window: VecDeque::with_capacity(w + 1),
            w,
            hits: vec![false; patterns.len()],
        })
    }
}

impl Kernel for BruteKernel {
    fn feed(&mut self, sigma: u8) {
        self.window.push_back(sigma);
        if self.window.len() > self.w {
            self.window.pop_front();
        }
        let (a, b) = self.window.as_slices();
        for (hit, p) in self.hits.iter_mut().zip(&self.patterns) {
            *hit = is_subsequence(p.as_bytes(), a.iter().chain(b));
        }
    }

    fn all(&self) -> bool {
        self.hits.iter().all(|&h| h)
    }

    fn contained(&self, pattern: usize) -> bool {
        self.hits[pattern]
    }
}

/// Greedy left-to-right subsequence test.
pub fn is_subsequence<'a>(pattern: &[u8], window: impl IntoIterator<Item = &'a u8>) -> bool {
    let mut want = pattern.iter().peekable();
    for b in window {
        match want.peek() {
            None => break,
            Some(&&c) if c == *b => {
                want.next();
            }
            _ => {}
        }
    }
    want.peek().is_none()
}

fn drive<K: Kernel, I: IntoIterator<Item = u8>>(
    kernel: &mut K,
    text: I,
    w: usize,
    q: usize,
    mode: Mode,
) -> CountReport {
    let mut it = text.into_iter();
    for sigma in it.by_ref().take(w - 1) {
        kernel.feed(sigma);
    }
    let mut c_all = 0u64;
    let mut c_each = vec![0u64; if mode.counts_each() { q } else { 0 }];
    let mut windows = 0u64;
    match mode {
        Mode::All => {
            for sigma in it {
                kernel.feed(sigma);
                windows += 1;
                c_all += kernel.all() as u64;
            }
        }
        Mode::Each => {
            for sigma in it {
                kernel.feed(sigma);
                windows += 1;
                kernel.tally(&mut c_each);
            }
        }
        Mode::Both => {
            for sigma in it {
                kernel.feed(sigma);
                windows += 1;
                c_all += kernel.all() as u64;
                kernel.tally(&mut c_each);
            }
        }
    }
    CountReport {
        c_all: mode.counts_all().then_some(c_all),
        c_each: mode.counts_each().then_some(c_each),
        windows_total: windows,
    }
}

/// Counts with the packed automaton, picking the storage automatically.
pub fn scan_count(text: &[u8], tables: &TrieTables, w: usize, mode: Mode) -> Result<CountReport> {
    scan_count_with(text.iter().copied(), tables, w, mode, Backend::Auto)
}

/// Counts with the packed automaton over an explicit storage backend.
pub fn scan_count_with<I: IntoIterator<Item = u8>>(
    text: I,
    tables: &TrieTables,
    w: usize,
    mode: Mode,
    backend: Backend,
) -> Result<CountReport> {
    if w == 0 {
        return Err(Error::ZeroWindow);
    }
    let q = tables.q();
    let width = tables.k() * (crate::bitstate::compute_omega(w) as usize + 1);
    Ok(match backend {
        Backend::Auto if width <= 64 => drive(&mut WordKernel::<u64>::new(tables, w)?, text, w, q, mode),
        Backend::Auto if width <= 128 => drive(&mut WordKernel::<u128>::new(tables, w)?, text, w, q, mode),
        Backend::Auto | Backend::Limbs64 => drive(&mut LimbKernel::<u64>::new(tables, w)?, text, w, q, mode),
        Backend::Limbs8 => drive(&mut LimbKernel::<u8>::new(tables, w)?, text, w, q, mode),
        Backend::Limbs16 => drive(&mut LimbKernel::<u16>::new(tables, w)?, text, w, q, mode),
        Backend::Limbs32 => drive(&mut LimbKernel::<u32>::new(tables, w)?, text, w, q, mode),
    })
}

/// Counts with the latest-start baseline.
pub fn std_scan_count<I: IntoIterator<Item = u8>>(
    text: I,
    tables: &TrieTables,
    w: usize,
    mode: Mode,
) -> Result<CountReport> {
    let mut kernel = StdKernel::new(tables, w)?;
    Ok(drive(&mut kernel, text, w, tables.q(), mode))
}

/// Checks every window against every pattern.
pub fn brute_count(text: &[u8], patterns: &[Pattern], w: usize, mode: Mode) -> Result<CountReport> {
    if w == 0 {
        return Err(Error::ZeroWindow);
    }
    if patterns.is_empty() {
        return Err(Error::EmptyPatternSet);
    }
    let mut c_all = 0;
    let mut c_each = vec![0; patterns.len()];
    let windows = text.windows(w);
    let windows_total = windows.len() as u64;
    for window in windows {
        let mut every = true;
        for (c, p) in c_each.iter_mut().zip(patterns) {
            let hit = is_subsequence(p.as_bytes(), window);
            *c += hit as u64;
            every &= hit;
        }
        c_all += every as u64;
    }
    Ok(CountReport {
        c_all: mode.counts_all().then_some(c_all),
        c_each: mode.counts_each().then_some(c_each),
        windows_total,
    })
}

/// Counts with any engine, building the tables it needs.
pub fn count(engine: Engine, text: &[u8], patterns: &[Pattern], w: usize, mode: Mode) -> Result<CountReport> {
    match engine {
        Engine::Brute => brute_count(text, patterns, w, mode),
        Engine::MpTrie | Engine::MpConcat => {
            scan_count(text, &build_tables(patterns, engine.layout())?, w, mode)
        }
        Engine::StdTrie | Engine::StdConcat => {
            std_scan_count(text.iter().copied(), &build_tables(patterns, engine.layout())?, w, mode)
        }
    }
}

/// Containment flags for the window ending at `position`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowFlags {
    /// Letters read so far.
    pub position: u64,
    /// False until `position >= w`; the flags below are then all false.
    pub valid: bool,
    pub all: bool,
    pub each: Vec<bool>,
}

/// A scan fed one letter at a time.
pub struct Scanner {
    kernel: Box<dyn Kernel + Send>,
    w: usize,
    q: usize,
    mode: Mode,
    position: u64,
    c_all: u64,
    c_each: Vec<u64>,
}

impl Scanner {
    pub fn new(engine: Engine, patterns: &[Pattern], w: usize, mode: Mode) -> Result<Self> {
        if w == 0 {
            return Err(Error::ZeroWindow);
        }
        let kernel: Box<dyn Kernel + Send> = match engine {
            Engine::Brute => Box::new(BruteKernel::new(patterns, w)?),
            Engine::StdTrie | Engine::StdConcat => {
                Box::new(StdKernel::new(&build_tables(patterns, engine.layout())?, w)?)
            }
            Engine::MpTrie | Engine::MpConcat => {
                return Self::packed(&build_tables(patterns, engine.layout())?, w, mode, Backend::Auto)
            }
        };
        Ok(Self::wrap(kernel, w, patterns.len(), mode))
    }

    /// A packed-automaton scan over the given backend.
    pub fn packed(tables: &TrieTables, w: usize, mode: Mode, backend: Backend) -> Result<Self> {
        if w == 0 {
            return Err(Error::ZeroWindow);
        }
        let width = tables.k() * (crate::bitstate::compute_omega(w) as usize + 1);
        let kernel: Box<dyn Kernel + Send> = match backend {
            Backend::Auto if width <= 64 => Box::new(WordKernel::<u64>::new(tables, w)?),
            Backend::Auto if width <= 128 => Box::new(WordKernel::<u128>::new(tables, w)?),
            Backend::Auto | Backend::Limbs64 => Box::new(LimbKernel::<u64>::new(tables, w)?),
            Backend::Limbs8 => Box::new(LimbKernel::<u8>::new(tables, w)?),
            Backend::Limbs16 => Box::new(LimbKernel::<u16>::new(tables, w)?),
            Backend::Limbs32 => Box::new(LimbKernel::<u32>::new(tables, w)?),
        };
        Ok(Self::wrap(kernel, w, tables.q(), mode))
    }

    fn wrap(kernel: Box<dyn Kernel + Send>, w: usize, q: usize, mode: Mode) -> Self {
        Scanner {
            kernel,
            w,
            q,
            mode,
            position: 0,
            c_all: 0,
            c_each: vec![0; q],
        }
    }

    pub fn feed(&mut self, sigma: u8) -> WindowFlags {
        self.kernel.feed(sigma);
        self.position += 1;
        if self.position < self.w as u64 {
            return WindowFlags {
                position: self.position,
                valid: false,
                all: false,
                each: vec![false; self.q],
            };
        }
        let each: Vec<bool> = (0..self.q).map(|p| self.kernel.contained(p)).collect();
        let all = self.kernel.all();
        self.c_all += all as u64;
        for (c, &hit) in self.c_each.iter_mut().zip(&each) {
            *c += hit as u64;
        }
        WindowFlags {
            position: self.position,
            valid: true,
            all,
            each,
        }
    }

    pub fn position(&self) -> u64 {
        self.position
    }

    /// Counts accumulated so far.
    pub fn report(&self) -> CountReport {
        CountReport {
            c_all: self.mode.counts_all().then_some(self.c_all),
            c_each: self.mode.counts_each().then(|| self.c_each.clone()),
            windows_total: (self.position + 1).saturating_sub(self.w as u64),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const AD: &[u8] = b"dans ville il y a vie";

    fn pats(list: &[&str]) -> Vec<Pattern> {
        Pattern::parse_all(list).unwrap()
    }

    fn all_engines(text: &[u8], list: &[&str], w: usize, mode: Mode) -> CountReport {
        let p = pats(list);
        let first = count(Engine::Brute, text, &p, w, mode).unwrap();
        for e in Engine::COMPARED {
            assert_eq!(count(e, text, &p, w, mode).unwrap(), first, "{e}");
        }
        first
    }

    #[test]
    fn single_window_is_the_pattern() {
        let r = all_engines(b"tu", &["tu"], 2, Mode::Both);
        assert_eq!(r.c_all, Some(1));
        assert_eq!(r.c_each, Some(vec![1]));
        assert_eq!(r.windows_total, 1);
    }

    #[test]
    fn abcab() {
        // windows abc, bca, cab
        let r = all_engines(b"abcab", &["ab", "ca"], 3, Mode::Both);
        assert_eq!(r.c_all, Some(1));
        assert_eq!(r.c_each, Some(vec![2, 2]));
    }

    #[test]
    fn advertisement() {
        assert_eq!(AD.len(), 21);
        assert_eq!(all_engines(AD, &["vile"], 5, Mode::All).c_all, Some(1));
        assert_eq!(all_engines(AD, &["vie"], 5, Mode::All).c_all, Some(2));
        assert_eq!(all_engines(AD, &["vile"], 4, Mode::All).c_all, Some(0));
    }

    #[test]
    fn repeated_letter() {
        let r = all_engines(b"aaaa", &["a"], 2, Mode::Each);
        assert_eq!(r.c_each, Some(vec![3]));
        assert_eq!(r.c_all, None);
        assert_eq!(r.windows_total, 3);
    }

    #[test]
    fn window_longer_than_text() {
        let r = all_engines(b"ab", &["ab"], 5, Mode::Both);
        assert_eq!(r, CountReport { c_all: Some(0), c_each: Some(vec![0]), windows_total: 0 });
        let r = all_engines(b"", &["a"], 1, Mode::Both);
        assert_eq!(r.windows_total, 0);
    }

    #[test]
    fn greedy_subsequence() {
        assert!(is_subsequence(b"vile", b"ville"));
        for win in AD.windows(4) {
            assert!(!is_subsequence(b"vile", win));
        }
        assert!(!is_subsequence(b"abc", b"ab"));
        assert!(is_subsequence(b"", b""));
    }

    #[test]
    fn zero_window_rejected() {
        let p = pats(&["a"]);
        for e in Engine::ALL {
            assert_eq!(count(e, b"a", &p, 0, Mode::All), Err(Error::ZeroWindow));
        }
    }

    #[test]
    fn feed_flags() {
        let p = pats(&["tu"]);
        let mut s = Scanner::new(Engine::MpTrie, &p, 2, Mode::All).unwrap();
        assert!(!s.feed(b't').valid);
        let f = s.feed(b'u');
        assert!(f.valid && f.all && f.each == vec![true]);

        let mut s = Scanner::new(Engine::MpTrie, &p, 1, Mode::All).unwrap();
        let f = s.feed(b'x');
        assert!(f.valid && !f.all && f.each == vec![false]);
    }

    /// Exhaustive choice of increasing indices.
    fn exhaustive(pattern: &[u8], window: &[u8]) -> bool {
        fn go(p: &[u8], w: &[u8]) -> bool {
            match p.split_first() {
                None => true,
                Some((c, rest)) => (0..w.len()).any(|i| w[i] == *c && go(rest, &w[i + 1..])),
            }
        }
        go(pattern, window)
    }

    fn instance() -> impl Strategy<Value = (Vec<Vec<u8>>, Vec<u8>, usize)> {
        (
            prop::collection::vec(prop::collection::vec(b'a'..=b'd', 1..6), 1..5),
            prop::collection::vec(b'a'..=b'e', 0..80),
            1usize..25,
        )
    }

    proptest! {
        #[test]
        fn greedy_matches_exhaustive(
            p in prop::collection::vec(b'a'..=b'c', 0..5),
            win in prop::collection::vec(b'a'..=b'c', 0..=12),
        ) {
            prop_assert_eq!(is_subsequence(&p, &win), exhaustive(&p, &win));
        }

        #[test]
        fn engines_agree((list, text, w) in instance()) {
            let p = Pattern::parse_all(&list).unwrap();
            let oracle = brute_count(&text, &p, w, Mode::Both).unwrap();
            for e in Engine::COMPARED {
                prop_assert_eq!(&count(e, &text, &p, w, Mode::Both).unwrap(), &oracle);
            }
            for backend in [Backend::Limbs8, Backend::Limbs32] {
                let t = build_tables(&p, Layout::Merged).unwrap();
                prop_assert_eq!(&scan_count_with(text.iter().copied(), &t, w, Mode::Both, backend).unwrap(), &oracle);
            }
        }

        #[test]
        fn report_bounds((list, text, w) in instance()) {
            let p = Pattern::parse_all(&list).unwrap();
            let r = count(Engine::MpTrie, &text, &p, w, Mode::Both).unwrap();
            let each = r.c_each.unwrap();
            let all = r.c_all.unwrap();
            prop_assert!(each.iter().all(|&c| all <= c && c <= r.windows_total));
            prop_assert_eq!(r.windows_total, (text.len() + 1).saturating_sub(w) as u64);
            for i in 0..p.len() {
                for j in 0..p.len() {
                    if p[j].as_bytes().starts_with(p[i].as_bytes()) {
                        prop_assert!(each[i] >= each[j]);
                    }
                }
            }
        }

        #[test]
        fn feed_matches_scan((list, text, w) in instance()) {
            let p = Pattern::parse_all(&list).unwrap();
            for e in Engine::ALL {
                let mut s = Scanner::new(e, &p, w, Mode::Both).unwrap();
                let mut brute = Scanner::new(Engine::Brute, &p, w, Mode::Both).unwrap();
                for &b in &text {
                    prop_assert_eq!(s.feed(b), brute.feed(b));
                }
                prop_assert_eq!(s.report(), count(e, &text, &p, w, Mode::Both).unwrap());
            }
        }
    }
}
