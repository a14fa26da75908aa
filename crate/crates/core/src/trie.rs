//! Flattened pattern tables.
//!
//! A pattern set becomes three 1-indexed tables: `tr[i]` is the letter of
//! node `i`, `pr[i]` its parent (0 for a pattern start) and `f[p]` the node
//! where pattern `p` ends. Every parent precedes its children, which is what
//! lets the packed state reach a parent's lane with a plain left shift.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A non-empty byte string searched for as a serial episode.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pattern(Vec<u8>);

impl Pattern {
    pub fn new(bytes: impl Into<Vec<u8>>) -> Result<Self> {
        let bytes = bytes.into();
        if bytes.is_empty() {
            return Err(Error::InvalidPattern { index: 0 });
        }
        Ok(Pattern(bytes))
    }

    /// Validates a whole list, reporting the index of the first empty entry.
    pub fn parse_all<I, B>(items: I) -> Result<Vec<Pattern>>
    where
        I: IntoIterator<Item = B>,
        B: AsRef<[u8]>,
    {
        items
            .into_iter()
            .enumerate()
            .map(|(index, b)| {
                Pattern::new(b.as_ref().to_vec()).map_err(|_| Error::InvalidPattern { index })
            })
            .collect()
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", String::from_utf8_lossy(&self.0))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

/// How patterns are laid out in the tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Layout {
    /// Common prefixes share nodes.
    Merged,
    /// Every pattern gets its own chain.
    Concatenated,
}

#[derive(Clone, PartialEq, Eq)]
pub struct TrieTables {
    tr: Vec<u8>,
    pr: Vec<usize>,
    f: Vec<usize>,
    layout: Layout,
}

impl TrieTables {
    /// Node count.
    pub fn k(&self) -> usize {
        self.tr.len()
    }

    /// Pattern count, duplicates included.
    pub fn q(&self) -> usize {
        self.f.len()
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    /// Letters, `tr()[i - 1]` being node `i`.
    pub fn tr(&self) -> &[u8] {
        &self.tr
    }

    /// Parents, `pr()[i - 1]` being the parent of node `i`.
    pub fn pr(&self) -> &[usize] {
        &self.pr
    }

    /// End node of each input pattern.
    pub fn f(&self) -> &[usize] {
        &self.f
    }

    /// Letter of 1-indexed node `i`.
    #[inline]
    pub fn letter(&self, i: usize) -> u8 {
        self.tr[i - 1]
    }

    /// Parent of 1-indexed node `i`.
    #[inline]
    pub fn parent(&self, i: usize) -> usize {
        self.pr[i - 1]
    }

    pub fn from_bytes<B: AsRef<[u8]>>(patterns: &[B], layout: Layout) -> Result<Self> {
        build_tables(&Pattern::parse_all(patterns)?, layout)
    }
}

impl fmt::Debug for TrieTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TrieTables")
            .field("tr", &String::from_utf8_lossy(&self.tr))
            .field("pr", &self.pr)
            .field("f", &self.f)
            .field("layout", &self.layout)
            .finish()
    }
}

/// Builds the tables, inserting patterns in input order and appending new
/// nodes at the end so numbering is deterministic.
pub fn build_tables(patterns: &[Pattern], layout: Layout) -> Result<TrieTables> {
    if patterns.is_empty() {
        return Err(Error::EmptyPatternSet);
    }
    let total: usize = patterns.iter().map(Pattern::len).sum();
    let mut tr = Vec::with_capacity(total);
    let mut pr = Vec::with_capacity(total);
    let mut f = Vec::with_capacity(patterns.len());

    match layout {
        Layout::Concatenated => {
            for p in patterns {
                let mut parent = 0;
                for &b in p.as_bytes() {
                    tr.push(b);
                    pr.push(parent);
                    parent = tr.len();
                }
                f.push(parent);
            }
        }
        Layout::Merged => {
            let mut children: HashMap<(usize, u8), usize> = HashMap::new();
            for p in patterns {
                let mut node = 0;
                for &b in p.as_bytes() {
                    node = *children.entry((node, b)).or_insert_with(|| {
                        tr.push(b);
                        pr.push(node);
                        tr.len()
                    });
                }
                f.push(node);
            }
        }
    }

    Ok(TrieTables { tr, pr, f, layout })
}

/// Letters on the path from the root to `node`.
pub fn path_word(tables: &TrieTables, node: usize) -> Result<Pattern> {
    if node == 0 || node > tables.k() {
        return Err(Error::NodeOutOfRange {
            node,
            k: tables.k(),
        });
    }
    let mut word = Vec::new();
    let mut i = node;
    while i != 0 {
        word.push(tables.letter(i));
        i = tables.parent(i);
    }
    word.reverse();
    Ok(Pattern(word))
}

/// Distinct letters used by the tables.
pub fn pattern_alphabet(tables: &TrieTables) -> BTreeSet<u8> {
    tables.tr.iter().copied().collect()
}
