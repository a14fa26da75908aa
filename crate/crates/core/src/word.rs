//! Single-word form of the packed automaton.
//!
//! When `k(Ω + 1)` fits one machine word the masks are flattened into plain
//! integers and one transition becomes a few shifts, ands and adds. Lanes of
//! pattern starts are dropped from the first-type masks: a left shift by `i`
//! blocks always brings zeros into root block `i`, so those terms add nothing.
//!
//! Containment is tested for all end blocks at once: adding `2^Ω - 1 - w` to
//! a lane carries into its overflow bit exactly when the lane exceeds `w`.

use crate::bits::Limb;
use crate::bitstate::{build_masks, MaskSet};
use crate::error::{Error, Result};
use crate::trie::TrieTables;

#[derive(Clone, Debug)]
pub struct WordAutomaton<W: Limb> {
    /// Offset of each byte's row in `rows`.
    row_of: [u32; 256],
    /// Every row holds `stride` `(shift, mask)` terms: `(0, N_σ)` first, then
    /// the non-empty first-type terms, padded with zero masks so every letter
    /// costs the same.
    rows: Vec<(u32, W)>,
    stride: usize,
    e1: W,
    e2: W,
    omega: u32,
    i0: W,
    final_lanes: W,
    bias: W,
    final_over: W,
    /// Overflow bit position of each pattern's end block.
    final_bits: Vec<u32>,
}

fn single<W: Limb>(v: &crate::bits::LimbVec<W>) -> W {
    v.limbs()[0]
}

impl<W: Limb> WordAutomaton<W> {
    pub fn new(tables: &TrieTables, w: usize) -> Result<Self> {
        let masks: MaskSet<W> = build_masks(tables, w)?;
        Self::from_masks(tables, &masks)
    }

    pub fn from_masks(tables: &TrieTables, masks: &MaskSet<W>) -> Result<Self> {
        let width = masks.width();
        if width > W::BITS as usize {
            return Err(Error::WidthExceeded {
                width,
                capacity: W::BITS as usize,
            });
        }
        let omega = masks.omega();
        let big = masks.big_block() as u32;
        let lane = (W::ONE << omega).wrapping_sub(W::ONE);

        let mut roots = W::ZERO;
        for i in 1..=tables.k() {
            if tables.parent(i) == 0 {
                roots = roots | (lane << ((i as u32 - 1) * big));
            }
        }

        let classes = masks.classes();
        let per_class: Vec<Vec<(u32, W)>> = (0..classes.len())
            .map(|class| {
                let mut row = vec![(0, single(masks.second_type_by_class(class)))];
                for (j, m) in masks.first_type_by_class(class) {
                    let m = single(m) & !roots;
                    if m != W::ZERO {
                        row.push((*j as u32 * big, m));
                    }
                }
                row
            })
            .collect();
        let stride = per_class.iter().map(Vec::len).max().unwrap_or(1);
        let mut rows = Vec::with_capacity(stride * per_class.len());
        for mut row in per_class {
            row.resize(stride, (0, W::ZERO));
            rows.extend(row);
        }
        let mut row_of = [0u32; 256];
        for (b, slot) in row_of.iter_mut().enumerate() {
            *slot = (classes.class(b as u8) * stride) as u32;
        }

        let slack = W::truncate_u64(masks.infinity() - masks.window() as u64);
        let mut final_lanes = W::ZERO;
        let mut bias = W::ZERO;
        let mut final_over = W::ZERO;
        let mut final_bits = Vec::with_capacity(masks.q());
        for &off in masks.final_offsets() {
            let off = off as u32;
            // duplicate patterns share an end block, so set rather than add
            final_lanes = final_lanes | (lane << off);
            bias = bias | (slack << off);
            final_over = final_over | (W::ONE << (off + omega));
            final_bits.push(off + omega);
        }

        Ok(WordAutomaton {
            row_of,
            rows,
            stride,
            e1: single(masks.e1()),
            e2: single(masks.e2()),
            omega,
            i0: single(masks.i0()),
            final_lanes,
            bias,
            final_over,
            final_bits,
        })
    }

    pub fn initial(&self) -> W {
        self.i0
    }

    #[inline(always)]
    pub fn step(&self, l: W, sigma: u8) -> W {
        let off = self.row_of[sigma as usize] as usize;
        let mut t = self.e1;
        for &(shift, mask) in &self.rows[off..off + self.stride] {
            t = t.wrapping_add((l << shift) & mask);
        }
        t.wrapping_sub((t & self.e2) >> self.omega)
    }

    /// Overflow bits set at the end blocks whose lane exceeds `w`.
    #[inline(always)]
    pub fn misses(&self, l: W) -> W {
        ((l & self.final_lanes).wrapping_add(self.bias)) & self.final_over
    }

    #[inline(always)]
    pub fn all_contained(&self, l: W) -> bool {
        self.misses(l) == W::ZERO
    }

    #[inline(always)]
    pub fn contained(&self, l: W, pattern: usize) -> bool {
        (self.misses(l) >> self.final_bits[pattern]) & W::ONE == W::ZERO
    }

    pub fn final_bits(&self) -> &[u32] {
        &self.final_bits
    }
}
