//! The packed automaton state and its constant-mask transition.
//!
//! Node `i` of the tables owns big block `i` (counted from the least
//! significant end) of `Ω + 1` bits: one overflow bit on top of an `Ω`-bit
//! small block holding `l_i`, the length of the shortest suffix of the text
//! read so far that contains the root-to-`i` word as a subsequence. The
//! all-ones small block `2^Ω - 1` stands for "no such suffix".
//!
//! Reading letter `σ` sends `l_i` to `Next(l_{pr[i]})` when `tr[i] = σ` and
//! to `Next(l_i)` otherwise, where `Next` is a saturating increment. With
//! `j = i - pr[i]`, a left shift by `j` big blocks moves the parent's value
//! into block `i`, so one transition is
//!
//! ```text
//! T  = Σ_j ((L << j(Ω+1)) & M_σ^j) + (L & N_σ) + E1
//! L' = T - ((T & E2) >> Ω)
//! ```
//!
//! where the second line turns every block that overflowed past `2^Ω - 1`
//! back into `2^Ω - 1`.

use std::fmt::Write as _;

use crate::bits::{Limb, LimbVec};
use crate::error::{Error, Result};
use crate::trie::TrieTables;

/// Smallest `Ω` with `w + 2 <= 2^Ω`.
pub fn compute_omega(w: usize) -> u32 {
    let target = w as u64 + 2;
    u64::BITS - (target - 1).leading_zeros()
}

/// Letter classes: 0 for letters outside the patterns, `1..` for pattern
/// letters in order of first appearance in `tr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LetterClasses {
    class_of: [u16; 256],
    letters: Vec<u8>,
}

impl LetterClasses {
    pub fn new(tables: &TrieTables) -> Self {
        let mut class_of = [0u16; 256];
        let mut letters = Vec::new();
        for &b in tables.tr() {
            if class_of[b as usize] == 0 {
                letters.push(b);
                class_of[b as usize] = letters.len() as u16;
            }
        }
        LetterClasses { class_of, letters }
    }

    #[inline(always)]
    pub fn class(&self, sigma: u8) -> usize {
        self.class_of[sigma as usize] as usize
    }

    /// Number of classes including the "other" class 0.
    pub fn len(&self) -> usize {
        self.letters.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Pattern letters, class `c` being `letters()[c - 1]`.
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }
}

/// Every precomputed mask and constant for one (tables, window) pair.
#[derive(Clone, Debug)]
pub struct MaskSet<L: Limb = u64> {
    omega: u32,
    k: usize,
    w: usize,
    classes: LetterClasses,
    first_type: Vec<Vec<(usize, LimbVec<L>)>>,
    second_type: Vec<LimbVec<L>>,
    e1: LimbVec<L>,
    e2: LimbVec<L>,
    i0: LimbVec<L>,
    final_offsets: Vec<usize>,
}

impl<L: Limb> MaskSet<L> {
    pub fn omega(&self) -> u32 {
        self.omega
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn q(&self) -> usize {
        self.final_offsets.len()
    }

    pub fn window(&self) -> usize {
        self.w
    }

    /// Block values strictly below this count as contained.
    pub fn threshold(&self) -> u64 {
        self.w as u64 + 1
    }

    /// `k(Ω + 1)`.
    pub fn width(&self) -> usize {
        self.k * self.big_block()
    }

    pub fn big_block(&self) -> usize {
        self.omega as usize + 1
    }

    /// The `2^Ω - 1` code.
    pub fn infinity(&self) -> u64 {
        (1u64 << self.omega) - 1
    }

    /// Bit offset of 1-indexed block `i`.
    pub fn block_offset(&self, i: usize) -> usize {
        (i - 1) * self.big_block()
    }

    pub fn classes(&self) -> &LetterClasses {
        &self.classes
    }

    /// `(j, M_σ^j)` pairs in increasing `j`; empty for letters outside the patterns.
    pub fn first_type(&self, sigma: u8) -> &[(usize, LimbVec<L>)] {
        &self.first_type[self.classes.class(sigma)]
    }

    /// `N_σ`, or `N_other` for letters outside the patterns.
    pub fn second_type(&self, sigma: u8) -> &LimbVec<L> {
        &self.second_type[self.classes.class(sigma)]
    }

    pub(crate) fn first_type_by_class(&self, class: usize) -> &[(usize, LimbVec<L>)] {
        &self.first_type[class]
    }

    pub(crate) fn second_type_by_class(&self, class: usize) -> &LimbVec<L> {
        &self.second_type[class]
    }

    pub fn n_other(&self) -> &LimbVec<L> {
        &self.second_type[0]
    }

    pub fn e1(&self) -> &LimbVec<L> {
        &self.e1
    }

    pub fn e2(&self) -> &LimbVec<L> {
        &self.e2
    }

    pub fn i0(&self) -> &LimbVec<L> {
        &self.i0
    }

    /// Bit offset of each pattern's end block.
    pub fn final_offsets(&self) -> &[usize] {
        &self.final_offsets
    }
}

/// Builds every mask in one left-to-right pass over `tr`, moving a block
/// cursor by `Ω + 1` bits per node.
pub fn build_masks<L: Limb>(tables: &TrieTables, w: usize) -> Result<MaskSet<L>> {
    if w == 0 {
        return Err(Error::ZeroWindow);
    }
    let omega = compute_omega(w);
    let big = omega as usize + 1;
    let k = tables.k();
    let width = k * big;
    let classes = LetterClasses::new(tables);

    let mut first_type: Vec<Vec<(usize, LimbVec<L>)>> = vec![Vec::new(); classes.len()];
    let mut e1 = LimbVec::<L>::zeros(width);
    let mut e2 = LimbVec::<L>::zeros(width);
    let mut i0 = LimbVec::<L>::zeros(width);

    // cursors hold the small block, its low bit and the overflow bit of block i
    let mut ones = LimbVec::<L>::zeros(width);
    let mut low = LimbVec::<L>::zeros(width);
    let mut over = LimbVec::<L>::zeros(width);
    if k > 0 {
        let mut unit = LimbVec::<L>::zeros(width);
        unit.set_bit(0, true);
        low.copy_from(&unit);
        over = unit.shl(omega as usize);
        ones = over.sub(&unit);
    }
    let mut scratch = LimbVec::<L>::zeros(width);

    for i in 1..=k {
        let j = i - tables.parent(i);
        let slot = &mut first_type[classes.class(tables.letter(i))];
        let pos = match slot.iter().position(|(jj, _)| *jj == j) {
            Some(pos) => pos,
            None => {
                slot.push((j, LimbVec::zeros(width)));
                slot.len() - 1
            }
        };
        slot[pos].1.add_assign(&ones);
        i0.add_assign(&ones);
        e1.add_assign(&low);
        e2.add_assign(&over);

        for cursor in [&mut ones, &mut low, &mut over] {
            cursor.shl_into(big, &mut scratch);
            std::mem::swap(cursor, &mut scratch);
        }
    }

    let second_type = first_type
        .iter_mut()
        .map(|slot| {
            slot.sort_by_key(|(j, _)| *j);
            let mut n = i0.clone();
            for (_, m) in slot.iter() {
                n.sub_assign(m);
            }
            n
        })
        .collect();

    let final_offsets = tables.f().iter().map(|&node| (node - 1) * big).collect();

    Ok(MaskSet {
        omega,
        k,
        w,
        classes,
        first_type,
        second_type,
        e1,
        e2,
        i0,
        final_offsets,
    })
}

/// The packed state `L`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct StateVector<L: Limb = u64>(LimbVec<L>);

impl<L: Limb> StateVector<L> {
    /// `I_0`, every lane at the infinity code.
    pub fn initial(masks: &MaskSet<L>) -> Self {
        StateVector(masks.i0.clone())
    }

    pub fn from_bits(bits: LimbVec<L>) -> Self {
        StateVector(bits)
    }

    pub fn bits(&self) -> &LimbVec<L> {
        &self.0
    }

    pub fn into_bits(self) -> LimbVec<L> {
        self.0
    }

    /// Raw small block of 1-indexed node `i`.
    pub fn block(&self, masks: &MaskSet<L>, i: usize) -> u64 {
        self.0.field(masks.block_offset(i), masks.omega as usize)
    }
}

/// Packs lane values `⟨l_1, …, l_k⟩` into a state.
pub fn encode<L: Limb>(values: &[u64], masks: &MaskSet<L>) -> Result<StateVector<L>> {
    if values.len() != masks.k {
        return Err(Error::BlockCountMismatch {
            expected: masks.k,
            got: values.len(),
        });
    }
    let mut bits = LimbVec::zeros(masks.width());
    for (idx, &v) in values.iter().enumerate() {
        if v > masks.infinity() {
            return Err(Error::BlockValueOutOfRange {
                block: idx + 1,
                value: v,
                omega: masks.omega,
            });
        }
        bits.set_field(masks.block_offset(idx + 1), masks.omega as usize, v);
    }
    Ok(StateVector(bits))
}

pub fn decode<L: Limb>(state: &StateVector<L>, masks: &MaskSet<L>) -> Result<Vec<u64>> {
    if let Some(block) = (1..=masks.k).find(|&i| state.0.bit(masks.block_offset(i) + masks.omega as usize)) {
        return Err(Error::CorruptState { block });
    }
    Ok((1..=masks.k).map(|i| state.block(masks, i)).collect())
}

/// Intermediate values of one transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition<L: Limb = u64> {
    /// Sum before the overflow repair.
    pub t: LimbVec<L>,
    /// `T & E2`.
    pub overflow: LimbVec<L>,
    pub next: StateVector<L>,
}

/// Reusable scratch space for stepping without allocating.
#[derive(Clone, Debug)]
pub struct Stepper<L: Limb = u64> {
    t: LimbVec<L>,
    tmp: LimbVec<L>,
    corr: LimbVec<L>,
}

impl<L: Limb> Stepper<L> {
    pub fn new(masks: &MaskSet<L>) -> Self {
        let z = LimbVec::zeros(masks.width());
        Stepper {
            t: z.clone(),
            tmp: z.clone(),
            corr: z,
        }
    }

    /// Applies the transition for `sigma` to `state` in place.
    #[inline]
    pub fn step(&mut self, state: &mut StateVector<L>, sigma: u8, masks: &MaskSet<L>) {
        self.step_class(state, masks.classes.class(sigma), masks);
    }

    #[inline]
    pub(crate) fn step_class(&mut self, state: &mut StateVector<L>, class: usize, masks: &MaskSet<L>) {
        let l = &state.0;
        let big = masks.big_block();
        self.t.clear();
        for (j, m) in masks.first_type_by_class(class) {
            l.shl_and_into(j * big, m, &mut self.tmp);
            self.t.add_assign(&self.tmp);
        }
        self.tmp.copy_from(l);
        self.tmp.and_assign(masks.second_type_by_class(class));
        self.t.add_assign(&self.tmp);
        self.t.add_assign(&masks.e1);

        self.tmp.copy_from(&self.t);
        self.tmp.and_assign(&masks.e2);
        self.tmp.shr_into(masks.omega as usize, &mut self.corr);
        self.t.sub_assign(&self.corr);
        std::mem::swap(&mut state.0, &mut self.t);
    }
}

/// One transition, returning the new state.
pub fn step<L: Limb>(state: &StateVector<L>, sigma: u8, masks: &MaskSet<L>) -> StateVector<L> {
    let mut next = state.clone();
    Stepper::new(masks).step(&mut next, sigma, masks);
    next
}

/// One transition with its intermediate sum and overflow pattern exposed.
pub fn step_traced<L: Limb>(state: &StateVector<L>, sigma: u8, masks: &MaskSet<L>) -> Transition<L> {
    let big = masks.big_block();
    let l = &state.0;
    let mut t = LimbVec::zeros(masks.width());
    for (j, m) in masks.first_type(sigma) {
        t.add_assign(&l.shl(j * big).and(m));
    }
    t.add_assign(&l.and(masks.second_type(sigma)));
    t.add_assign(&masks.e1);
    let overflow = t.and(&masks.e2);
    let next = StateVector(t.sub(&overflow.shr(masks.omega as usize)));
    Transition { t, overflow, next }
}

/// Whether pattern `pattern` (0-indexed) occurs within the last `w` letters.
pub fn contained<L: Limb>(state: &StateVector<L>, pattern: usize, masks: &MaskSet<L>) -> Result<bool> {
    let offset = *masks
        .final_offsets
        .get(pattern)
        .ok_or(Error::PatternOutOfRange {
            index: pattern,
            q: masks.q(),
        })?;
    Ok(state.0.field(offset, masks.omega as usize) < masks.threshold())
}

pub fn all_contained<L: Limb>(state: &StateVector<L>, masks: &MaskSet<L>) -> bool {
    masks
        .final_offsets
        .iter()
        .all(|&off| state.0.field(off, masks.omega as usize) < masks.threshold())
}

/// Blocks `k` down to 1 as `overflow:small`, separated by `|`.
pub fn render<L: Limb>(bits: &LimbVec<L>, masks: &MaskSet<L>) -> String {
    let om = masks.omega as usize;
    let mut out = String::new();
    for i in (1..=masks.k).rev() {
        let off = masks.block_offset(i);
        let small = bits.field(off, om);
        let _ = write!(out, "{}:{:0width$b}", bits.bit(off + om) as u8, small, width = om);
        if i > 1 {
            out.push('|');
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trie::{Layout, TrieTables};
    use proptest::prelude::*;

    fn tu_tue_tutu() -> (TrieTables, MaskSet) {
        let t = TrieTables::from_bytes(&["tu", "tue", "tutu"], Layout::Merged).unwrap();
        let m = build_masks(&t, 13).unwrap();
        (t, m)
    }

    /// Blocks of `bits` whose small block is all ones.
    fn full_blocks<L: Limb>(bits: &LimbVec<L>, m: &MaskSet<L>) -> Vec<usize> {
        (1..=m.k())
            .filter(|&i| bits.field(m.block_offset(i), m.omega() as usize) == m.infinity())
            .collect()
    }

    fn mask_of<'a>(m: &'a MaskSet, sigma: u8, j: usize) -> &'a LimbVec {
        &m.first_type(sigma).iter().find(|(jj, _)| *jj == j).unwrap().1
    }

    #[test]
    fn omega_values() {
        assert_eq!(compute_omega(13), 4);
        assert_eq!(compute_omega(2), 2);
        assert_eq!(compute_omega(15), 5);
        assert_eq!(compute_omega(14), 4);
        assert_eq!(compute_omega(1), 2);
    }

    #[test]
    fn tu_tue_tutu_masks() {
        let (_, m) = tu_tue_tutu();
        assert_eq!(m.omega(), 4);
        assert_eq!(m.width(), 25);
        assert_eq!(m.first_type(b't').len(), 2);
        assert_eq!(m.first_type(b'u').len(), 1);
        assert_eq!(m.first_type(b'e').len(), 1);
        assert_eq!(full_blocks(mask_of(&m, b't', 1), &m), vec![1]);
        assert_eq!(full_blocks(mask_of(&m, b't', 2), &m), vec![4]);
        assert_eq!(full_blocks(mask_of(&m, b'u', 1), &m), vec![2, 5]);
        assert_eq!(full_blocks(mask_of(&m, b'e', 1), &m), vec![3]);
        assert_eq!(full_blocks(m.second_type(b't'), &m), vec![2, 3, 5]);
        assert_eq!(full_blocks(m.second_type(b'u'), &m), vec![1, 3, 4]);
        assert_eq!(full_blocks(m.second_type(b'e'), &m), vec![1, 2, 4, 5]);
        assert_eq!(full_blocks(m.n_other(), &m), vec![1, 2, 3, 4, 5]);
        assert_eq!(render(m.e1(), &m), "0:0001|0:0001|0:0001|0:0001|0:0001");
        assert_eq!(render(m.e2(), &m), "1:0000|1:0000|1:0000|1:0000|1:0000");
        assert_eq!(m.final_offsets(), &[5, 10, 20]);
    }

    #[test]
    fn one_node_masks() {
        let t = TrieTables::from_bytes(&["a"], Layout::Merged).unwrap();
        let m: MaskSet = build_masks(&t, 2).unwrap();
        assert_eq!(m.omega(), 2);
        assert_eq!(mask_of(&m, b'a', 1).to_bit_string(), "011");
        assert!(m.second_type(b'a').is_zero());
        assert_eq!(m.e1().to_bit_string(), "001");
        assert_eq!(m.e2().to_bit_string(), "100");
    }

    /// Direct per-block evaluation of the mask predicates.
    fn brute_masks(t: &TrieTables, sigma: u8) -> (Vec<(usize, Vec<usize>)>, Vec<usize>) {
        let mut first: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        let mut second = Vec::new();
        for i in 1..=t.k() {
            if t.letter(i) == sigma {
                first.entry(i - t.parent(i)).or_default().push(i);
            } else {
                second.push(i);
            }
        }
        (first.into_iter().collect(), second)
    }

    #[test]
    fn concatenated_masks_match_predicate() {
        let t = TrieTables::from_bytes(&["tu", "tue", "tutu"], Layout::Concatenated).unwrap();
        let m: MaskSet = build_masks(&t, 13).unwrap();
        for sigma in [b't', b'u', b'e'] {
            let (first, second) = brute_masks(&t, sigma);
            let got: Vec<(usize, Vec<usize>)> = m
                .first_type(sigma)
                .iter()
                .map(|(j, mask)| (*j, full_blocks(mask, &m)))
                .collect();
            assert_eq!(got, first);
            assert_eq!(full_blocks(m.second_type(sigma), &m), second);
        }
        // t nodes 1, 3, 6 are roots and 8 follows u at 7
        let t_masks: Vec<(usize, Vec<usize>)> = brute_masks(&t, b't').0;
        assert_eq!(t_masks, vec![(1, vec![1, 8]), (3, vec![3]), (6, vec![6])]);
    }

    #[test]
    fn encode_worked_state() {
        let (_, m) = tu_tue_tutu();
        let l = encode(&[2, 5, 15, 5, 15], &m).unwrap();
        assert_eq!(render(l.bits(), &m), "0:1111|0:0101|0:1111|0:0101|0:0010");
        assert_eq!(encode(&[15; 5], &m).unwrap(), StateVector::initial(&m));
        assert_eq!(decode(&l, &m).unwrap(), vec![2, 5, 15, 5, 15]);
        assert_eq!(decode(&StateVector::initial(&m), &m).unwrap(), vec![15; 5]);

        let t = TrieTables::from_bytes(&["a"], Layout::Merged).unwrap();
        let m1: MaskSet = build_masks(&t, 2).unwrap();
        assert_eq!(encode(&[1], &m1).unwrap().bits().to_bit_string(), "001");
    }

    #[test]
    fn encode_decode_errors() {
        let (_, m) = tu_tue_tutu();
        assert_eq!(
            encode(&[2, 5, 16, 5, 15], &m),
            Err(Error::BlockValueOutOfRange { block: 3, value: 16, omega: 4 })
        );
        assert_eq!(
            encode(&[1, 2], &m),
            Err(Error::BlockCountMismatch { expected: 5, got: 2 })
        );
        let mut bits = StateVector::initial(&m).into_bits();
        bits.set_bit(m.block_offset(2) + 4, true);
        assert_eq!(decode(&StateVector::from_bits(bits), &m), Err(Error::CorruptState { block: 2 }));
    }

    #[test]
    fn worked_transition_on_t() {
        let (_, m) = tu_tue_tutu();
        let l = encode(&[2, 5, 15, 5, 15], &m).unwrap();
        let tr = step_traced(&l, b't', &m);
        assert_eq!(render(&tr.t, &m), "1:0000|0:0110|1:0000|0:0110|0:0001");
        assert_eq!(render(&tr.overflow, &m), "1:0000|0:0000|1:0000|0:0000|0:0000");
        assert_eq!(decode(&tr.next, &m).unwrap(), vec![1, 6, 15, 6, 15]);
        assert_eq!(step(&l, b't', &m), tr.next);
    }

    #[test]
    fn other_letter_keeps_initial_state() {
        let (_, m) = tu_tue_tutu();
        let i0 = StateVector::initial(&m);
        assert_eq!(step(&i0, b'z', &m), i0);
        assert_eq!(decode(&step(&i0, b't', &m), &m).unwrap(), vec![1, 15, 15, 15, 15]);
    }

    #[test]
    fn containment() {
        let (_, m) = tu_tue_tutu();
        let s = encode(&[1, 6, 15, 6, 15], &m).unwrap();
        assert!(contained(&s, 0, &m).unwrap());
        assert!(!contained(&s, 2, &m).unwrap());
        assert!(!all_contained(&s, &m));
        assert!(contained(&s, 3, &m).is_err());
        assert!(!all_contained(&StateVector::initial(&m), &m));

        let edge = encode(&[1, 13, 14, 13, 13], &m).unwrap();
        assert!(contained(&edge, 0, &m).unwrap());
        assert!(!contained(&edge, 1, &m).unwrap());
        let all = encode(&[1, 13, 13, 13, 13], &m).unwrap();
        assert!(all_contained(&all, &m));
    }

    /// Length of the shortest suffix of `text` containing `word`, if any.
    fn shortest_suffix(text: &[u8], word: &[u8]) -> Option<usize> {
        (1..=text.len()).find(|&len| {
            let mut it = text[text.len() - len..].iter();
            word.iter().all(|c| it.any(|t| t == c))
        })
    }

    fn semantics_check<L: Limb>(pats: &[Vec<u8>], text: &[u8], w: usize, layout: Layout) {
        let t = TrieTables::from_bytes(pats, layout).unwrap();
        let m = build_masks::<L>(&t, w).unwrap();
        let words: Vec<Vec<u8>> = (1..=t.k())
            .map(|i| crate::trie::path_word(&t, i).unwrap().as_bytes().to_vec())
            .collect();
        let mut state = StateVector::initial(&m);
        let mut stepper = Stepper::new(&m);
        for end in 1..=text.len() {
            stepper.step(&mut state, text[end - 1], &m);
            assert!(!state.bits().intersects(m.e2()));
            let got = decode(&state, &m).unwrap();
            for i in 1..=t.k() {
                let expect = match shortest_suffix(&text[..end], &words[i - 1]) {
                    Some(len) if (len as u64) < m.infinity() => len as u64,
                    _ => m.infinity(),
                };
                assert_eq!(got[i - 1], expect, "node {i} after {end} letters");
                if t.parent(i) != 0 {
                    assert!(got[i - 1] >= got[t.parent(i) - 1]);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn roundtrip(vals in prop::collection::vec(0u64..16, 5)) {
            let (_, m) = tu_tue_tutu();
            prop_assert_eq!(decode(&encode(&vals, &m).unwrap(), &m).unwrap(), vals);
        }

        #[test]
        fn state_semantics(
            pats in prop::collection::vec(prop::collection::vec(b'a'..=b'c', 1..5), 1..4),
            text in prop::collection::vec(b'a'..=b'd', 0..40),
            w in 1usize..12,
        ) {
            semantics_check::<u64>(&pats, &text, w, Layout::Merged);
            semantics_check::<u8>(&pats, &text, w, Layout::Concatenated);
        }

        #[test]
        fn masks_partition_blocks(
            pats in prop::collection::vec(prop::collection::vec(b'a'..=b'c', 1..5), 1..4),
            w in 1usize..40,
        ) {
            let t = TrieTables::from_bytes(&pats, Layout::Merged).unwrap();
            let m: MaskSet<u16> = build_masks(&t, w).unwrap();
            prop_assert_eq!(m.e1().count_ones() as usize, t.k());
            prop_assert_eq!(m.e2().count_ones() as usize, t.k());
            prop_assert!(!m.e1().intersects(m.e2()));
            for sigma in [b'a', b'b', b'c', b'z'] {
                let mut union = m.second_type(sigma).clone();
                for (_, mask) in m.first_type(sigma) {
                    prop_assert!(!union.intersects(mask));
                    union.or_assign(mask);
                }
                prop_assert_eq!(&union, m.i0());
            }
        }

        #[test]
        fn transition_addends_are_disjoint(
            pats in prop::collection::vec(prop::collection::vec(b'a'..=b'c', 1..5), 1..4),
            seed in prop::collection::vec(0u64..64, 24),
            sigma in b'a'..=b'd',
        ) {
            let t = TrieTables::from_bytes(&pats, Layout::Merged).unwrap();
            let m: MaskSet = build_masks(&t, 20).unwrap();
            let vals: Vec<u64> = seed.iter().cycle().take(t.k()).map(|v| v % 32).collect();
            let l = encode(&vals, &m).unwrap();
            let mut addends: Vec<LimbVec> = m
                .first_type(sigma)
                .iter()
                .map(|(j, mask)| l.bits().shl(j * m.big_block()).and(mask))
                .collect();
            addends.push(l.bits().and(m.second_type(sigma)));
            for a in 0..addends.len() {
                for b in a + 1..addends.len() {
                    prop_assert!(!addends[a].intersects(&addends[b]));
                }
            }
        }
    }
}
