//! Fixed-width bit vectors stored as little-endian limb arrays.
//!
//! Every operation is width-exact: operands share one width, carries and
//! borrows propagate across limbs, bits shifted or carried past the top are
//! discarded and shifted-in bits are zero. The limb type is a parameter so
//! the same state can be laid out over `u8` limbs or a single `u128`.

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not, Shl, Shr};

/// An unsigned machine word usable as one limb of a [`LimbVec`].
pub trait Limb:
    Copy
    + Eq
    + Default
    + fmt::Debug
    + Send
    + Sync
    + BitAnd<Output = Self>
    + BitOr<Output = Self>
    + BitXor<Output = Self>
    + Not<Output = Self>
    + Shl<u32, Output = Self>
    + Shr<u32, Output = Self>
    + 'static
{
    const BITS: u32;
    const ZERO: Self;
    const ONE: Self;
    const MAX: Self;

    fn carrying_add(self, rhs: Self, carry: bool) -> (Self, bool);
    fn borrowing_sub(self, rhs: Self, borrow: bool) -> (Self, bool);
    fn wrapping_add(self, rhs: Self) -> Self;
    fn wrapping_sub(self, rhs: Self) -> Self;
    /// Low `Self::BITS` bits of `v`.
    fn truncate_u64(v: u64) -> Self;
    /// Low 64 bits of `self`.
    fn low_u64(self) -> u64;
    fn count_ones(self) -> u32;
}

macro_rules! impl_limb {
    ($($t:ty),*) => {$(
        impl Limb for $t {
            const BITS: u32 = <$t>::BITS;
            const ZERO: Self = 0;
            const ONE: Self = 1;
            const MAX: Self = <$t>::MAX;

            #[inline(always)]
            fn carrying_add(self, rhs: Self, carry: bool) -> (Self, bool) {
                let (a, c1) = self.overflowing_add(rhs);
                let (b, c2) = a.overflowing_add(carry as $t);
                (b, c1 | c2)
            }

            #[inline(always)]
            fn borrowing_sub(self, rhs: Self, borrow: bool) -> (Self, bool) {
                let (a, b1) = self.overflowing_sub(rhs);
                let (b, b2) = a.overflowing_sub(borrow as $t);
                (b, b1 | b2)
            }

            #[inline(always)]
            fn wrapping_add(self, rhs: Self) -> Self {
                <$t>::wrapping_add(self, rhs)
            }

            #[inline(always)]
            fn wrapping_sub(self, rhs: Self) -> Self {
                <$t>::wrapping_sub(self, rhs)
            }

            #[inline(always)]
            fn truncate_u64(v: u64) -> Self {
                v as $t
            }

            #[inline(always)]
            fn low_u64(self) -> u64 {
                self as u64
            }

            #[inline(always)]
            fn count_ones(self) -> u32 {
                <$t>::count_ones(self)
            }
        }
    )*};
}

impl_limb!(u8, u16, u32, u64, u128);

/// A bit vector of exactly `width` bits.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LimbVec<L: Limb = u64> {
    limbs: Vec<L>,
    width: usize,
}

impl<L: Limb> LimbVec<L> {
    pub fn zeros(width: usize) -> Self {
        let n = width.div_ceil(L::BITS as usize).max(1);
        LimbVec {
            limbs: vec![L::ZERO; n],
            width,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn limbs(&self) -> &[L] {
        &self.limbs
    }

    /// Mask of the valid bits in the top limb.
    #[inline]
    fn top_mask(&self) -> L {
        let rem = self.width % L::BITS as usize;
        if rem == 0 {
            if self.width == 0 {
                L::ZERO
            } else {
                L::MAX
            }
        } else {
            (L::ONE << rem as u32).wrapping_sub(L::ONE)
        }
    }

    #[inline]
    fn trim(&mut self) {
        let m = self.top_mask();
        if let Some(top) = self.limbs.last_mut() {
            *top = *top & m;
        }
    }

    pub fn bit(&self, pos: usize) -> bool {
        assert!(pos < self.width, "bit {pos} out of width {}", self.width);
        let b = L::BITS as usize;
        (self.limbs[pos / b] >> (pos % b) as u32) & L::ONE == L::ONE
    }

    pub fn set_bit(&mut self, pos: usize, value: bool) {
        assert!(pos < self.width, "bit {pos} out of width {}", self.width);
        let b = L::BITS as usize;
        let m = L::ONE << (pos % b) as u32;
        let limb = &mut self.limbs[pos / b];
        *limb = if value { *limb | m } else { *limb & !m };
    }

    /// Reads `len <= 64` bits starting at `offset`; the field may straddle limbs.
    pub fn field(&self, offset: usize, len: usize) -> u64 {
        debug_assert!(len <= 64 && offset + len <= self.width);
        let mut out = 0u64;
        for i in 0..len {
            if self.bit(offset + i) {
                out |= 1 << i;
            }
        }
        out
    }

    /// Overwrites `len <= 64` bits starting at `offset` with the low bits of `value`.
    pub fn set_field(&mut self, offset: usize, len: usize, value: u64) {
        debug_assert!(len <= 64 && offset + len <= self.width);
        for i in 0..len {
            self.set_bit(offset + i, (value >> i) & 1 == 1);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.iter().all(|&l| l == L::ZERO)
    }

    pub fn count_ones(&self) -> u32 {
        self.limbs.iter().map(|l| l.count_ones()).sum()
    }

    /// True when `self & other` has a set bit.
    pub fn intersects(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.limbs
            .iter()
            .zip(&other.limbs)
            .any(|(&a, &b)| a & b != L::ZERO)
    }

    pub fn copy_from(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        self.limbs.copy_from_slice(&other.limbs);
    }

    pub fn clear(&mut self) {
        self.limbs.iter_mut().for_each(|l| *l = L::ZERO);
    }

    pub fn and_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, &b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a = *a & b;
        }
    }

    pub fn or_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        for (a, &b) in self.limbs.iter_mut().zip(&other.limbs) {
            *a = *a | b;
        }
    }

    /// `self += other` modulo `2^width`.
    pub fn add_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        let mut carry = false;
        for (a, &b) in self.limbs.iter_mut().zip(&other.limbs) {
            let (s, c) = a.carrying_add(b, carry);
            *a = s;
            carry = c;
        }
        self.trim();
    }

    /// `self -= other` modulo `2^width`.
    pub fn sub_assign(&mut self, other: &Self) {
        debug_assert_eq!(self.width, other.width);
        let mut borrow = false;
        for (a, &b) in self.limbs.iter_mut().zip(&other.limbs) {
            let (d, br) = a.borrowing_sub(b, borrow);
            *a = d;
            borrow = br;
        }
        self.trim();
    }

    /// Writes `(self << n) & mask` into `out` without allocating.
    pub fn shl_and_into(&self, n: usize, mask: &Self, out: &mut Self) {
        self.shl_into(n, out);
        out.and_assign(mask);
    }

    /// Writes `self << n` into `out`.
    pub fn shl_into(&self, n: usize, out: &mut Self) {
        debug_assert_eq!(self.width, out.width);
        let b = L::BITS as usize;
        let (ls, bs) = (n / b, (n % b) as u32);
        let len = self.limbs.len();
        for i in (0..len).rev() {
            out.limbs[i] = if i < ls {
                L::ZERO
            } else {
                let hi = self.limbs[i - ls] << bs;
                if bs == 0 || i == ls {
                    hi
                } else {
                    hi | (self.limbs[i - ls - 1] >> (b as u32 - bs))
                }
            };
        }
        out.trim();
    }

    /// Writes `self >> n` into `out`.
    pub fn shr_into(&self, n: usize, out: &mut Self) {
        debug_assert_eq!(self.width, out.width);
        let b = L::BITS as usize;
        let (ls, bs) = (n / b, (n % b) as u32);
        let len = self.limbs.len();
        for i in 0..len {
            let src = i + ls;
            out.limbs[i] = if src >= len {
                L::ZERO
            } else {
                let lo = self.limbs[src] >> bs;
                if bs == 0 || src + 1 >= len {
                    lo
                } else {
                    lo | (self.limbs[src + 1] << (b as u32 - bs))
                }
            };
        }
    }

    pub fn shl(&self, n: usize) -> Self {
        let mut out = Self::zeros(self.width);
        self.shl_into(n, &mut out);
        out
    }

    pub fn shr(&self, n: usize) -> Self {
        let mut out = Self::zeros(self.width);
        self.shr_into(n, &mut out);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.and_assign(other);
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }

    /// Re-lays the same bits over a different limb type.
    pub fn convert<M: Limb>(&self) -> LimbVec<M> {
        let mut out = LimbVec::<M>::zeros(self.width);
        for pos in 0..self.width {
            if self.bit(pos) {
                out.set_bit(pos, true);
            }
        }
        out
    }

    /// Binary digits, most significant first.
    pub fn to_bit_string(&self) -> String {
        (0..self.width)
            .rev()
            .map(|p| if self.bit(p) { '1' } else { '0' })
            .collect()
    }
}

impl<L: Limb> fmt::Debug for LimbVec<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LimbVec[{}]({})", self.width, self.to_bit_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn from_u128<L: Limb>(v: u128, width: usize) -> LimbVec<L> {
        let mut out = LimbVec::<L>::zeros(width);
        for p in 0..width.min(128) {
            out.set_bit(p, (v >> p) & 1 == 1);
        }
        out
    }

    fn to_u128<L: Limb>(v: &LimbVec<L>) -> u128 {
        (0..v.width()).fold(0u128, |acc, p| acc | ((v.bit(p) as u128) << p))
    }

    fn mask(width: usize) -> u128 {
        if width == 128 {
            u128::MAX
        } else {
            (1u128 << width) - 1
        }
    }

    #[test]
    fn mp_ram_shift_examples() {
        // unbounded cell: 10110 << 4 = 101100000, 10110 >> 3 = 10
        let x = from_u128::<u8>(0b10110, 20);
        assert_eq!(to_u128(&x.shl(4)), 0b1_0110_0000);
        assert_eq!(to_u128(&x.shr(3)), 0b10);
        // 8-bit cell drops the high bit
        let x8 = from_u128::<u8>(0b10110, 8);
        assert_eq!(to_u128(&x8.shl(4)), 0b0110_0000);
        assert_eq!(to_u128(&x.and(&from_u128(0b01101, 20))), 0b100);
    }

    #[test]
    fn carry_crosses_limbs() {
        let a = from_u128::<u8>(0x00ff_ffff, 30);
        let one = from_u128::<u8>(1, 30);
        assert_eq!(to_u128(&a.add(&one)), 0x0100_0000);
        let z = from_u128::<u8>(0, 30);
        assert_eq!(to_u128(&z.sub(&one)), mask(30));
    }

    #[test]
    fn bit_string() {
        let v = from_u128::<u16>(0b1011, 6);
        assert_eq!(v.to_bit_string(), "001011");
    }

    fn check_ops<L: Limb>(a: u128, b: u128, width: usize, n: usize) {
        let m = mask(width);
        let (a, b) = (a & m, b & m);
        let va = from_u128::<L>(a, width);
        let vb = from_u128::<L>(b, width);
        assert_eq!(to_u128(&va.add(&vb)), a.wrapping_add(b) & m);
        assert_eq!(to_u128(&va.sub(&vb)), a.wrapping_sub(b) & m);
        assert_eq!(to_u128(&va.and(&vb)), a & b);
        let shl = if n >= 128 { 0 } else { (a << n) & m };
        let shr = if n >= 128 { 0 } else { a >> n };
        assert_eq!(to_u128(&va.shl(n)), shl);
        assert_eq!(to_u128(&va.shr(n)), shr);
        assert_eq!(va.intersects(&vb), a & b != 0);
    }

    proptest! {
        #[test]
        fn ops_match_u128_reference(a: u128, b: u128, width in 1usize..=128, n in 0usize..140) {
            check_ops::<u8>(a, b, width, n);
            check_ops::<u16>(a, b, width, n);
            check_ops::<u32>(a, b, width, n);
            check_ops::<u64>(a, b, width, n);
            check_ops::<u128>(a, b, width, n);
        }

        #[test]
        fn fields_roundtrip(v: u64, offset in 0usize..100, len in 1usize..=20) {
            let mut x = LimbVec::<u8>::zeros(128);
            let v = v & ((1 << len) - 1);
            x.set_field(offset, len, v);
            prop_assert_eq!(x.field(offset, len), v);
            prop_assert_eq!(x.count_ones(), v.count_ones());
            let y: LimbVec<u64> = x.convert();
            prop_assert_eq!(y.field(offset, len), v);
        }
    }
}
