//! The set system behind the point set `K`.
//!
//! Ground set `V = {1..m}` with `m = 4k`, blocks `A ⊂ V` of size `2k`, their
//! complements, and the cross set `S(A)` of all pairs with exactly one end in
//! `A`. Blocks are `u64` masks (bit `i - 1` is element `i`), which limits
//! block-level work to `k <= 16`. Cross sets are bit-vectors over the pair
//! space, indexed colexicographically by [`pair_index`].

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::ToPrimitive;

use crate::arith::{binomial, is_prime_power, PrimePowerWitness};
use crate::error::{Error, Result};

/// Largest `k` [`enumerate_points`] accepts unless told otherwise.
/// `k = 4` gives `C(16, 8) / 2 = 6435` points.
pub const DEFAULT_ENUMERATION_CAP: u64 = 4;

/// Derived sizes for one construction instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub k: u64,
    /// Ground-set size, `4k`.
    pub m: u64,
    /// Number of pair coordinates, `C(m, 2)`.
    pub w_size: u64,
    /// Claimed dimension, `w_size - 1`.
    pub d: u64,
    pub prime_power: Option<PrimePowerWitness>,
}

pub fn make_params(k: u64) -> Result<Params> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be positive".into()));
    }
    let m = k.checked_mul(4).ok_or(Error::Overflow("m = 4k"))?;
    let w_size = m
        .checked_mul(m - 1)
        .map(|x| x / 2)
        .ok_or(Error::Overflow("C(m, 2)"))?;
    Ok(Params {
        k,
        m,
        w_size,
        d: w_size - 1,
        prime_power: is_prime_power(k)?,
    })
}

impl Params {
    /// Block size `2k`.
    pub fn block_size(&self) -> u32 {
        (2 * self.k) as u32
    }

    /// `|S(A)| = (2k)^2`.
    pub fn cross_size(&self) -> u64 {
        4 * self.k * self.k
    }

    /// Squared diameter of `K`, `4k^2`.
    pub fn diameter_sq(&self) -> u64 {
        self.cross_size()
    }

    /// `|H| = C(m, 2k)`.
    pub fn block_count(&self) -> u64 {
        binomial(self.m, 2 * self.k)
            .to_u64()
            .expect("only called once m <= 64 is established")
    }

    /// `|K| = |H| / 2`.
    pub fn point_count(&self) -> u64 {
        self.block_count() / 2
    }

    fn ground_mask(&self) -> Result<u64> {
        match self.m {
            64 => Ok(u64::MAX),
            m if m < 64 => Ok((1u64 << m) - 1),
            m => Err(Error::GroundSetTooLarge { m }),
        }
    }
}

/// A `2k`-subset of the ground set as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block(u64);

impl Block {
    /// Builds a block from 1-based elements, checking range and size.
    pub fn from_elements(elements: &[u64], params: &Params) -> Result<Block> {
        let mut bits = 0u64;
        for &e in elements {
            if e == 0 || e > params.m {
                return Err(Error::InvalidInput(format!(
                    "element {e} outside 1..={}",
                    params.m
                )));
            }
            if e > 64 {
                return Err(Error::GroundSetTooLarge { m: params.m });
            }
            bits |= 1 << (e - 1);
        }
        Block::from_bits(bits, params)
    }

    pub fn from_bits(bits: u64, params: &Params) -> Result<Block> {
        let mask = params.ground_mask()?;
        if bits & !mask != 0 || bits.count_ones() != params.block_size() {
            return Err(Error::InvalidInput(format!(
                "{bits:#x} is not a {}-subset of 1..={}",
                params.block_size(),
                params.m
            )));
        }
        Ok(Block(bits))
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, element: u64) -> bool {
        (1..=64).contains(&element) && self.0 >> (element - 1) & 1 == 1
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.0.count_ones() as usize);
        let mut rest = self.0;
        while rest != 0 {
            out.push(rest.trailing_zeros() as u64 + 1);
            rest &= rest - 1;
        }
        out
    }

    pub fn is_canonical(self) -> bool {
        self.0 & 1 == 1
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.elements()).finish()
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, e) in self.elements().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// `N(A) = V \ A`.
pub fn complement(block: Block, params: &Params) -> Block {
    let mask = params
        .ground_mask()
        .expect("a Block exists only for m <= 64");
    Block(!block.0 & mask)
}

/// The representative of `{A, N(A)}` that contains element 1.
pub fn canonicalize(block: Block, params: &Params) -> Block {
    if block.is_canonical() {
        block
    } else {
        complement(block, params)
    }
}

/// `p = |A ∩ B|`.
pub fn intersection_size(a: Block, b: Block) -> u32 {
    (a.0 & b.0).count_ones()
}

/// Colexicographic 0-based index of the pair `{a, b}`:
/// `(b-1)(b-2)/2 + (a-1)` for `a < b`. The arguments may come in either
/// order.
pub fn pair_index(a: u64, b: u64, params: &Params) -> Result<u64> {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    if a == b {
        return Err(Error::InvalidInput(format!(
            "pair {{{a},{b}}} is degenerate"
        )));
    }
    if a == 0 || b > params.m {
        return Err(Error::InvalidInput(format!(
            "pair {{{a},{b}}} outside 1..={}",
            params.m
        )));
    }
    Ok(colex_base(b) + (a - 1))
}

/// Inverse of [`pair_index`]; returns `(a, b)` with `a < b`.
pub fn pair_unindex(index: u64, params: &Params) -> Result<(u64, u64)> {
    if index >= params.w_size {
        return Err(Error::InvalidInput(format!(
            "pair index {index} outside 0..{}",
            params.w_size
        )));
    }
    // Largest b with (b-1)(b-2)/2 <= index; the isqrt estimate is off by
    // at most one either way.
    let mut b = ((8 * index + 1).isqrt() + 3) / 2;
    while colex_base(b) > index {
        b -= 1;
    }
    while colex_base(b + 1) <= index {
        b += 1;
    }
    Ok((index - colex_base(b) + 1, b))
}

fn colex_base(b: u64) -> u64 {
    (b - 1) * (b - 2) / 2
}

/// A 0/1 vector over the pair space; as a point, it is `S(A)` for some block.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossVector {
    words: Vec<u64>,
    len: usize,
}

impl CrossVector {
    pub fn zeros(len: usize) -> CrossVector {
        CrossVector {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    /// Wraps little-endian 64-bit words; bits at or beyond `len` must be clear.
    pub fn from_words(words: Vec<u64>, len: usize) -> Result<CrossVector> {
        if words.len() != len.div_ceil(64) {
            return Err(Error::LengthMismatch {
                left: words.len() * 64,
                right: len,
            });
        }
        if !len.is_multiple_of(64) && words.last().is_some_and(|w| w >> (len % 64) != 0) {
            return Err(Error::InvalidInput(format!("bits set beyond length {len}")));
        }
        Ok(CrossVector { words, len })
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range {}", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn popcount(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Set bit positions in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// `|X ∩ Y|`.
    pub fn and_count(&self, other: &CrossVector) -> Result<u64> {
        self.check_len(other)?;
        Ok(self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum())
    }

    fn check_len(&self, other: &CrossVector) -> Result<()> {
        if self.len != other.len {
            return Err(Error::LengthMismatch {
                left: self.len,
                right: other.len,
            });
        }
        Ok(())
    }

    // ORs the low `width` bits of `chunk` in at bit offset `at`.
    fn or_chunk(&mut self, at: usize, chunk: u64, width: usize) {
        debug_assert!(width <= 64 && at + width <= self.len);
        if width == 0 {
            return;
        }
        let chunk = if width == 64 {
            chunk
        } else {
            chunk & ((1u64 << width) - 1)
        };
        let (word, shift) = (at / 64, at % 64);
        self.words[word] |= chunk << shift;
        if shift != 0 && shift + width > 64 {
            self.words[word + 1] |= chunk >> (64 - shift);
        }
    }
}

impl fmt::Debug for CrossVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CrossVector")
            .field("len", &self.len)
            .field("ones", &self.ones().collect::<Vec<_>>())
            .finish()
    }
}

/// `S(A)`: bit `pair_index(x, y)` is set iff exactly one of `x, y` is in `A`.
pub fn cross_set(block: Block, params: &Params) -> Result<CrossVector> {
    // Re-validate against these params; blocks built for another k would
    // silently produce garbage otherwise.
    Block::from_bits(block.0, params)?;
    let len = usize::try_from(params.w_size).map_err(|_| Error::Overflow("w_size"))?;
    let mut out = CrossVector::zeros(len);
    // Pairs {a, b} with fixed larger element b occupy a contiguous run of
    // b-1 bits starting at colex_base(b), one bit per a = 1..b-1.
    for b in 2..=params.m {
        let b_in = block.contains(b);
        let run = if b_in { !block.0 } else { block.0 };
        out.or_chunk(colex_base(b) as usize, run, (b - 1) as usize);
    }
    Ok(out)
}

/// Squared Euclidean distance `|X △ Y|`.
pub fn dist_sq_direct(x: &CrossVector, y: &CrossVector) -> Result<u64> {
    x.check_len(y)?;
    Ok(x.words
        .iter()
        .zip(&y.words)
        .map(|(a, b)| (a ^ b).count_ones() as u64)
        .sum())
}

/// Squared distance between `S(A)` and `S(B)` from `p = |A ∩ B|` alone:
/// `2(2k)^2 - 2(p^2 + (2k-p)^2)`, which equals `4(k^2 - (p-k)^2)`.
pub fn dist_sq_closed(k: u64, p: u64) -> Result<u64> {
    if p > 2 * k {
        return Err(Error::InvalidInput(format!(
            "intersection size {p} exceeds 2k = {}",
            2 * k
        )));
    }
    let q = 2 * k - p;
    Ok(2 * (2 * k) * (2 * k) - 2 * (p * p + q * q))
}

/// Ascending `r`-subsets of `{0..n}` as bit masks (Gosper's hack).
#[derive(Debug, Clone)]
pub struct Combinations {
    current: u64,
    remaining: u64,
}

impl Combinations {
    pub fn new(n: u32, r: u32) -> Result<Combinations> {
        if n > 64 {
            return Err(Error::GroundSetTooLarge { m: n as u64 });
        }
        let remaining = binomial(n as u64, r as u64)
            .to_u64()
            .ok_or(Error::Overflow("subset count"))?;
        let current = match r {
            0 => 0,
            64 => u64::MAX,
            r => (1u64 << r) - 1,
        };
        Ok(Combinations { current, remaining })
    }
}

impl Iterator for Combinations {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.remaining == 0 {
            return None;
        }
        let out = self.current;
        self.remaining -= 1;
        if self.remaining > 0 {
            let x = self.current;
            let low = x & x.wrapping_neg();
            let ripple = x.wrapping_add(low);
            self.current = (((ripple ^ x) >> 2) / low) | ripple;
        }
        Some(out)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.remaining as usize;
        (n, Some(n))
    }
}

/// Every block of `H`, in increasing order of bit pattern.
pub fn enumerate_blocks(params: &Params) -> Result<impl Iterator<Item = Block>> {
    params.ground_mask()?;
    Ok(Combinations::new(params.m as u32, params.block_size())?.map(Block))
}

/// Canonical blocks (those containing element 1), in increasing order of
/// bit pattern. One per point of `K`.
pub fn enumerate_canonical_blocks(params: &Params) -> Result<impl Iterator<Item = Block>> {
    params.ground_mask()?;
    let rest = Combinations::new(params.m as u32 - 1, params.block_size() - 1)?;
    Ok(rest.map(|s| Block(s << 1 | 1)))
}

/// Every point of `K` keyed by its canonical block, in canonical-block
/// order. Refuses `k` above `cap`.
pub fn enumerate_points(
    params: &Params,
    cap: u64,
) -> Result<impl Iterator<Item = (Block, CrossVector)> + '_> {
    if params.k > cap {
        return Err(Error::CapExceeded {
            what: "enumeration",
            k: params.k,
            cap,
        });
    }
    Ok(enumerate_canonical_blocks(params)?.map(move |block| {
        let x = cross_set(block, params).expect("canonical blocks are valid");
        (block, x)
    }))
}
