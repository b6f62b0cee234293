//! Values of the form `(k₀ + Σ kᵢ·wᵢ) / 2^e` over a fixed huge integer
//! direction `w`, with small integer coefficients.
//!
//! Aggregated TSP costs are such forms with `e = 0`, and the single-objective
//! algorithms only add, subtract, halve and compare them, so every
//! intermediate stays a form with small coefficients. Signs are decided
//! from the top 62 bits of each `wᵢ` when that is conclusive and from the
//! exact big-integer value otherwise.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::Scalar;

/// Forms hold the constant term plus up to this many direction
/// coefficients inline.
pub const MAX_DIM: usize = 7;

/// The shared direction with its truncation `tᵢ = wᵢ >> shift`.
#[derive(Debug)]
pub struct FormBasis {
    direction: Vec<BigInt>,
    top: Vec<i128>,
    shift: u64,
}

impl FormBasis {
    /// `None` for more than [`MAX_DIM`] components.
    pub fn new(direction: &[BigInt]) -> Option<Self> {
        if direction.len() > MAX_DIM {
            return None;
        }
        let bits = direction.iter().map(|w| w.bits()).max().unwrap_or(0);
        let shift = bits.saturating_sub(62);
        let top = direction
            .iter()
            .map(|w| (w >> shift).to_i128().expect("62-bit truncation fits"))
            .collect();
        Some(FormBasis { direction: direction.to_vec(), top, shift })
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    /// The form `Σ cᵢ·wᵢ`.
    pub fn form(&self, coefficients: &[i128]) -> LinearForm<'_> {
        assert_eq!(coefficients.len(), self.dim());
        let mut k = [0; MAX_DIM + 1];
        k[1..=coefficients.len()].copy_from_slice(coefficients);
        LinearForm { basis: Some(self), k, len: coefficients.len() as u8 + 1, e: 0 }
    }

    /// Sign of `k₀ + Σ kᵢ·wᵢ`.
    fn sign(&self, k: &[i128; MAX_DIM + 1]) -> Ordering {
        if k[1..].iter().all(|&c| c == 0) {
            return k[0].cmp(&0);
        }
        if let Some(s) = self.filtered_sign(k) {
            return s;
        }
        self.exact(k).sign().cmp_zero()
    }

    fn filtered_sign(&self, k: &[i128; MAX_DIM + 1]) -> Option<Ordering> {
        // Σ kᵢ·wᵢ ∈ [lo·2^s, hi·2^s]
        let mut lo = 0i128;
        let mut hi = 0i128;
        for (&c, &t) in k[1..].iter().zip(&self.top) {
            let base = c.checked_mul(t)?;
            lo = lo.checked_add(base)?.checked_add(c.min(0))?;
            hi = hi.checked_add(base)?.checked_add(c.max(0))?;
        }
        let unit_exceeds_constant = self.shift >= 127 || k[0].unsigned_abs() < 1u128 << self.shift;
        if !unit_exceeds_constant {
            return None;
        }
        if lo >= 1 {
            Some(Ordering::Greater)
        } else if hi <= -1 {
            Some(Ordering::Less)
        } else {
            None
        }
    }

    fn exact(&self, k: &[i128; MAX_DIM + 1]) -> BigInt {
        let mut v = BigInt::from(k[0]);
        for (&c, w) in k[1..].iter().zip(&self.direction) {
            if c != 0 {
                v += w * c;
            }
        }
        v
    }
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

/// A value `(k₀ + Σ kᵢ·wᵢ) / 2^e`. Constants (from `zero` or `From<u64>`)
/// carry no basis and adopt the basis of whatever they are combined with.
#[derive(Clone)]
pub struct LinearForm<'a> {
    basis: Option<&'a FormBasis>,
    /// `k[0]` is the constant term; entries past the basis dimension are zero.
    k: [i128; MAX_DIM + 1],
    /// Number of leading entries of `k` that may be nonzero.
    len: u8,
    e: u32,
}

fn checked<T>(v: Option<T>) -> T {
    v.expect("linear form coefficient overflow")
}

impl<'a> LinearForm<'a> {
    fn constant(c: i128) -> Self {
        let mut k = [0; MAX_DIM + 1];
        k[0] = c;
        LinearForm { basis: None, k, len: 1, e: 0 }
    }

    /// The exact value as a fraction `numerator / 2^e`.
    pub fn exact(&self) -> (BigInt, u32) {
        let num = match self.basis {
            Some(b) => b.exact(&self.k),
            None => BigInt::from(self.k[0]),
        };
        (num, self.e)
    }

    /// Removes common factors of two from the coefficients.
    fn normalize(mut self) -> Self {
        let len = self.len as usize;
        while self.e > 0 && self.k[..len].iter().all(|c| c % 2 == 0) {
            for c in &mut self.k[..len] {
                *c /= 2;
            }
            self.e -= 1;
        }
        self
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let len = self.len.max(other.len);
        let mut k = [0; MAX_DIM + 1];
        let lanes = k[..len as usize].iter_mut().zip(&self.k).zip(&other.k);
        if self.e == other.e {
            for ((slot, &a), &b) in lanes {
                *slot = checked(if negate { a.checked_sub(b) } else { a.checked_add(b) });
            }
            let form = LinearForm { basis: self.basis.or(other.basis), k, len, e: self.e };
            return if self.e > 0 { form.normalize() } else { form };
        }
        let e = self.e.max(other.e);
        let factor = |x: &Self| checked(1i128.checked_shl(e - x.e).filter(|_| e - x.e < 126));
        let (fa, fb) = (factor(self), factor(other));
        for ((slot, &a), &b) in lanes {
            let a = checked(a.checked_mul(fa));
            let b = checked(b.checked_mul(fb));
            *slot = checked(if negate { a.checked_sub(b) } else { a.checked_add(b) });
        }
        LinearForm { basis: self.basis.or(other.basis), k, len, e }.normalize()
    }

    fn is_constant(&self) -> bool {
        self.k[1..].iter().all(|&c| c == 0)
    }

    fn sign(&self) -> Ordering {
        match self.basis {
            Some(b) => b.sign(&self.k),
            None => self.k[0].cmp(&0),
        }
    }
}

impl fmt::Debug for LinearForm<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/2^{}", self.k, self.e)
    }
}

impl Add for LinearForm<'_> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.combine(&rhs, false)
    }
}

impl Sub for LinearForm<'_> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.combine(&rhs, true)
    }
}

/// Only products with a constant stay linear; the algorithms never form
/// any other kind.
impl Mul for LinearForm<'_> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (form, c) = match (self.is_constant(), rhs.is_constant()) {
            (_, true) => (self, rhs),
            (true, false) => (rhs, self),
            (false, false) => panic!("product of two non-constant linear forms"),
        };
        let factor = c.k[0];
        let k = form.k.map(|x| checked(x.checked_mul(factor)));
        LinearForm { basis: form.basis, k, len: form.len, e: form.e + c.e }.normalize()
    }
}

impl Zero for LinearForm<'_> {
    fn zero() -> Self {
        LinearForm::constant(0)
    }

    fn is_zero(&self) -> bool {
        self.sign() == Ordering::Equal
    }
}

impl From<u64> for LinearForm<'_> {
    fn from(v: u64) -> Self {
        LinearForm::constant(v as i128)
    }
}

impl PartialEq for LinearForm<'_> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for LinearForm<'_> {}

impl PartialOrd for LinearForm<'_> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LinearForm<'_> {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.basis.is_none() && other.basis.is_none() && self.e == other.e {
            return self.k[0].cmp(&other.k[0]);
        }
        self.combine(other, true).sign()
    }
}

impl Scalar for LinearForm<'_> {
    fn half(&self) -> Self {
        let mut h = self.clone();
        h.e += 1;
        h.normalize()
    }
}
