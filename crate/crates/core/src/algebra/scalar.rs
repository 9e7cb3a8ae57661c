//! Prime-field residues.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_traits::{One, Zero};

/// Coefficient type for every matrix and Laurent polynomial in the crate.
///
/// Implementors are the residues of a prime field `Z/pZ`. The modulus is
/// part of the type so that `zero()`/`one()` need no runtime context.
pub trait Scalar:
    Copy
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    const MODULUS: u32;

    fn from_u64(v: u64) -> Self;

    fn from_i64(v: i64) -> Self {
        let p = Self::MODULUS as i64;
        Self::from_u64(v.rem_euclid(p) as u64)
    }

    fn residue(self) -> u32;

    /// Multiplicative inverse, `None` for zero.
    fn inv(self) -> Option<Self>;

    /// All residues in increasing order.
    fn all() -> Vec<Self> {
        (0..Self::MODULUS as u64).map(Self::from_u64).collect()
    }
}

pub const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// Residue modulo the prime `P`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Zp<const P: u32>(u32);

impl<const P: u32> Zp<P> {
    const PRIME_CHECK: () = assert!(is_prime(P), "modulus must be prime");

    pub fn new(v: u32) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME_CHECK;
        Zp(v % P)
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Debug for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Zp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Zp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        if P == 2 {
            return Zp(self.0 ^ rhs.0);
        }
        let s = self.0 + rhs.0;
        Zp(if s >= P { s - P } else { s })
    }
}

impl<const P: u32> AddAssign for Zp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> Sub for Zp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const P: u32> Neg for Zp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Zp(P - self.0)
        }
    }
}

impl<const P: u32> Mul for Zp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        if P == 2 {
            return Zp(self.0 & rhs.0);
        }
        Zp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Zero for Zp<P> {
    fn zero() -> Self {
        Zp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Zp<P> {
    fn one() -> Self {
        Zp::new(1)
    }
}

impl<const P: u32> Scalar for Zp<P> {
    const MODULUS: u32 = P;

    fn from_u64(v: u64) -> Self {
        Zp::new((v % P as u64) as u32)
    }

    fn residue(self) -> u32 {
        self.0
    }

    fn inv(self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // Fermat: a^(p-2)
        let mut base = self.0 as u64;
        let mut e = P as u64 - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % P as u64;
            }
            base = base * base % P as u64;
            e >>= 1;
        }
        Some(Zp(acc as u32))
    }
}
