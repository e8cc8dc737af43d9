//! Arithmetic in a prime field GF(p) and seeded sampling of field elements.
//!
//! Elements are plain `u64` residues in `[0, p)`. The modulus lives in a
//! small `Copy` context ([`Field`]) that every matrix carries, so the prime
//! can be chosen at runtime from the instance size.

use rand::Rng;

use crate::error::{Error, Result};

/// Smallest modulus ever selected by [`choose_prime`].
pub const MIN_PRIME_FLOOR: u64 = 1 << 20;

/// Lower bound applied to the default `n²` sample-set size.
///
/// Small instances would otherwise draw coefficients from a set of a few
/// hundred elements, and tests over many columns or prefixes would fail
/// with probability in the percent range. Above n = 256 the `n²` term
/// takes over.
pub const MIN_SAMPLE_SET: u64 = 1 << 16;

/// A prime field GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Field {
    p: u64,
}

impl Field {
    /// Wraps a modulus. Returns an error when `p` is not prime or does not
    /// fit the 62-bit headroom used by the reduction routines.
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 62 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Reduces an arbitrary integer into `[0, p)`.
    #[inline]
    pub fn reduce(&self, a: u64) -> u64 {
        a % self.p
    }

    /// Embeds a signed integer, e.g. `-1 ↦ p − 1`.
    pub fn from_i64(&self, a: i64) -> u64 {
        let p = self.p as i128;
        ((a as i128 % p + p) % p) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    /// `a + b·c`, the inner step of every elimination loop.
    #[inline]
    pub fn mul_add(&self, a: u64, b: u64, c: u64) -> u64 {
        ((a as u128 + b as u128 * c as u128) % self.p as u128) as u64
    }

    /// Multiplicative inverse by the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        let a = a % self.p;
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let (mut old_r, mut r) = (a as i128, self.p as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        debug_assert_eq!(old_r, 1);
        let p = self.p as i128;
        Ok(((old_s % p + p) % p) as u64)
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }
}

/// A field together with the size of the coefficient set `F ⊆ GF(p)` that
/// random draws come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FieldConfig {
    pub field: Field,
    pub sample_set_size: u64,
}

impl FieldConfig {
    /// Uses the default sample-set size `min(p, max(n², MIN_SAMPLE_SET))`.
    pub fn new(field: Field, n: usize) -> Self {
        Self {
            field,
            sample_set_size: default_sample_set_size(field.modulus(), n),
        }
    }

    /// Overrides the sample-set size; it is clamped to `[1, p]`.
    pub fn with_sample_set_size(mut self, size: u64) -> Self {
        self.sample_set_size = size.clamp(1, self.field.modulus());
        self
    }

    /// Draws uniformly from `{0, …, size − 1}`, or from `{1, …, size − 1}`
    /// when `nonzero` is set. A sample set of size 1 with `nonzero` falls
    /// back to the constant 1.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, nonzero: bool) -> u64 {
        let size = self.sample_set_size;
        if nonzero {
            if size <= 1 {
                return 1;
            }
            rng.gen_range(1..size)
        } else {
            rng.gen_range(0..size)
        }
    }

    pub fn sample_vec<R: Rng + ?Sized>(&self, rng: &mut R, len: usize, nonzero: bool) -> Vec<u64> {
        (0..len).map(|_| self.sample(rng, nonzero)).collect()
    }
}

/// Free-function form of [`FieldConfig::sample`].
pub fn sample_uniform<R: Rng + ?Sized>(rng: &mut R, cfg: &FieldConfig, nonzero: bool) -> u64 {
    cfg.sample(rng, nonzero)
}

pub fn default_sample_set_size(p: u64, n: usize) -> u64 {
    let n = n as u64;
    n.saturating_mul(n).max(MIN_SAMPLE_SET).min(p)
}

/// Smallest prime `p ≥ max(2²⁰, n³)` with the default sample set for `n`.
///
/// `n³` is capped at 2⁶¹ so the modulus always fits the reduction headroom.
pub fn choose_prime(n: usize) -> FieldConfig {
    let n64 = n.max(1) as u64;
    let cube = n64
        .checked_mul(n64)
        .and_then(|s| s.checked_mul(n64))
        .unwrap_or(u64::MAX)
        .min(1 << 61);
    let mut p = cube.max(MIN_PRIME_FLOOR);
    while !is_prime(p) {
        p += 1;
    }
    FieldConfig::new(Field { p }, n)
}

/// Deterministic Miller–Rabin, exact for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
