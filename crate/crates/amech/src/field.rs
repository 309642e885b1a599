//! Exact arithmetic in the prime field F_p.
//!
//! Every position and velocity coordinate in the simulation is a [`Residue`]
//! of some prime `p`, and all arithmetic goes through a [`Field`], which owns
//! the modulus and a precomputed inverse table so that division is O(1).

use thiserror::Error;

/// Largest supported modulus. Keeps the inverse table, the apparatus block
/// grid and rendered boards at sane sizes; every structure here scales with
/// p or p^2.
pub const MAX_PRIME: u32 = 10_000;

/// Errors from field construction and partial operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} exceeds the largest supported modulus {MAX_PRIME}")]
    PrimeTooLarge(u64),
    #[error("division by zero in F_{0}")]
    DivisionByZero(u32),
}

/// An element of F_p, always reduced to `0..p`.
///
/// A `Residue` does not remember which `p` it belongs to; it is only
/// meaningful together with the [`Field`] that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Residue(u32);

impl Residue {
    /// The zero element (valid in every field).
    pub const ZERO: Residue = Residue(0);

    pub fn value(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for Residue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A pair of residues; used for both positions `(x, y)` and velocities `(vx, vy)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Vec2 {
    pub x: Residue,
    pub y: Residue,
}

impl Vec2 {
    pub fn new(x: Residue, y: Residue) -> Self {
        Vec2 { x, y }
    }
}

/// Trial-division primality check; sufficient for the moduli this simulator runs at.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}

/// Arithmetic context for F_p: the prime modulus plus an inverse table.
///
/// Immutable after construction; operations are pure and the context can be
/// shared freely between threads.
#[derive(Debug, Clone)]
pub struct Field {
    p: u32,
    /// inv[a] satisfies a * inv[a] == 1 (mod p) for a in 1..p; inv[0] is unused.
    inv: Vec<u32>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        // The table is a function of p.
        self.p == other.p
    }
}

impl Eq for Field {}

impl Field {
    /// Builds the field F_p, verifying that `p` is a prime no larger than
    /// [`MAX_PRIME`] and precomputing all multiplicative inverses.
    pub fn new(p: u32) -> Result<Field, FieldError> {
        if p > MAX_PRIME {
            return Err(FieldError::PrimeTooLarge(p as u64));
        }
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p as u64));
        }
        let mut inv = vec![0u32; p as usize];
        if p > 1 {
            inv[1 % p as usize] = 1 % p;
        }
        let p64 = p as u64;
        for a in 2..p as u64 {
            // Standard recurrence: inv[a] = -(p/a) * inv[p mod a]  (mod p)
            let q = p64 / a;
            let r = p64 % a;
            inv[a as usize] = ((p64 - q % p64) * inv[r as usize] as u64 % p64) as u32;
            debug_assert_eq!(a * inv[a as usize] as u64 % p64, 1);
        }
        Ok(Field { p, inv })
    }

    pub fn prime(&self) -> u32 {
        self.p
    }

    /// Reduces an arbitrary integer into the field.
    pub fn residue(&self, v: u64) -> Residue {
        Residue((v % self.p as u64) as u32)
    }

    /// Accepts `v` only if it is already a canonical residue.
    pub fn checked_residue(&self, v: u64) -> Option<Residue> {
        if v < self.p as u64 {
            Some(Residue(v as u32))
        } else {
            None
        }
    }

    /// True if `r` is a valid residue of this field.
    pub fn contains(&self, r: Residue) -> bool {
        r.0 < self.p
    }

    pub fn add(&self, a: Residue, b: Residue) -> Residue {
        let s = a.0 + b.0;
        Residue(if s >= self.p { s - self.p } else { s })
    }

    pub fn sub(&self, a: Residue, b: Residue) -> Residue {
        Residue(if a.0 >= b.0 {
            a.0 - b.0
        } else {
            self.p - (b.0 - a.0)
        })
    }

    /// Additive inverse: `0 -_p a`.
    pub fn neg(&self, a: Residue) -> Residue {
        Residue(if a.0 == 0 { 0 } else { self.p - a.0 })
    }

    pub fn mul(&self, a: Residue, b: Residue) -> Residue {
        Residue((a.0 as u64 * b.0 as u64 % self.p as u64) as u32)
    }

    /// Multiplicative inverse; zero has none.
    pub fn inv(&self, a: Residue) -> Result<Residue, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero(self.p));
        }
        Ok(Residue(self.inv[a.0 as usize]))
    }

    /// `a / b` via the inverse table.
    pub fn div(&self, a: Residue, b: Residue) -> Result<Residue, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn vec_add(&self, a: Vec2, b: Vec2) -> Vec2 {
        Vec2::new(self.add(a.x, b.x), self.add(a.y, b.y))
    }

    pub fn vec_sub(&self, a: Vec2, b: Vec2) -> Vec2 {
        Vec2::new(self.sub(a.x, b.x), self.sub(a.y, b.y))
    }

    pub fn vec_neg(&self, a: Vec2) -> Vec2 {
        Vec2::new(self.neg(a.x), self.neg(a.y))
    }

    /// Componentwise average of `vs` in F_p.
    ///
    /// The count must be invertible, i.e. `1 <= vs.len() < p`; the scattering
    /// rule guarantees this before calling. Violations are a caller bug.
    pub fn vec_avg(&self, vs: &[Vec2]) -> Vec2 {
        let k = vs.len();
        assert!(
            k >= 1 && (k as u64) < self.p as u64,
            "vec_avg needs 1 <= count < p (count {k}, p {})",
            self.p
        );
        let mut sx = Residue::ZERO;
        let mut sy = Residue::ZERO;
        for v in vs {
            sx = self.add(sx, v.x);
            sy = self.add(sy, v.y);
        }
        let kinv = Residue(self.inv[k % self.p as usize]);
        Vec2::new(self.mul(sx, kinv), self.mul(sy, kinv))
    }
}
