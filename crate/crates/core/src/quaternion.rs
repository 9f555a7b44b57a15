//! Arithmetic of rational quaternion algebras (a,b/Q).
//!
//! An algebra is presented by a pair of nonzero integers (a, b): the basis
//! 1, i, j, k multiplies by i^2 = a, j^2 = b, ij = -ji = k. Reduced trace and
//! norm of x = x0 + x1 i + x2 j + x3 k are 2*x0 and
//! x0^2 - a*x1^2 - b*x2^2 + ab*x3^2. Splitting behavior at each place of Q is
//! decided by the Hilbert symbol; the algebra is division iff some place
//! ramifies, and it yields a cocompact Fuchsian group iff in addition it
//! splits at the real place.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, ToPrimitive, Zero};

use crate::arith::{factorize, is_prime, legendre_symbol, valuation};
use crate::error::{Error, Result};

/// A place of Q: a finite prime or the real place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    /// The archimedean place.
    Infinity,
    /// A finite prime p.
    Prime(u64),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Element of (a,b/Q) with exact rational coordinates in the basis 1, i, j, k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quaternion {
    pub coords: [BigRational; 4],
}

impl Quaternion {
    pub fn new(coords: [BigRational; 4]) -> Self {
        Quaternion { coords }
    }

    pub fn from_integers(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        let r = |n: i64| BigRational::from(BigInt::from(n));
        Quaternion::new([r(x0), r(x1), r(x2), r(x3)])
    }

    pub fn one() -> Self {
        Quaternion::from_integers(1, 0, 0, 0)
    }

    pub fn zero() -> Self {
        Quaternion::from_integers(0, 0, 0, 0)
    }

    pub fn basis_i() -> Self {
        Quaternion::from_integers(0, 1, 0, 0)
    }

    pub fn basis_j() -> Self {
        Quaternion::from_integers(0, 0, 1, 0)
    }

    pub fn basis_k() -> Self {
        Quaternion::from_integers(0, 0, 0, 1)
    }

    /// Conjugation x0 - x1 i - x2 j - x3 k; an anti-automorphism.
    pub fn conjugate(&self) -> Self {
        Quaternion::new([
            self.coords[0].clone(),
            -self.coords[1].clone(),
            -self.coords[2].clone(),
            -self.coords[3].clone(),
        ])
    }

    /// Reduced trace 2*x0; equals x + conj(x) as a scalar.
    pub fn trace(&self) -> BigRational {
        &self.coords[0] + &self.coords[0]
    }

    pub fn is_scalar(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }
}

impl Add for &Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: &Quaternion) -> Quaternion {
        Quaternion::new([
            &self.coords[0] + &rhs.coords[0],
            &self.coords[1] + &rhs.coords[1],
            &self.coords[2] + &rhs.coords[2],
            &self.coords[3] + &rhs.coords[3],
        ])
    }
}

impl Sub for &Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: &Quaternion) -> Quaternion {
        Quaternion::new([
            &self.coords[0] - &rhs.coords[0],
            &self.coords[1] - &rhs.coords[1],
            &self.coords[2] - &rhs.coords[2],
            &self.coords[3] - &rhs.coords[3],
        ])
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new([
            -self.coords[0].clone(),
            -self.coords[1].clone(),
            -self.coords[2].clone(),
            -self.coords[3].clone(),
        ])
    }
}

/// The rational quaternion algebra (a,b/Q) with nonzero integers a, b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuaternionAlgebra {
    pub a: i64,
    pub b: i64,
}

impl QuaternionAlgebra {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if a == 0 || b == 0 {
            return Err(Error::ZeroAlgebraCoefficient { a, b });
        }
        Ok(QuaternionAlgebra { a, b })
    }

    /// Product under i^2 = a, j^2 = b, ij = -ji = k (so k^2 = -ab).
    pub fn mul(&self, x: &Quaternion, y: &Quaternion) -> Quaternion {
        let a = BigRational::from(BigInt::from(self.a));
        let b = BigRational::from(BigInt::from(self.b));
        let ab = &a * &b;
        let [x0, x1, x2, x3] = &x.coords;
        let [y0, y1, y2, y3] = &y.coords;
        // 1:  x0y0 + a x1y1 + b x2y2 - ab x3y3
        // i:  x0y1 + x1y0 - b x2y3 + b x3y2
        // j:  x0y2 + x2y0 + a x1y3 - a x3y1
        // k:  x0y3 + x3y0 + x1y2 - x2y1
        let c0 = x0 * y0 + &a * (x1 * y1) + &b * (x2 * y2) - &ab * (x3 * y3);
        let c1 = x0 * y1 + x1 * y0 - &b * (x2 * y3) + &b * (x3 * y2);
        let c2 = x0 * y2 + x2 * y0 + &a * (x1 * y3) - &a * (x3 * y1);
        let c3 = x0 * y3 + x3 * y0 + x1 * y2 - x2 * y1;
        Quaternion::new([c0, c1, c2, c3])
    }

    /// Reduced norm x0^2 - a x1^2 - b x2^2 + ab x3^2; equals x * conj(x).
    pub fn norm(&self, x: &Quaternion) -> BigRational {
        let a = BigRational::from(BigInt::from(self.a));
        let b = BigRational::from(BigInt::from(self.b));
        let [x0, x1, x2, x3] = &x.coords;
        x0 * x0 - &a * (x1 * x1) - &b * (x2 * x2) + &a * &b * (x3 * x3)
    }

    /// Places where the algebra ramifies. Only the real place and primes
    /// dividing 2ab can carry symbol -1, so only those are probed.
    pub fn ramified_places(&self) -> BTreeSet<Place> {
        let mut out = BTreeSet::new();
        if hilbert_symbol(self.a, self.b, Place::Infinity) == -1 {
            out.insert(Place::Infinity);
        }
        let two_ab = 2 * self.a.unsigned_abs() * self.b.unsigned_abs();
        for (p, _) in factorize(two_ab) {
            if hilbert_symbol(self.a, self.b, Place::Prime(p)) == -1 {
                out.insert(Place::Prime(p));
            }
        }
        out
    }

    /// Division iff ramified somewhere, equivalently iff the norm form is
    /// anisotropic over Q.
    pub fn is_division(&self) -> bool {
        !self.ramified_places().is_empty()
    }

    /// Admissibility gate for the surface pipeline: division and split at the
    /// real place (the latter holds iff a > 0 or b > 0).
    pub fn is_fuchsian_input(&self) -> bool {
        (self.a > 0 || self.b > 0) && self.is_division()
    }

    /// Real matrix model for a > 0:
    /// x -> [[x0 + x1 sqrt(a), x2 + x3 sqrt(a)], [b (x2 - x3 sqrt(a)), x0 - x1 sqrt(a)]].
    /// Matrix trace is the reduced trace and determinant the reduced norm.
    pub fn embed(&self, x: &Quaternion) -> Result<[[f64; 2]; 2]> {
        if self.a <= 0 {
            return Err(Error::EmbedRequiresPositiveA { a: self.a });
        }
        let sqrt_a = (self.a as f64).sqrt();
        let b = self.b as f64;
        let c: Vec<f64> = x
            .coords
            .iter()
            .map(|r| r.to_f64().expect("rational out of f64 range"))
            .collect();
        Ok([
            [c[0] + c[1] * sqrt_a, c[2] + c[3] * sqrt_a],
            [b * (c[2] - c[3] * sqrt_a), c[0] - c[1] * sqrt_a],
        ])
    }
}

/// Hilbert symbol (a,b)_v over the completion of Q at the given place:
/// +1 iff z^2 = a x^2 + b y^2 has a nontrivial solution.
///
/// At the real place this is sign inspection; at odd p the classical
/// unit/valuation case analysis; at p = 2 an exhaustive primitive residue
/// search modulo 2^8, which is exact once a and b are reduced to 2-adic
/// valuation at most 1.
pub fn hilbert_symbol(a: i64, b: i64, place: Place) -> i32 {
    assert!(a != 0 && b != 0, "Hilbert symbol needs nonzero entries");
    match place {
        Place::Infinity => {
            if a < 0 && b < 0 {
                -1
            } else {
                1
            }
        }
        Place::Prime(2) => hilbert_symbol_dyadic(a, b),
        Place::Prime(p) => {
            debug_assert!(is_prime(p), "place tag must be prime");
            let alpha = valuation(a, p).unwrap();
            let beta = valuation(b, p).unwrap();
            let u = a / (p as i64).pow(alpha);
            let v = b / (p as i64).pow(beta);
            let mut sym = 1;
            if alpha % 2 == 1 && beta % 2 == 1 {
                sym *= legendre_symbol(-1, p);
            }
            if beta % 2 == 1 {
                sym *= legendre_symbol(u, p);
            }
            if alpha % 2 == 1 {
                sym *= legendre_symbol(v, p);
            }
            sym
        }
    }
}

/// Strip square factors of 2 so the 2-adic valuation is 0 or 1.
fn strip_even_squares(mut n: i64) -> i64 {
    while n % 4 == 0 {
        n /= 4;
    }
    n
}

fn hilbert_symbol_dyadic(a: i64, b: i64) -> i32 {
    const K: u32 = 8;
    const M: i64 = 1 << K;
    let a = strip_even_squares(a).rem_euclid(M);
    let b = strip_even_squares(b).rem_euclid(M);

    // Squares mod 2^8 attained by odd z, and by arbitrary z.
    let mut odd_squares = [false; M as usize];
    let mut squares = [false; M as usize];
    for z in 0..M {
        let s = (z * z).rem_euclid(M) as usize;
        squares[s] = true;
        if z % 2 == 1 {
            odd_squares[s] = true;
        }
    }

    // A primitive zero of z^2 - a x^2 - b y^2 mod 2^8 lifts 2-adically:
    // with x or y odd any square completes, with x, y both even z must be odd.
    for x in 0..M {
        for y in 0..M {
            let t = ((a * x * x + b * y * y) % M).rem_euclid(M) as usize;
            let hit = if x % 2 == 1 || y % 2 == 1 {
                squares[t]
            } else {
                odd_squares[t]
            };
            if hit {
                return 1;
            }
        }
    }
    -1
}
