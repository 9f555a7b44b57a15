//! Finite-precision p-adic arithmetic: Hensel lifting for quadratics,
//! constructive universality of unit diagonal ternary forms at odd primes,
//! and local solvability of a1 Y1^2 + a2 Y2^2 + a3 Y3^2 = n at every place.
//!
//! At odd primes not dividing the coefficients the form is universal over
//! the p-adic integers, with a witness produced by a residue-overlap count
//! followed by a Hensel lift in the first variable. At the finitely many
//! remaining primes solvability is decided by residue search at a precision
//! high enough that every reported solution carries a Hensel-liftable
//! coordinate, so the verdict is stable under any further lifting.

use num::{BigInt, One, Signed, Zero};

use crate::arith::{is_prime, valuation};
use crate::error::{Error, Result};
use crate::quaternion::Place;

/// Default working precision exponent for lifts.
pub const DEFAULT_PRECISION: u32 = 6;

/// A residue r mod p^k standing for a p-adic integer known to that precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicApprox {
    pub p: u64,
    pub k: u32,
    pub r: BigInt,
}

impl PadicApprox {
    pub fn new(p: u64, k: u32, r: impl Into<BigInt>) -> Self {
        assert!(k >= 1, "precision exponent must be >= 1");
        let modulus = BigInt::from(p).pow(k);
        let mut r = r.into() % &modulus;
        if r.is_negative() {
            r += &modulus;
        }
        PadicApprox { p, k, r }
    }

    pub fn modulus(&self) -> BigInt {
        BigInt::from(self.p).pow(self.k)
    }

    /// Valuation of the residue, capped at the precision exponent.
    pub fn valuation(&self) -> u32 {
        big_valuation_capped(&self.r, self.p, self.k)
    }
}

/// Local representability query for a diagonal ternary form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LocalTernaryQuery {
    pub coefficients: (i64, i64, i64),
    pub target: i64,
    pub place: Place,
}

impl LocalTernaryQuery {
    pub fn new(coefficients: (i64, i64, i64), target: i64, place: Place) -> Result<Self> {
        let (a1, a2, a3) = coefficients;
        if a1 == 0 || a2 == 0 || a3 == 0 {
            return Err(Error::ZeroFormCoefficient);
        }
        Ok(LocalTernaryQuery {
            coefficients,
            target,
            place,
        })
    }

    pub fn decide(&self) -> bool {
        local_solvable(self.coefficients, self.target, self.place)
    }
}

fn big_valuation_capped(n: &BigInt, p: u64, cap: u32) -> u32 {
    if n.is_zero() {
        return cap;
    }
    let p = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0u32;
    while v < cap && (&m % &p).is_zero() {
        m /= &p;
        v += 1;
    }
    v
}

/// Newton-lift an approximate root of f(X) = c2 X^2 + c0 to precision
/// p^target_k.
///
/// Requires the Hensel criterion |f(x)|_p < |f'(x)|_p^2 at the input's
/// certified precision; the returned root agrees with the input to that
/// precision and satisfies f = 0 mod p^target_k exactly (verified before
/// returning).
pub fn hensel_lift_quadratic(
    c2: i64,
    c0: i64,
    x_approx: &PadicApprox,
    target_k: u32,
) -> Result<PadicApprox> {
    let p = x_approx.p;
    assert!(is_prime(p), "modulus base must be prime");
    assert!(target_k >= 1);
    let f = |x: &BigInt| BigInt::from(c2) * x * x + BigInt::from(c0);
    let fprime = |x: &BigInt| BigInt::from(2 * c2) * x;

    let fx = f(&x_approx.r);
    let dfx = fprime(&x_approx.r);
    let vf = big_valuation_capped(&fx, p, x_approx.k);
    let vdf = big_valuation_capped(&dfx, p, x_approx.k);
    if vdf >= x_approx.k || vf <= 2 * vdf {
        return Err(Error::NotLiftable(format!(
            "|f(x)|_p = p^-{vf} is not smaller than |f'(x)|_p^2 = p^-{} at precision {}",
            2 * vdf,
            x_approx.k
        )));
    }

    // Work with enough headroom for the derivative's fixed valuation.
    let t = vdf;
    let work_k = target_k + 2 * t + 1;
    let modulus = BigInt::from(p).pow(work_k);
    let pt = BigInt::from(p).pow(t);
    let mut x = x_approx.r.clone() % &modulus;

    for _ in 0..64 {
        let fx = f(&x) % &modulus;
        if big_valuation_capped(&fx, p, target_k + t) >= target_k + t {
            break;
        }
        // delta = f(x) / f'(x): split off p^t and invert the unit part.
        let dfx = fprime(&x) % &modulus;
        let unit = &dfx / &pt;
        let inv = mod_inverse_big(&unit, &modulus)
            .ok_or_else(|| Error::NotLiftable("derivative unit part not invertible".into()))?;
        let delta = ((&fx / &pt) * inv) % &modulus;
        x = (x - delta) % &modulus;
        if x.is_negative() {
            x += &modulus;
        }
    }

    let out = PadicApprox::new(p, target_k, x);
    let check = f(&out.r) % out.modulus();
    if !check.is_zero() {
        return Err(Error::NotLiftable(
            "iteration failed to reach the requested precision".into(),
        ));
    }
    Ok(out)
}

fn mod_inverse_big(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let (mut r0, mut r1) = (m.clone(), a.clone() % m);
    if r1.is_negative() {
        r1 += m;
    }
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if !r0.is_one() {
        return None;
    }
    let mut inv = t0 % m;
    if inv.is_negative() {
        inv += m;
    }
    Some(inv)
}

/// Solve a1 y1^2 + a2 y2^2 + a3 y3^2 = x mod p^k at an odd prime where all
/// coefficients are units.
///
/// The residue sets {a1 + a2 t^2} and {x - a3 s^2} over the prime field each
/// have (p+1)/2 elements, hence overlap; the overlap pins y2, y3 and a Hensel
/// lift from 1 supplies y1.
pub fn unit_ternary_local_solve(
    coefficients: (i64, i64, i64),
    target: i64,
    p: u64,
    k: u32,
) -> Result<(PadicApprox, PadicApprox, PadicApprox)> {
    if p == 2 || !is_prime(p) {
        return Err(Error::DyadicPrime { p });
    }
    let (a1, a2, a3) = coefficients;
    if a1 == 0 || a2 == 0 || a3 == 0 {
        return Err(Error::ZeroFormCoefficient);
    }
    if a1 % p as i64 == 0 || a2 % p as i64 == 0 || a3 % p as i64 == 0 {
        return Err(Error::NonUnitCoefficient { p });
    }

    let pi = p as i64;
    let reduce = |n: i64| n.rem_euclid(pi);
    // first_t[v] = least t with a1 + a2 t^2 = v mod p
    let mut first_t = vec![None; p as usize];
    for t in 0..pi {
        let v = reduce(a1 + a2 * t * t) as usize;
        if first_t[v].is_none() {
            first_t[v] = Some(t);
        }
    }
    let (mut y2, mut y3) = (None, None);
    for s in 0..pi {
        let v = reduce(target - a3 * s * s) as usize;
        if let Some(t) = first_t[v] {
            y2 = Some(t);
            y3 = Some(s);
            break;
        }
    }
    // The two (p+1)/2-element value sets always overlap.
    let (y2, y3) = (y2.expect("overlap must exist"), y3.expect("overlap must exist"));

    // Lift y1 from 1: f(Y) = a1 Y^2 + (a2 y2^2 + a3 y3^2 - x).
    let c0 = a2 * y2 * y2 + a3 * y3 * y3 - target;
    let y1 = hensel_lift_quadratic(a1, c0, &PadicApprox::new(p, 1, 1), k)?;

    let out = (y1, PadicApprox::new(p, k, y2), PadicApprox::new(p, k, y3));
    debug_assert!({
        let m = BigInt::from(p).pow(k);
        let v = (BigInt::from(a1) * &out.0.r * &out.0.r
            + BigInt::from(a2) * &out.1.r * &out.1.r
            + BigInt::from(a3) * &out.2.r * &out.2.r
            - BigInt::from(target))
            % &m;
        v.is_zero()
    });
    Ok(out)
}

/// Probe precision exponent for the residue search at a bad prime: any
/// K > 2 max_i v_p(2 a_i) makes every primitive solution carry a
/// Hensel-liftable coordinate, so the verdict is exact and stable in K.
/// The two extra digits of margin match the stability spot-checks.
pub fn default_probe_precision(coefficients: (i64, i64, i64), p: u64) -> u32 {
    let (a1, a2, a3) = coefficients;
    let vmax = [a1, a2, a3]
        .iter()
        .map(|&c| valuation(2 * c.abs(), p).unwrap())
        .max()
        .unwrap();
    2 * vmax + 3
}

/// Local solvability of a1 y1^2 + a2 y2^2 + a3 y3^2 = n over the completion
/// at `place` (over the p-adic integers at finite places).
pub fn local_solvable(coefficients: (i64, i64, i64), n: i64, place: Place) -> bool {
    match place {
        Place::Infinity => solvable_at_infinity(coefficients, n),
        Place::Prime(p) => {
            let (a1, a2, a3) = coefficients;
            if p != 2 && (a1 * a2 * a3) % p as i64 != 0 {
                // Unit diagonal ternary forms are universal at odd primes.
                return true;
            }
            let k = default_probe_precision(coefficients, p);
            local_solvable_at_precision(coefficients, n, p, k)
        }
    }
}

fn solvable_at_infinity((a1, a2, a3): (i64, i64, i64), n: i64) -> bool {
    if n == 0 {
        return true;
    }
    let pos = [a1, a2, a3].iter().filter(|&&c| c > 0).count();
    match pos {
        3 => n > 0,
        0 => n < 0,
        _ => true, // indefinite forms represent every real number
    }
}

/// Residue search mod p^k accepting only solutions with a Hensel-liftable
/// coordinate, with recursion on n/p^2 for the all-divisible branch. The
/// result is independent of k once k reaches `default_probe_precision`.
pub fn local_solvable_at_precision(
    coefficients: (i64, i64, i64),
    n: i64,
    p: u64,
    k: u32,
) -> bool {
    LocalProbe::new(coefficients, p, k).solvable(n)
}

/// Residue data for one coefficient: which classes c*y^2 hits mod p^k, and
/// the smallest derivative valuation v(2cy) attaining each.
struct CoefficientTable {
    occupied: Vec<Option<u32>>,
    classes: Vec<u32>,
}

fn coefficient_table(c: i64, p: u64, k: u32, m: u64) -> CoefficientTable {
    let vc = valuation(2 * c, p).unwrap();
    let mi = m as i64;
    let mut occupied: Vec<Option<u32>> = vec![None; m as usize];
    let mut classes = Vec::new();
    for y in 0..mi {
        let vy = if y == 0 { k } else { valuation(y, p).unwrap() };
        let r = (((c % mi) * y).rem_euclid(mi) * y).rem_euclid(mi) as usize;
        let d = vc.saturating_add(vy);
        match occupied[r] {
            None => {
                occupied[r] = Some(d);
                classes.push(r as u32);
            }
            Some(old) if d < old => occupied[r] = Some(d),
            _ => {}
        }
    }
    CoefficientTable { occupied, classes }
}

/// Precomputed residue tables for one (form, p, precision): asking about
/// different targets reuses the tables, including across the valuation
/// stripping recursion.
pub struct LocalProbe {
    p: u64,
    k: u32,
    m: u64,
    first: CoefficientTable,
    /// sums c2 y2^2 + c3 y3^2 reachable mod p^k
    any23: Vec<bool>,
    /// same, restricted to pairs with a Hensel-liftable coordinate
    lift23: Vec<bool>,
}

impl LocalProbe {
    pub fn new((a1, a2, a3): (i64, i64, i64), p: u64, k: u32) -> Self {
        assert!(is_prime(p), "probe prime must be prime");
        let m = (p as u128).pow(k);
        assert!(m <= 1 << 26, "probe modulus too large");
        let m = m as u64;
        let liftable = |d: u32| 2 * d < k;

        let first = coefficient_table(a1, p, k, m);
        let t2 = coefficient_table(a2, p, k, m);
        let t3 = coefficient_table(a3, p, k, m);

        let mut any23 = vec![false; m as usize];
        let mut lift23 = vec![false; m as usize];
        for &r2 in &t2.classes {
            let d2 = t2.occupied[r2 as usize].unwrap();
            for &r3 in &t3.classes {
                let d3 = t3.occupied[r3 as usize].unwrap();
                let c = (r2 as u64 + r3 as u64) % m;
                any23[c as usize] = true;
                if liftable(d2) || liftable(d3) {
                    lift23[c as usize] = true;
                }
            }
        }

        LocalProbe {
            p,
            k,
            m,
            first,
            any23,
            lift23,
        }
    }

    /// One residue-search round at this precision, no stripping.
    fn liftable_solution(&self, n: i64) -> bool {
        let m = self.m;
        let liftable = |d: u32| 2 * d < self.k;
        let n_mod = n.rem_euclid(m as i64) as u64;
        for &r1 in &self.first.classes {
            let d1 = self.first.occupied[r1 as usize].unwrap();
            let c = ((n_mod + m - r1 as u64) % m) as usize;
            if (liftable(d1) && self.any23[c]) || self.lift23[c] {
                return true;
            }
        }
        false
    }

    /// Full decision: accept a liftable residue solution at any stage of
    /// dividing n by p^2 (an all-divisible solution scales down exactly).
    pub fn solvable(&self, n: i64) -> bool {
        let p2 = (self.p * self.p) as i64;
        let mut n = n;
        loop {
            if n == 0 {
                return true;
            }
            if self.liftable_solution(n) {
                return true;
            }
            if n % p2 == 0 {
                n /= p2;
            } else {
                return false;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn approx_i64(x: &PadicApprox) -> i64 {
        x.r.to_i64().unwrap()
    }

    #[test]
    fn padic_approx_normalizes() {
        let x = PadicApprox::new(7, 2, -3);
        assert_eq!(x.r, BigInt::from(46));
        assert_eq!(x.valuation(), 0);
        assert_eq!(PadicApprox::new(5, 3, 50).valuation(), 2);
        assert_eq!(PadicApprox::new(5, 3, 0).valuation(), 3);
    }

    #[test]
    fn hensel_exact_root_persists() {
        // f(X) = X^2 - 1 with root 1 stays 1 at any precision.
        let out = hensel_lift_quadratic(1, -1, &PadicApprox::new(7, 1, 1), 4).unwrap();
        assert_eq!(out.r, BigInt::from(1));
        assert_eq!(out.k, 4);
    }

    #[test]
    fn hensel_sqrt_two_mod_343() {
        // Independent oracle: scan all residues mod 343 for squares of 2.
        let mut expected = None;
        for y in 0..343i64 {
            if (y * y - 2).rem_euclid(343) == 0 && y.rem_euclid(7) == 3 {
                expected = Some(y);
                break;
            }
        }
        let expected = expected.expect("square root of 2 exists mod 343");
        assert_eq!(expected, 108);
        let out = hensel_lift_quadratic(1, -2, &PadicApprox::new(7, 1, 3), 3).unwrap();
        assert_eq!(out.r, BigInt::from(expected));
    }

    #[test]
    fn hensel_criterion_rejects() {
        // f(X) = X^2 - 7 at x = 1: f(1) = -6 is a 7-adic unit.
        let err = hensel_lift_quadratic(1, -7, &PadicApprox::new(7, 1, 1), 3);
        assert!(matches!(err, Err(Error::NotLiftable(_))));
    }

    #[test]
    fn hensel_output_satisfies_f_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut successes = 0;
        for _ in 0..300 {
            let p = [3u64, 5, 7, 11][rng.gen_range(0..4)];
            let c2 = rng.gen_range(1..30i64);
            let x0 = rng.gen_range(0..p as i64);
            let c0 = rng.gen_range(-50..50i64);
            let target_k = rng.gen_range(2..=8u32);
            if let Ok(root) = hensel_lift_quadratic(c2, c0, &PadicApprox::new(p, 1, x0), target_k)
            {
                let m = BigInt::from(p).pow(target_k);
                let v = (BigInt::from(c2) * &root.r * &root.r + BigInt::from(c0)) % &m;
                assert!(v.is_zero());
                // agrees with the seed mod p
                assert_eq!(&root.r % p, BigInt::from(x0) % p);
                successes += 1;
            }
        }
        assert!(successes > 20, "expected a healthy number of liftable seeds");
    }

    #[test]
    fn unit_solve_examples() {
        let eval = |coeffs: (i64, i64, i64), w: &(PadicApprox, PadicApprox, PadicApprox), m: i64| {
            (coeffs.0 * approx_i64(&w.0).pow(2)
                + coeffs.1 * approx_i64(&w.1).pow(2)
                + coeffs.2 * approx_i64(&w.2).pow(2))
            .rem_euclid(m)
        };

        let w = unit_ternary_local_solve((1, 1, 1), 0, 5, 2).unwrap();
        assert_eq!(eval((1, 1, 1), &w, 25), 0);

        let w = unit_ternary_local_solve((1, 1, 1), 3, 5, 2).unwrap();
        assert_eq!(eval((1, 1, 1), &w, 25), 3);

        let w = unit_ternary_local_solve((2, 3, -6), 23, 7, 3).unwrap();
        assert_eq!(eval((2, 3, -6), &w, 343), 23);
    }

    #[test]
    fn unit_solve_rejects_bad_inputs() {
        assert!(matches!(
            unit_ternary_local_solve((1, 1, 1), 3, 2, 2),
            Err(Error::DyadicPrime { .. })
        ));
        assert!(matches!(
            unit_ternary_local_solve((5, 1, 1), 3, 5, 2),
            Err(Error::NonUnitCoefficient { .. })
        ));
    }

    #[test]
    fn universality_at_five() {
        // Spot form of the acceptance sweep: every residue mod 125 verifies.
        for coeffs in [(1i64, 1, 1), (2, 3, 1)] {
            for x in 0..125i64 {
                let w = unit_ternary_local_solve(coeffs, x, 5, 3).unwrap();
                let s = (coeffs.0 * approx_i64(&w.0).pow(2)
                    + coeffs.1 * approx_i64(&w.1).pow(2)
                    + coeffs.2 * approx_i64(&w.2).pow(2))
                .rem_euclid(125);
                assert_eq!(s, x);
            }
        }
    }

    #[test]
    fn infinity_cases() {
        assert!(local_solvable((2, 3, -6), 23, Place::Infinity));
        assert!(local_solvable((2, 3, -6), -23, Place::Infinity));
        assert!(!local_solvable((1, 1, 1), -1, Place::Infinity));
        assert!(local_solvable((1, 1, 1), 0, Place::Infinity));
        assert!(!local_solvable((-1, -1, -1), 5, Place::Infinity));
    }

    #[test]
    fn dyadic_obstruction_examples() {
        // 7 = 7 mod 8 is not a sum of three squares, already 2-adically.
        assert!(!local_solvable((1, 1, 1), 7, Place::Prime(2)));
        assert!(!local_solvable((1, 1, 1), 28, Place::Prime(2)));
        assert!(local_solvable((1, 1, 1), 6, Place::Prime(2)));
        assert!(local_solvable((1, 1, 1), 32, Place::Prime(2)));
    }

    #[test]
    fn good_odd_primes_are_universal() {
        for n in -10i64..=10 {
            assert!(local_solvable((2, 3, -6), n, Place::Prime(5)));
            assert!(local_solvable((1, 1, 1), n, Place::Prime(7)));
        }
    }

    /// Blunt independent oracle: solutions mod p^6 with a coordinate of
    /// valuation <= 1, after stripping square factors of p from n.
    struct BruteOracle {
        m: i64,
        p2: i64,
        /// c3 residue -> min valuation of y3 attaining it
        third: Vec<u32>,
        third_classes: Vec<u32>,
        /// c1 y1^2 + c2 y2^2 residue -> min over pairs of min(v1, v2)
        pair: Vec<u32>,
    }

    impl BruteOracle {
        fn new(coeffs: (i64, i64, i64), p: u64) -> Self {
            let m = (p as i64).pow(6);
            let val = |y: i64| valuation(y, p).unwrap_or(6).min(6);
            let table = |c: i64| {
                let mut best = vec![u32::MAX; m as usize];
                let mut classes = Vec::new();
                for y in 0..m {
                    let r = (((c % m) * y).rem_euclid(m) * y).rem_euclid(m) as usize;
                    if best[r] == u32::MAX {
                        classes.push(r as u32);
                    }
                    best[r] = best[r].min(val(y));
                }
                (best, classes)
            };
            let (t1, c1) = table(coeffs.0);
            let (t2, c2) = table(coeffs.1);
            let (third, third_classes) = table(coeffs.2);
            let mut pair = vec![u32::MAX; m as usize];
            for &r1 in &c1 {
                let v1 = t1[r1 as usize];
                for &r2 in &c2 {
                    let v2 = t2[r2 as usize];
                    let c = (r1 as usize + r2 as usize) % m as usize;
                    pair[c] = pair[c].min(v1.min(v2));
                }
            }
            BruteOracle {
                m,
                p2: (p * p) as i64,
                third,
                third_classes,
                pair,
            }
        }

        fn solvable(&self, n: i64) -> bool {
            if n == 0 {
                return true;
            }
            let m = self.m as usize;
            let nm = n.rem_euclid(self.m) as usize;
            for &r3 in &self.third_classes {
                let v3 = self.third[r3 as usize];
                let c = (nm + m - r3 as usize) % m;
                let v12 = self.pair[c];
                if v12 != u32::MAX && v12.min(v3) <= 1 {
                    return true;
                }
            }
            if n % self.p2 == 0 {
                return self.solvable(n / self.p2);
            }
            false
        }
    }

    #[test]
    fn agrees_with_brute_oracle() {
        for coeffs in [(1i64, 1, 1), (2, 3, -6)] {
            for &p in &[2u64, 3, 5] {
                let oracle = BruteOracle::new(coeffs, p);
                for n in -50i64..=50 {
                    assert_eq!(
                        local_solvable(coeffs, n, Place::Prime(p)),
                        oracle.solvable(n),
                        "form {coeffs:?}, n = {n}, p = {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn stable_under_extra_precision_spec_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for coeffs in [(1i64, 1, 1), (2, 3, -6)] {
            for &p in &[2u64, 3] {
                let k = default_probe_precision(coeffs, p);
                let base = LocalProbe::new(coeffs, p, k);
                let finer = LocalProbe::new(coeffs, p, k + 2);
                for _ in 0..25 {
                    let n = rng.gen_range(-300..300i64);
                    assert_eq!(
                        base.solvable(n),
                        finer.solvable(n),
                        "form {coeffs:?}, n = {n}, p = {p}, k = {k}"
                    );
                }
            }
        }
    }

    #[test]
    fn stable_under_extra_precision_random_forms() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let nonzero = |rng: &mut ChaCha8Rng| loop {
                let c = rng.gen_range(-9i64..=9);
                if c != 0 {
                    break c;
                }
            };
            let coeffs = (nonzero(&mut rng), nonzero(&mut rng), nonzero(&mut rng));
            let n = rng.gen_range(-300..300i64);
            let p = [2u64, 3][rng.gen_range(0..2)];
            let k = default_probe_precision(coeffs, p);
            assert_eq!(
                local_solvable_at_precision(coeffs, n, p, k),
                local_solvable_at_precision(coeffs, n, p, k + 2),
                "form {coeffs:?}, n = {n}, p = {p}, k = {k}"
            );
        }
    }

    #[test]
    fn default_precision_matches_product_valuation_probe() {
        // The default uses the max coefficient valuation; the coarser bound
        // 2 v_p(4 a1 a2 a3) + 3 must yield identical verdicts.
        for coeffs in [(1i64, 1, 1), (2, 3, -6), (2, 6, -3), (4, 3, -2)] {
            for &p in &[2u64, 3] {
                let (a1, a2, a3) = coeffs;
                let product_k =
                    2 * valuation(4 * (a1 * a2 * a3).abs(), p).unwrap() + 3;
                let default_k = default_probe_precision(coeffs, p);
                assert!(default_k <= product_k);
                let coarse = LocalProbe::new(coeffs, p, product_k);
                let fine = LocalProbe::new(coeffs, p, default_k);
                for n in -60i64..=60 {
                    assert_eq!(
                        fine.solvable(n),
                        coarse.solvable(n),
                        "form {coeffs:?}, n = {n}, p = {p}"
                    );
                }
            }
        }
    }
}
