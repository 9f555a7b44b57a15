//! The standard order O = Z<1,i,j,k>, membership in Gamma = O^1 and its
//! principal congruence subgroups Gamma(q), and the exact index
//! [Gamma : Gamma(q)] = #(O/qO)^1 computed three independent ways: direct
//! enumeration, prime-power lifting at good primes, and CRT multiplication
//! across the factorization of q.

use std::f64::consts::PI;

use num::{BigInt, One, ToPrimitive, Zero};

use crate::arith::{factorize, gcd, is_prime};
use crate::error::{Error, Result};
use crate::quaternion::{Quaternion, QuaternionAlgebra};

/// Largest level enumerated directly (q^4 tuples; about 1.7e7 at the limit).
pub const DIRECT_COUNT_LIMIT: u64 = 64;

/// Default genus constant: with mu_bar = 4 pi the genus estimate is
/// 1 + index. Growth statements use log(index), which this shifts by an
/// additive constant only.
pub const MU_BAR_DEFAULT: f64 = 4.0 * PI;

/// Integer 4-vector in the basis 1, i, j, k of the standard order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderElement {
    pub coords: [BigInt; 4],
}

impl OrderElement {
    pub fn new(coords: [BigInt; 4]) -> Self {
        OrderElement { coords }
    }

    pub fn from_i64(x0: i64, x1: i64, x2: i64, x3: i64) -> Self {
        OrderElement::new([
            BigInt::from(x0),
            BigInt::from(x1),
            BigInt::from(x2),
            BigInt::from(x3),
        ])
    }

    pub fn identity() -> Self {
        OrderElement::from_i64(1, 0, 0, 0)
    }

    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::new([
            self.coords[0].clone().into(),
            self.coords[1].clone().into(),
            self.coords[2].clone().into(),
            self.coords[3].clone().into(),
        ])
    }

    /// Reduced norm x0^2 - a x1^2 - b x2^2 + ab x3^2, exactly.
    pub fn norm(&self, alg: &QuaternionAlgebra) -> BigInt {
        let [x0, x1, x2, x3] = &self.coords;
        let a = BigInt::from(alg.a);
        let b = BigInt::from(alg.b);
        x0 * x0 - &a * (x1 * x1) - &b * (x2 * x2) + &a * &b * (x3 * x3)
    }

    /// Reduced trace 2 x0.
    pub fn trace(&self) -> BigInt {
        &self.coords[0] + &self.coords[0]
    }
}

/// Norm-one test: membership in Gamma = O^1.
pub fn in_gamma(alg: &QuaternionAlgebra, x: &OrderElement) -> bool {
    x.norm(alg).is_one()
}

/// Membership in the principal congruence subgroup Gamma(q):
/// norm one, x0 = 1 and x1 = x2 = x3 = 0 mod q.
pub fn in_gamma_level(alg: &QuaternionAlgebra, x: &OrderElement, q: u64) -> bool {
    if !in_gamma(alg, x) {
        return false;
    }
    let q = BigInt::from(q);
    ((&x.coords[0] - 1u32) % &q).is_zero()
        && x.coords[1..].iter().all(|c| (c % &q).is_zero())
}

/// A level q >= 1 with its cached prime factorization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Level {
    q: u64,
    factors: Vec<(u64, u32)>,
}

impl Level {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidLevel { q });
        }
        Ok(Level {
            q,
            factors: factorize(q),
        })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMethod {
    Direct,
    Lifted,
    Crt,
}

impl CountMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountMethod::Direct => "direct",
            CountMethod::Lifted => "lifted",
            CountMethod::Crt => "crt",
        }
    }
}

/// #(O/qO)^1 together with the route that computed it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitGroupCount {
    pub q: u64,
    pub count: BigInt,
    pub method: CountMethod,
}

/// Exact count of tuples in (Z/q)^4 with x0^2 - a x1^2 - b x2^2 + ab x3^2 = 1
/// mod q, by full enumeration.
pub fn count_units_direct(alg: &QuaternionAlgebra, q: u64) -> Result<UnitGroupCount> {
    count_units_direct_threaded(alg, q, 1)
}

/// Direct count with the x0 strata split across up to `threads` workers.
/// The reduction is an exact integer sum, so the result is
/// schedule-independent.
pub fn count_units_direct_threaded(
    alg: &QuaternionAlgebra,
    q: u64,
    threads: usize,
) -> Result<UnitGroupCount> {
    if q == 0 {
        return Err(Error::InvalidLevel { q });
    }
    if q > DIRECT_COUNT_LIMIT {
        return Err(Error::DirectCountBudget {
            q,
            limit: DIRECT_COUNT_LIMIT,
        });
    }
    let qu = q as usize;
    let a = alg.a.rem_euclid(q as i64) as u64;
    let b = alg.b.rem_euclid(q as i64) as u64;
    let ab = (a * b) % q;
    let sq: Vec<u64> = (0..q).map(|x| (x * x) % q).collect();
    let a_sq: Vec<u64> = sq.iter().map(|&s| (a * s) % q).collect();
    let b_sq: Vec<u64> = sq.iter().map(|&s| (b * s) % q).collect();
    let ab_sq: Vec<u64> = sq.iter().map(|&s| (ab * s) % q).collect();
    let target = 1 % q;

    let stratum = |x0_range: std::ops::Range<usize>| -> u64 {
        let mut count = 0u64;
        for x0 in x0_range {
            let t0 = sq[x0];
            for x1 in 0..qu {
                let t1 = (t0 + q - a_sq[x1]) % q;
                for x2 in 0..qu {
                    let t2 = (t1 + q - b_sq[x2]) % q;
                    for x3 in 0..qu {
                        if (t2 + ab_sq[x3]) % q == target {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    };

    let threads = threads.max(1).min(qu);
    let count = if threads == 1 {
        stratum(0..qu)
    } else {
        let chunk = qu.div_ceil(threads);
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..threads)
                .map(|t| {
                    let lo = t * chunk;
                    let hi = ((t + 1) * chunk).min(qu);
                    let stratum = &stratum;
                    scope.spawn(move || stratum(lo..hi))
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).sum()
        })
    };

    Ok(UnitGroupCount {
        q,
        count: BigInt::from(count),
        method: CountMethod::Direct,
    })
}

/// Counts at good prime powers by smooth lifting: the norm-one hypersurface
/// is smooth mod p when p does not divide 2ab, so each precision step scales
/// the count by p^3. Must agree with direct enumeration whenever the latter
/// is in budget.
pub fn count_units_prime_power(
    alg: &QuaternionAlgebra,
    p: u64,
    t: u32,
) -> Result<UnitGroupCount> {
    if !is_prime(p) {
        return Err(Error::OddPrimeRequired { q: p });
    }
    if t < 1 {
        return Err(Error::InvalidLevel { q: 0 });
    }
    let two_ab = 2 * alg.a.unsigned_abs() * alg.b.unsigned_abs();
    if two_ab % p == 0 {
        return Err(Error::RamifiedPrimePower { p });
    }
    let base = count_units_direct(alg, p)?;
    let q = p.checked_pow(t).ok_or(Error::InvalidLevel { q: u64::MAX })?;
    Ok(UnitGroupCount {
        q,
        count: base.count * BigInt::from(p).pow(3 * (t - 1)),
        method: CountMethod::Lifted,
    })
}

/// [Gamma : Gamma(q)] = #(O/qO)^1 via the CRT factorization of q: good
/// primes use the lifted count, primes dividing 2ab fall back to direct
/// enumeration of the full prime power.
pub fn index_gamma(alg: &QuaternionAlgebra, level: &Level) -> Result<UnitGroupCount> {
    let two_ab = 2 * alg.a.unsigned_abs() * alg.b.unsigned_abs();
    let mut count = BigInt::one();
    for &(p, t) in level.factors() {
        let factor = if two_ab % p == 0 {
            let pt = p.checked_pow(t).ok_or(Error::InvalidLevel { q: u64::MAX })?;
            count_units_direct(alg, pt)?.count
        } else {
            count_units_prime_power(alg, p, t)?.count
        };
        count *= factor;
    }
    Ok(UnitGroupCount {
        q: level.q(),
        count,
        method: CountMethod::Crt,
    })
}

/// One row of the index growth table.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthRow {
    pub q: u64,
    pub index: BigInt,
    /// index / q^3; equals 1 - q^-2 at split prime levels.
    pub ratio_to_cube: f64,
}

/// index/q^3 per level; all levels must be coprime to 2ab.
pub fn growth_exponent_check(alg: &QuaternionAlgebra, q_list: &[u64]) -> Result<Vec<GrowthRow>> {
    let two_ab_abs = 2 * alg.a.unsigned_abs() * alg.b.unsigned_abs();
    let mut rows = Vec::with_capacity(q_list.len());
    for &q in q_list {
        if q == 0 || gcd(q, two_ab_abs) != 1 {
            return Err(Error::LevelNotCoprime {
                q,
                two_ab: 2 * alg.a * alg.b,
            });
        }
        let index = index_gamma(alg, &Level::new(q)?)?.count;
        let ratio = index.to_f64().unwrap() / (q as f64).powi(3);
        rows.push(GrowthRow {
            q,
            index,
            ratio_to_cube: ratio,
        });
    }
    Ok(rows)
}

/// Genus from the index under a configurable hyperbolic co-area constant:
/// 1 + mu_bar * index / (4 pi). The default mu_bar = 4 pi makes this
/// 1 + index.
pub fn genus_estimate(index: &BigInt, mu_bar: f64) -> f64 {
    1.0 + mu_bar * index.to_f64().unwrap_or(f64::INFINITY) / (4.0 * PI)
}

/// All elements of Gamma(q) with every coordinate bounded by `bound` in
/// absolute value. Exhaustive over the congruence-constrained sublattice.
pub fn gamma_level_box_elements(
    alg: &QuaternionAlgebra,
    q: u64,
    bound: i64,
) -> Vec<OrderElement> {
    let qi = q as i64;
    let mut out = Vec::new();
    // x0 runs over values = 1 mod q; x1, x2, x3 over multiples of q.
    let first_ge = |lo: i64, residue: i64| {
        let mut v = lo;
        while v.rem_euclid(qi) != residue {
            v += 1;
        }
        v
    };
    let start0 = first_ge(-bound, 1 % qi);
    let start_m = first_ge(-bound, 0);
    let (a, b) = (alg.a as i128, alg.b as i128);
    let mut x0 = start0;
    while x0 <= bound {
        let mut x1 = start_m;
        while x1 <= bound {
            let mut x2 = start_m;
            while x2 <= bound {
                let mut x3 = start_m;
                while x3 <= bound {
                    let n = (x0 as i128) * (x0 as i128) - a * (x1 as i128) * (x1 as i128)
                        - b * (x2 as i128) * (x2 as i128)
                        + a * b * (x3 as i128) * (x3 as i128);
                    if n == 1 {
                        out.push(OrderElement::from_i64(x0, x1, x2, x3));
                    }
                    x3 += qi;
                }
                x2 += qi;
            }
            x1 += qi;
        }
        x0 += qi;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg() -> QuaternionAlgebra {
        QuaternionAlgebra::new(2, 3).unwrap()
    }

    #[test]
    fn gamma_membership_examples() {
        let alg = alg();
        assert!(in_gamma(&alg, &OrderElement::identity()));
        assert!(!in_gamma(&alg, &OrderElement::from_i64(0, 1, 0, 0))); // norm -2
        assert!(in_gamma(&alg, &OrderElement::from_i64(-24, 5, 15, 5)));
    }

    #[test]
    fn gamma_level_membership_examples() {
        let alg = alg();
        for q in [2u64, 3, 5, 7, 25] {
            assert!(in_gamma_level(&alg, &OrderElement::identity(), q));
        }
        let w = OrderElement::from_i64(-24, 5, 15, 5);
        assert!(in_gamma_level(&alg, &w, 5)); // -24 = 1 mod 5
        assert!(!in_gamma_level(&alg, &w, 7)); // 5 != 0 mod 7
    }

    #[test]
    fn direct_count_small_levels() {
        let alg = alg();
        assert_eq!(count_units_direct(&alg, 1).unwrap().count, BigInt::from(1));
        assert_eq!(count_units_direct(&alg, 2).unwrap().count, BigInt::from(8));
        assert_eq!(count_units_direct(&alg, 3).unwrap().count, BigInt::from(24));
        assert_eq!(count_units_direct(&alg, 5).unwrap().count, BigInt::from(120));
    }

    #[test]
    fn direct_count_budget() {
        assert!(matches!(
            count_units_direct(&alg(), 65),
            Err(Error::DirectCountBudget { .. })
        ));
    }

    #[test]
    fn threaded_count_matches_single() {
        let alg = alg();
        for q in [2u64, 7, 12, 25, 36] {
            let single = count_units_direct(&alg, q).unwrap().count;
            for threads in [2usize, 3, 8] {
                assert_eq!(
                    count_units_direct_threaded(&alg, q, threads).unwrap().count,
                    single
                );
            }
        }
    }

    #[test]
    fn split_prime_formula() {
        let alg = alg();
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61] {
            let count = count_units_direct(&alg, p).unwrap().count;
            assert_eq!(count, BigInt::from(p * (p * p - 1)), "p = {p}");
        }
    }

    #[test]
    fn lifted_count_examples() {
        let alg = alg();
        assert_eq!(
            count_units_prime_power(&alg, 5, 1).unwrap().count,
            BigInt::from(120)
        );
        let c25 = count_units_prime_power(&alg, 5, 2).unwrap();
        assert_eq!(c25.count, BigInt::from(15000));
        assert_eq!(c25.count, count_units_direct(&alg, 25).unwrap().count);
        assert_eq!(
            count_units_prime_power(&alg, 7, 1).unwrap().count,
            BigInt::from(336)
        );
        assert!(matches!(
            count_units_prime_power(&alg, 3, 2),
            Err(Error::RamifiedPrimePower { .. })
        ));
    }

    #[test]
    fn crt_index_examples() {
        let alg = alg();
        let c35 = index_gamma(&alg, &Level::new(35).unwrap()).unwrap();
        assert_eq!(c35.count, BigInt::from(40320u32));
        assert_eq!(
            index_gamma(&alg, &Level::new(1).unwrap()).unwrap().count,
            BigInt::one()
        );
        assert_eq!(
            index_gamma(&alg, &Level::new(25).unwrap()).unwrap().count,
            BigInt::from(15000)
        );
    }

    #[test]
    fn methods_agree_up_to_limit() {
        let alg = alg();
        for q in 2..=DIRECT_COUNT_LIMIT {
            let direct = count_units_direct(&alg, q).unwrap().count;
            let crt = index_gamma(&alg, &Level::new(q).unwrap()).unwrap().count;
            assert_eq!(direct, crt, "q = {q}");
        }
    }

    #[test]
    fn multiplicative_on_coprime_levels() {
        let alg = alg();
        for (q1, q2) in [(2u64, 3u64), (4, 9), (5, 7), (3, 8), (5, 12), (7, 9)] {
            let lhs = count_units_direct(&alg, q1 * q2).unwrap().count;
            let rhs = count_units_direct(&alg, q1).unwrap().count
                * count_units_direct(&alg, q2).unwrap().count;
            assert_eq!(lhs, rhs, "q1 = {q1}, q2 = {q2}");
        }
    }

    #[test]
    fn unit_count_floor_at_all_prime_powers() {
        let alg = alg();
        // count(p^t) > p^(3t-4), equivalently count * p^4 > p^(3t).
        for &p in &[2u64, 3, 5, 7] {
            for t in 1..=3u32 {
                let pt = p.pow(t);
                let count = if 12 % p == 0 {
                    if pt > DIRECT_COUNT_LIMIT {
                        continue;
                    }
                    count_units_direct(&alg, pt).unwrap().count
                } else {
                    count_units_prime_power(&alg, p, t).unwrap().count
                };
                let lhs = count * BigInt::from(p).pow(4);
                let rhs = BigInt::from(p).pow(3 * t);
                assert!(lhs > rhs, "floor fails at {p}^{t}");
            }
        }
    }

    #[test]
    fn growth_ratios() {
        let alg = alg();
        let rows = growth_exponent_check(&alg, &[5, 7, 13]).unwrap();
        assert!((rows[0].ratio_to_cube - 0.96).abs() < 1e-12);
        assert!((rows[1].ratio_to_cube - 336.0 / 343.0).abs() < 1e-12);
        assert!((rows[2].ratio_to_cube - (1.0 - 13.0f64.powi(-2))).abs() < 1e-12);
        assert!(matches!(
            growth_exponent_check(&alg, &[6]),
            Err(Error::LevelNotCoprime { .. })
        ));
    }

    #[test]
    fn genus_default_is_one_plus_index() {
        let idx = BigInt::from(120);
        assert!((genus_estimate(&idx, MU_BAR_DEFAULT) - 121.0).abs() < 1e-9);
    }

    #[test]
    fn kernel_of_reduction_is_gamma_level() {
        let alg = alg();
        let q = 5u64;
        // Over a small box of Gamma, congruence membership is exactly
        // reduction to the identity residue.
        for x0 in -10i64..=10 {
            for x1 in -6i64..=6 {
                for x2 in -6i64..=6 {
                    for x3 in -6i64..=6 {
                        let x = OrderElement::from_i64(x0, x1, x2, x3);
                        if !in_gamma(&alg, &x) {
                            continue;
                        }
                        let reduced_is_identity = x0.rem_euclid(5) == 1
                            && x1.rem_euclid(5) == 0
                            && x2.rem_euclid(5) == 0
                            && x3.rem_euclid(5) == 0;
                        assert_eq!(in_gamma_level(&alg, &x, q), reduced_is_identity);
                    }
                }
            }
        }
    }

    #[test]
    fn box_enumeration_finds_known_witnesses() {
        let alg = alg();
        let found = gamma_level_box_elements(&alg, 5, 60);
        assert!(found.contains(&OrderElement::identity()));
        assert!(found.contains(&OrderElement::from_i64(-24, 5, 15, 5)));
        for x in &found {
            assert!(in_gamma_level(&alg, x, 5));
        }
    }
}
